// Copyright 2026 The rfppg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rfppg/rfsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rfppg/error.hpp"
#include "rfppg/fft.hpp"

namespace rfppg {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Lobe widths as a fraction of the beat period.
constexpr double kSystolicWidth = 0.10;
constexpr double kDicroticWidth = 0.12;
constexpr double kDicroticRatio = 0.35;
constexpr double kDicroticDelay = 0.35;
constexpr double kSystolicPhase = 0.25;

constexpr std::size_t kSymbolsPerBlock = 250;

enum SeedStream : std::uint64_t {
  kStreamPulse = 1,
  kStreamSymbols = 2,
  kStreamNoise = 3,
  kStreamSensor = 4,
  kStreamArtifacts = 5,
};

}  // namespace

void OfdmConfig::validate() const {
  if (n_subcarriers == 0 || cp_len >= n_subcarriers)
    fail(ErrorCode::InvalidArgument, "OFDM config needs cp_len < n_subcarriers");
  if (!(sample_rate > 0.0) || !(center_freq > 0.0))
    fail(ErrorCode::InvalidArgument, "OFDM rates must be positive");
}

Displacement::Displacement(const ChestKinematics& kin)
    : rate_(kin.ppg_source.rate > 0.0 ? kin.ppg_source.rate : 1.0),
      cardiac_amp_(kin.cardiac_amp),
      resp_amp_(kin.resp_amp),
      resp_omega_(kTwoPi * kin.resp_rate),
      resp_phase_(kin.resp_phase) {
  if (kin.cardiac_amp < 0.0 || kin.resp_amp < 0.0)
    fail(ErrorCode::InvalidArgument, "displacement amplitudes must be non-negative");
  if (!kin.ppg_source.samples.empty() && kin.cardiac_amp > 0.0) {
    const double m = mean(kin.ppg_source.samples);
    double peak = 0.0;
    shape_.reserve(kin.ppg_source.size());
    for (double v : kin.ppg_source.samples) {
      shape_.push_back(v - m);
      peak = std::max(peak, std::abs(v - m));
    }
    if (peak > 0.0)
      for (double& v : shape_) v /= peak;
    else
      shape_.clear();
  }
}

double Displacement::operator()(double t) const {
  double cardiac = 0.0;
  if (!shape_.empty()) {
    const double pos = std::clamp(t * rate_, 0.0, static_cast<double>(shape_.size() - 1));
    const auto i = static_cast<std::size_t>(pos);
    const double f = pos - static_cast<double>(i);
    const double next = i + 1 < shape_.size() ? shape_[i + 1] : shape_[i];
    cardiac = shape_[i] + f * (next - shape_[i]);
  }
  double d = cardiac_amp_ * cardiac;
  if (resp_amp_ > 0.0) d += resp_amp_ * std::sin(resp_omega_ * t + resp_phase_);
  return d;
}

RealSeries gen_ppg_waveform(double hr_bpm, double hrv_pct, double duration_s, double rate,
                            std::uint64_t seed) {
  if (!(hr_bpm >= 30.0 && hr_bpm <= 200.0))
    fail(ErrorCode::InvalidRange, "heart rate must lie in [30, 200] bpm");
  if (!(hrv_pct >= 0.0 && hrv_pct <= 20.0))
    fail(ErrorCode::InvalidRange, "hrv_pct must lie in [0, 20]");
  if (!(duration_s > 0.0) || !(rate > 0.0))
    fail(ErrorCode::InvalidRange, "duration and rate must be positive");

  const double nominal = 60.0 / hr_bpm;
  Rng rng(seed);

  struct Beat {
    double peak;
    double period;
  };
  std::vector<Beat> beats;
  // One beat of lead-in so the first samples carry the previous beat's tail.
  double boundary = -nominal;
  while (boundary < duration_s + nominal) {
    const double period = nominal * (1.0 + hrv_pct / 100.0 * rng.uniform(-1.0, 1.0));
    beats.push_back({boundary + kSystolicPhase * nominal, period});
    boundary += period;
  }

  const auto n = static_cast<std::size_t>(std::llround(duration_s * rate));
  RealSeries out{std::vector<double>(n, 0.0), rate};
  for (const Beat& b : beats) {
    const double sys_sigma = kSystolicWidth * b.period;
    const double dic_sigma = kDicroticWidth * b.period;
    const double dic_peak = b.peak + kDicroticDelay * b.period;
    const double lo = b.peak - 6.0 * sys_sigma;
    const double hi = dic_peak + 6.0 * dic_sigma;
    const auto i0 = static_cast<std::size_t>(std::max(0.0, std::ceil(lo * rate)));
    const auto i1 = static_cast<std::size_t>(
        std::clamp(std::floor(hi * rate), -1.0, static_cast<double>(n) - 1.0) + 1.0);
    for (std::size_t i = i0; i < i1; ++i) {
      const double t = static_cast<double>(i) / rate;
      const double a = (t - b.peak) / sys_sigma;
      const double c = (t - dic_peak) / dic_sigma;
      out.samples[i] += std::exp(-0.5 * a * a) + kDicroticRatio * std::exp(-0.5 * c * c);
    }
  }
  return out;
}

Eigen::MatrixXcd gen_qpsk_symbols(std::size_t n_symbols, std::size_t n_subcarriers,
                                  std::uint64_t seed) {
  if (n_symbols == 0 || n_subcarriers == 0)
    fail(ErrorCode::InvalidArgument, "QPSK matrix needs at least one symbol and subcarrier");
  const double a = std::numbers::sqrt2 / 2.0;
  Rng rng(seed);
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(n_subcarriers),
                       static_cast<Eigen::Index>(n_symbols));
  std::uint64_t bits = 0;
  int left = 0;
  for (Eigen::Index m = 0; m < out.cols(); ++m) {
    for (Eigen::Index k = 0; k < out.rows(); ++k) {
      if (left == 0) {
        bits = rng.next();
        left = 32;
      }
      const double re = (bits & 1U) ? -a : a;
      const double im = (bits & 2U) ? -a : a;
      bits >>= 2;
      --left;
      out(k, m) = Complex(re, im);
    }
  }
  return out;
}

ComplexSeries ofdm_modulate(const Eigen::MatrixXcd& symbols, const OfdmConfig& cfg) {
  cfg.validate();
  if (static_cast<std::size_t>(symbols.rows()) != cfg.n_subcarriers)
    fail(ErrorCode::ShapeMismatch, "symbol matrix has " + std::to_string(symbols.rows()) +
                                       " rows, expected " +
                                       std::to_string(cfg.n_subcarriers));
  const std::size_t n = cfg.n_subcarriers;
  const std::size_t sym_len = cfg.symbol_length();
  ComplexSeries out{std::vector<Complex>(static_cast<std::size_t>(symbols.cols()) * sym_len),
                    cfg.sample_rate};
  std::vector<Complex> buf(n);
  for (Eigen::Index m = 0; m < symbols.cols(); ++m) {
    for (std::size_t k = 0; k < n; ++k) buf[k] = symbols(static_cast<Eigen::Index>(k), m);
    idft_inplace(buf);
    Complex* dst = out.samples.data() + static_cast<std::size_t>(m) * sym_len;
    std::copy(buf.end() - static_cast<std::ptrdiff_t>(cfg.cp_len), buf.end(), dst);
    std::copy(buf.begin(), buf.end(), dst + cfg.cp_len);
  }
  return out;
}

std::vector<Complex> apply_channel_block(std::span<const Complex> tx, double sample_rate,
                                         std::size_t first_sample, const Displacement& motion,
                                         const ChannelModel& ch, Rng& noise_rng) {
  if (!(ch.wavelength > 0.0)) fail(ErrorCode::InvalidArgument, "wavelength must be positive");
  if (std::abs(ch.chest_path.gain) == 0.0)
    fail(ErrorCode::InvalidArgument, "chest path gain must be non-zero");
  const std::size_t n = tx.size();
  std::vector<Complex> rx(n, Complex(0.0, 0.0));
  for (const PathTap& p : ch.static_paths)
    for (std::size_t i = p.delay; i < n; ++i) rx[i] += p.gain * tx[i - p.delay];

  const double k = 4.0 * std::numbers::pi / ch.wavelength;
  const std::size_t cd = ch.chest_path.delay;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(first_sample + i) / sample_rate;
    const double phi = k * motion(t);
    const Complex src = i >= cd ? tx[i - cd] : Complex(0.0, 0.0);
    rx[i] += ch.chest_path.gain * std::polar(1.0, phi) * src;
  }

  if (std::isfinite(ch.noise_snr_db) && n > 0) {
    double power = 0.0;
    for (const Complex& c : rx) power += std::norm(c);
    power /= static_cast<double>(n);
    const double sigma = std::sqrt(power / std::pow(10.0, ch.noise_snr_db / 10.0) / 2.0);
    for (Complex& c : rx) {
      const double re = noise_rng.normal();
      const double im = noise_rng.normal();
      c += Complex(sigma * re, sigma * im);
    }
  }
  return rx;
}

ComplexSeries apply_channel(const ComplexSeries& tx, const ChestKinematics& chest,
                            const ChannelModel& ch, std::uint64_t seed) {
  if (std::abs(tx.rate - 20000.0) > 1e-9)
    fail(ErrorCode::RateMismatch, "apply_channel expects 20 kHz samples, got " +
                                      std::to_string(tx.rate));
  const Displacement motion(chest);
  Rng rng(seed);
  return ComplexSeries{apply_channel_block(tx.samples, tx.rate, 0, motion, ch, rng), tx.rate};
}

SubcarrierMatrix ofdm_demodulate(const ComplexSeries& rx, const Eigen::MatrixXcd& tx_symbols,
                                 const OfdmConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.n_subcarriers;
  const std::size_t sym_len = cfg.symbol_length();
  if (static_cast<std::size_t>(tx_symbols.rows()) != n)
    fail(ErrorCode::ShapeMismatch, "transmitted symbol matrix has wrong subcarrier count");
  const auto n_symbols = static_cast<std::size_t>(tx_symbols.cols());
  if (rx.samples.size() != n_symbols * sym_len)
    fail(ErrorCode::ShapeMismatch, "received length " + std::to_string(rx.samples.size()) +
                                       " != symbols * " + std::to_string(sym_len));
  SubcarrierMatrix out{Eigen::MatrixXcd(static_cast<Eigen::Index>(n),
                                        static_cast<Eigen::Index>(n_symbols)),
                       cfg.symbol_rate()};
  std::vector<Complex> buf(n);
  for (std::size_t m = 0; m < n_symbols; ++m) {
    const Complex* src = rx.samples.data() + m * sym_len + cfg.cp_len;
    std::copy(src, src + n, buf.begin());
    dft_inplace(buf);
    for (std::size_t k = 0; k < n; ++k) {
      const auto kk = static_cast<Eigen::Index>(k);
      const auto mm = static_cast<Eigen::Index>(m);
      out.estimates(kk, mm) = buf[k] / tx_symbols(kk, mm);
    }
  }
  return out;
}

double symbol_center_time(std::size_t m, const OfdmConfig& cfg) {
  const double centre = static_cast<double>(m * cfg.symbol_length() + cfg.cp_len) +
                        0.5 * static_cast<double>(cfg.n_subcarriers - 1);
  return centre / cfg.sample_rate;
}

ChannelModel default_channel(Rng& rng, double snr_db, double wavelength) {
  ChannelModel ch;
  const Complex direct = std::polar(1.0, rng.uniform(0.0, kTwoPi));
  ch.static_paths.push_back({direct, 0});
  ch.static_paths.push_back({std::polar(0.3, rng.uniform(0.0, kTwoPi)), 3});
  // Quadrature with the direct path keeps |H| monotone in the chest phase.
  ch.chest_path = {std::polar(0.6, std::arg(direct) - 0.5 * std::numbers::pi), 0};
  ch.noise_snr_db = snr_db;
  ch.wavelength = wavelength;
  return ch;
}

Eigen::MatrixXcd record_tx_symbols(std::uint64_t record_seed, std::size_t n_symbols,
                                   const OfdmConfig& cfg) {
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(cfg.n_subcarriers),
                       static_cast<Eigen::Index>(n_symbols));
  const std::uint64_t symbol_seed = mix_seed(record_seed, kStreamSymbols);
  for (std::size_t first = 0, block = 0; first < n_symbols; first += kSymbolsPerBlock, ++block) {
    const std::size_t count = std::min(kSymbolsPerBlock, n_symbols - first);
    out.middleCols(static_cast<Eigen::Index>(first), static_cast<Eigen::Index>(count)) =
        gen_qpsk_symbols(count, cfg.n_subcarriers, mix_seed(symbol_seed, block));
  }
  return out;
}

SimulatedRecord simulate_record(const RecordSpec& spec, const OfdmConfig& cfg,
                                bool keep_raw_iq) {
  cfg.validate();
  SimulatedRecord rec;
  rec.ppg_clean = gen_ppg_waveform(spec.hr_bpm, spec.hrv_pct, spec.duration_s, spec.ppg_rate,
                                   mix_seed(spec.seed, kStreamPulse));

  ChestKinematics kin{spec.cardiac_amp, spec.resp_amp, spec.resp_rate, spec.resp_phase,
                      rec.ppg_clean};
  const Displacement motion(kin);
  ChannelModel channel = spec.channel;
  channel.noise_snr_db = spec.snr_db;

  const auto n_symbols =
      static_cast<std::size_t>(std::floor(spec.duration_s * cfg.symbol_rate() + 1e-9));
  if (n_symbols == 0) fail(ErrorCode::InvalidArgument, "record shorter than one OFDM symbol");
  rec.estimates.estimates.resize(static_cast<Eigen::Index>(cfg.n_subcarriers),
                                 static_cast<Eigen::Index>(n_symbols));
  rec.estimates.symbol_rate = cfg.symbol_rate();
  if (keep_raw_iq) {
    rec.raw_iq = ComplexSeries{{}, cfg.sample_rate};
    rec.raw_iq->samples.reserve(n_symbols * cfg.symbol_length());
  }

  Rng noise_rng(mix_seed(spec.seed, kStreamNoise));
  const std::uint64_t symbol_seed = mix_seed(spec.seed, kStreamSymbols);
  for (std::size_t first = 0, block = 0; first < n_symbols; first += kSymbolsPerBlock, ++block) {
    const std::size_t count = std::min(kSymbolsPerBlock, n_symbols - first);
    const Eigen::MatrixXcd symbols =
        gen_qpsk_symbols(count, cfg.n_subcarriers, mix_seed(symbol_seed, block));
    const ComplexSeries tx = ofdm_modulate(symbols, cfg);
    ComplexSeries rx{apply_channel_block(tx.samples, cfg.sample_rate,
                                         first * cfg.symbol_length(), motion, channel,
                                         noise_rng),
                     cfg.sample_rate};
    const SubcarrierMatrix est = ofdm_demodulate(rx, symbols, cfg);
    rec.estimates.estimates.middleCols(static_cast<Eigen::Index>(first),
                                       static_cast<Eigen::Index>(count)) = est.estimates;
    if (keep_raw_iq)
      rec.raw_iq->samples.insert(rec.raw_iq->samples.end(), rx.samples.begin(),
                                 rx.samples.end());
  }

  // Reference sensor: DC level, slow baseline wander, a respiratory baseline
  // component and white noise on top of the pulse.
  Rng sensor(mix_seed(spec.seed, kStreamSensor));
  const double drift_phase = sensor.uniform(0.0, kTwoPi);
  rec.ppg_reference = rec.ppg_clean;
  const double rate = spec.ppg_rate;
  for (std::size_t i = 0; i < rec.ppg_reference.size(); ++i) {
    const double t = static_cast<double>(i) / rate;
    rec.ppg_reference.samples[i] +=
        spec.ppg_dc + spec.ppg_drift_amp * std::sin(kTwoPi * spec.ppg_drift_freq * t + drift_phase) +
        0.1 * std::sin(kTwoPi * spec.resp_rate * t + spec.resp_phase) +
        spec.ppg_noise_std * sensor.normal();
  }

  if (spec.artifact_bursts > 0) {
    Rng art(mix_seed(spec.seed, kStreamArtifacts));
    const double sd = population_std(rec.ppg_reference.samples);
    const auto windows = static_cast<std::size_t>(spec.duration_s / kSegmentSeconds);
    for (int b = 0; b < spec.artifact_bursts && windows > 0; ++b) {
      const auto w = art.below(windows);
      const double centre =
          (static_cast<double>(w) + art.uniform(0.3, 0.7)) * kSegmentSeconds;
      rec.artifact_times.push_back(centre);
      const double width = 0.02;  // s
      const double amp = 20.0 * sd * (art.uniform() < 0.5 ? -1.0 : 1.0);
      const auto lo = static_cast<std::size_t>(std::max(0.0, (centre - 6 * width) * rate));
      const auto hi = std::min(rec.ppg_reference.size(),
                               static_cast<std::size_t>((centre + 6 * width) * rate));
      for (std::size_t i = lo; i < hi; ++i) {
        const double z = (static_cast<double>(i) / rate - centre) / width;
        rec.ppg_reference.samples[i] += amp * std::exp(-0.5 * z * z);
      }
    }
  }
  return rec;
}

}  // namespace rfppg
