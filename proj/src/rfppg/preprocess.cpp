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

#include "rfppg/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "rfppg/butterworth.hpp"
#include "rfppg/error.hpp"
#include "rfppg/wavelet.hpp"

namespace rfppg {
namespace {

constexpr Eigen::Index kAllSubcarriers = 64;
constexpr Eigen::Index kSelectedSubcarriers = 16;
constexpr Eigen::Index kSubcarrierStride = kAllSubcarriers / kSelectedSubcarriers;

// Relative margin a lag must beat the incumbent by; anything closer is a tie.
constexpr double kAlignTieTolerance = 1e-12;

void bridge_windows(std::vector<double>& x, const std::vector<FlaggedWindow>& flagged) {
  for (const FlaggedWindow& w : flagged) {
    const std::size_t first = std::min(w.first, x.size());
    const std::size_t last = std::min(w.last, x.size());
    if (first >= last) continue;
    const bool has_left = first > 0;
    const bool has_right = last < x.size();
    const double left = has_left ? x[first - 1] : (has_right ? x[last] : 0.0);
    const double right = has_right ? x[last] : left;
    const double span = static_cast<double>(last - first + 1);
    for (std::size_t i = first; i < last; ++i) {
      const double f = static_cast<double>(i - first + 1) / span;
      x[i] = left + f * (right - left);
    }
  }
}

}  // namespace

const char* fuse_mode_name(FuseMode mode) noexcept {
  return mode == FuseMode::Concat ? "concat" : "complex-modulus";
}

FuseMode parse_fuse_mode(const std::string& name) {
  if (name == "concat") return FuseMode::Concat;
  if (name == "complex-modulus") return FuseMode::ComplexModulus;
  fail(ErrorCode::InvalidArgument, "unknown fuse mode '" + name + "'");
}

SubcarrierMatrix select_subcarriers(const SubcarrierMatrix& m) {
  if (m.estimates.rows() != kAllSubcarriers)
    fail(ErrorCode::ShapeMismatch, "subcarrier selection expects 64 rows, got " +
                                       std::to_string(m.estimates.rows()));
  SubcarrierMatrix out{Eigen::MatrixXcd(kSelectedSubcarriers, m.estimates.cols()),
                       m.symbol_rate};
  for (Eigen::Index r = 0; r < kSelectedSubcarriers; ++r)
    out.estimates.row(r) = m.estimates.row(r * kSubcarrierStride);
  return out;
}

std::vector<double> fused_component(const Eigen::MatrixXd& part) {
  PrincipalComponent pc = pca_first_component(part);
  for (double& s : pc.scores) s += pc.projected_mean;
  return std::move(pc.scores);
}

FusedRadioSeries fuse_components(std::span<const double> real_part,
                                 std::span<const double> imag_part, FuseMode mode,
                                 double rate) {
  if (real_part.size() != imag_part.size())
    fail(ErrorCode::LengthMismatch, "real and imaginary components differ in length");
  FusedRadioSeries out;
  out.mode = mode;
  out.values.rate = rate;
  const std::size_t n = real_part.size();
  if (mode == FuseMode::Concat) {
    out.values.samples.resize(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      out.values.samples[i] = std::abs(real_part[i]);
      out.values.samples[n + i] = std::abs(imag_part[i]);
    }
  } else {
    out.values.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      out.values.samples[i] = std::hypot(real_part[i], imag_part[i]);
  }
  return out;
}

FusedRadioSeries pca_fuse(const SubcarrierMatrix& m, FuseMode mode) {
  if (m.estimates.rows() != kSelectedSubcarriers)
    fail(ErrorCode::ShapeMismatch, "fusion expects 16 subcarriers, got " +
                                       std::to_string(m.estimates.rows()));
  const std::vector<double> re = fused_component(m.estimates.real());
  const std::vector<double> im = fused_component(m.estimates.imag());
  return fuse_components(re, im, mode, m.symbol_rate);
}

RealSeries dwt_denoise(const RealSeries& x, const DenoiseBands& bands) {
  if (bands.levels < 1 || bands.levels > 30)
    fail(ErrorCode::InvalidArgument, "wavelet depth out of range");
  const std::size_t min_len = std::size_t{1} << bands.levels;
  if (x.size() < min_len)
    fail(ErrorCode::InputTooShort, "wavelet denoising to " + std::to_string(bands.levels) +
                                       " levels needs " + std::to_string(min_len) +
                                       " samples, got " + std::to_string(x.size()));
  WaveletDecomposition coeffs = wavedec(x.samples, bands.levels);
  for (int level = 1; level <= bands.levels; ++level) {
    const bool keep = std::find(bands.keep_details.begin(), bands.keep_details.end(), level) !=
                      bands.keep_details.end();
    if (!keep) {
      auto& d = coeffs.details[static_cast<std::size_t>(level - 1)];
      std::fill(d.begin(), d.end(), 0.0);
    }
  }
  if (!bands.keep_approximation)
    std::fill(coeffs.approximation.begin(), coeffs.approximation.end(), 0.0);
  return RealSeries{waverec(coeffs), x.rate};
}

int baseline_depth(double rate, double band_hz) {
  if (!(rate > 0.0) || !(band_hz > 0.0))
    fail(ErrorCode::InvalidArgument, "baseline depth needs positive rate and band");
  int level = 1;
  while (rate / std::ldexp(1.0, level + 1) >= band_hz) ++level;
  return level;
}

RealSeries ppg_baseline_remove(const RealSeries& x, double band_hz) {
  const int depth = baseline_depth(x.rate, band_hz);
  const std::size_t min_len = std::size_t{1} << depth;
  if (x.size() < min_len)
    fail(ErrorCode::InputTooShort, "baseline removal at depth " + std::to_string(depth) +
                                       " needs " + std::to_string(min_len) + " samples");
  WaveletDecomposition coeffs = wavedec(x.samples, depth);
  for (auto& d : coeffs.details) std::fill(d.begin(), d.end(), 0.0);
  const std::vector<double> baseline = waverec(coeffs);
  RealSeries out{x.samples, x.rate};
  for (std::size_t i = 0; i < out.size(); ++i) out.samples[i] -= baseline[i];
  return out;
}

RealSeries butterworth_lpf(const RealSeries& x, int order, double cutoff_hz) {
  const ButterworthLowpass lpf(order, cutoff_hz, x.rate);
  return RealSeries{lpf.filtfilt(x.samples), x.rate};
}

std::vector<FlaggedWindow> artifact_scan(const RealSeries& x, double z_thresh,
                                         double window_s) {
  std::vector<FlaggedWindow> out;
  if (x.size() < 2 || !(x.rate > 0.0)) return out;
  const auto win = static_cast<std::size_t>(std::llround(window_s * x.rate));
  if (win == 0) fail(ErrorCode::InvalidArgument, "artifact window rounds to zero samples");
  const double m = mean(x.samples);
  const double sd = population_std(x.samples);
  if (!(sd > 0.0)) return out;
  for (std::size_t first = 0, index = 0; first < x.size(); first += win, ++index) {
    const std::size_t last = std::min(x.size(), first + win);
    double peak = 0.0;
    for (std::size_t i = first; i < last; ++i) peak = std::max(peak, std::abs(x.samples[i] - m));
    const double z = peak / sd;
    if (z > z_thresh) out.push_back({index, first, last, z});
  }
  return out;
}

Alignment align_segments(const Segment& radio, const Segment& ppg, int max_lag) {
  const std::size_t n = radio.samples.size();
  if (n != ppg.samples.size())
    fail(ErrorCode::LengthMismatch, "alignment needs equal segment lengths");
  if (n == 0) fail(ErrorCode::EmptyInput, "alignment of empty segments");
  if (max_lag < 0 || 2 * static_cast<std::size_t>(max_lag) >= n)
    fail(ErrorCode::InvalidArgument, "max_lag must be below half the segment length");

  double nr = 0.0, np = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    nr += radio.samples[i] * radio.samples[i];
    np += ppg.samples[i] * ppg.samples[i];
  }
  const double norm = std::sqrt(nr * np);

  const auto score = [&](int lag) {
    const auto ln = static_cast<long long>(n);
    const long long shift = ((lag % ln) + ln) % ln;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      acc += radio.samples[(i + static_cast<std::size_t>(shift)) % n] * ppg.samples[i];
    return norm > 0.0 ? acc / norm : 0.0;
  };

  int best_lag = 0;
  double best = score(0);
  for (int mag = 1; mag <= max_lag; ++mag) {
    for (int lag : {-mag, mag}) {
      const double s = score(lag);
      if (s > best + kAlignTieTolerance) {
        best = s;
        best_lag = lag;
      }
    }
  }

  Alignment out;
  out.lag = best_lag;
  out.aligned = radio;
  const auto ln = static_cast<long long>(n);
  const auto shift = static_cast<std::size_t>(((best_lag % ln) + ln) % ln);
  for (std::size_t i = 0; i < n; ++i) out.aligned.samples[i] = radio.samples[(i + shift) % n];
  return out;
}

RealSeries preprocess_radio(const SubcarrierMatrix& capture, const PipelineConfig& cfg) {
  if (!(capture.symbol_rate > 0.0))
    fail(ErrorCode::InvalidArgument, "capture symbol rate must be positive");
  const SubcarrierMatrix selected = select_subcarriers(capture);
  const FusedRadioSeries fused = pca_fuse(selected, cfg.fuse_mode);

  if (cfg.fuse_mode == FuseMode::ComplexModulus) {
    const RealSeries clean = dwt_denoise(fused.values, cfg.radio_bands);
    return zscore(resample(clean, cfg.processed_rate, cfg.resampler));
  }

  // Concat: denoise and resample each half on its own timeline, then combine.
  const std::size_t n = fused.values.size() / 2;
  const auto half = [&](std::size_t offset) {
    RealSeries part{std::vector<double>(fused.values.samples.begin() + static_cast<std::ptrdiff_t>(offset),
                                        fused.values.samples.begin() + static_cast<std::ptrdiff_t>(offset + n)),
                    fused.values.rate};
    return resample(dwt_denoise(part, cfg.radio_bands), cfg.processed_rate, cfg.resampler);
  };
  const RealSeries a = half(0);
  const RealSeries b = half(n);
  RealSeries combined{std::vector<double>(a.size()), a.rate};
  for (std::size_t i = 0; i < a.size(); ++i)
    combined.samples[i] = std::hypot(a.samples[i], b.samples[i]);
  return zscore(combined);
}

RealSeries preprocess_ppg(const RealSeries& ppg, const PipelineConfig& cfg,
                          const std::vector<FlaggedWindow>& flagged) {
  RealSeries x = ppg;
  bridge_windows(x.samples, flagged);
  x = ppg_baseline_remove(x, cfg.baseline_band_hz);
  x = butterworth_lpf(x, cfg.lpf_order, cfg.lpf_cutoff_hz);
  x = resample(x, cfg.processed_rate, cfg.resampler);
  return zscore(x);
}

RecordResult preprocess_record(const SubcarrierMatrix& radio, const RealSeries& ppg,
                               const PipelineConfig& cfg, const std::string& record_id,
                               const std::string& subject_id) {
  RecordResult result;
  result.flagged = artifact_scan(ppg, cfg.artifact_z, cfg.segment_seconds);

  const RealSeries ppg_proc = preprocess_ppg(ppg, cfg, result.flagged);
  const RealSeries radio_proc = preprocess_radio(radio, cfg);
  const std::vector<Segment> ppg_segs = segment(ppg_proc, cfg.segment_seconds);
  const std::vector<Segment> radio_segs = segment(radio_proc, cfg.segment_seconds);
  result.ppg_segments = ppg_segs.size();
  result.radio_segments = radio_segs.size();

  const std::size_t n = std::min(ppg_segs.size(), radio_segs.size());
  for (std::size_t i = 0; i < n; ++i) {
    const bool excluded = std::any_of(result.flagged.begin(), result.flagged.end(),
                                      [i](const FlaggedWindow& w) { return w.index == i; });
    if (excluded) continue;
    Alignment al = align_segments(radio_segs[i], ppg_segs[i], cfg.max_lag);
    result.pairs.push_back(SegmentPair{std::move(al.aligned), ppg_segs[i], al.lag, record_id,
                                       subject_id, i});
  }
  if (result.pairs.empty())
    fail(ErrorCode::EmptyResult, "no segment pair survived preprocessing of record '" +
                                     record_id + "'");
  return result;
}

}  // namespace rfppg
