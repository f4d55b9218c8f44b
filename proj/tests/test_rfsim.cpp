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

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "rfppg/error.hpp"
#include "rfppg/rfsim.hpp"
#include "rfppg/rng.hpp"

using namespace rfppg;

namespace {

// Local maxima above 0.6 of the global maximum.
std::vector<std::size_t> tall_maxima(const std::vector<double>& x) {
  double top = 0.0;
  for (double v : x) top = std::max(top, v);
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < x.size(); ++i)
    if (x[i] > 0.6 * top && x[i] > x[i - 1] && x[i] >= x[i + 1]) out.push_back(i);
  return out;
}

ChannelModel chest_only(Complex gain = {1.0, 0.0}) {
  ChannelModel ch;
  ch.chest_path = {gain, 0};
  return ch;
}

ComplexSeries unit_power_noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  ComplexSeries tx{std::vector<Complex>(n), 20000.0};
  for (auto& v : tx.samples) v = std::polar(1.0, u(g));
  return tx;
}

}  // namespace

TEST_CASE("ppg waveform at 60 bpm without variability") {
  const RealSeries p = gen_ppg_waveform(60.0, 0.0, 10.0, 2500.0, 1);
  REQUIRE(p.size() == 25000);
  const auto peaks = tall_maxima(p.samples);
  REQUIRE(peaks.size() == 10);
  for (std::size_t i = 1; i < peaks.size(); ++i) {
    const long gap = static_cast<long>(peaks[i]) - static_cast<long>(peaks[i - 1]);
    CHECK(std::abs(gap - 2500) <= 1);
  }

  // Autocorrelation over lags near one period peaks at the period.
  const RealSeries q = gen_ppg_waveform(75.0, 0.0, 10.0, 500.0, 2);
  const std::size_t period = 400;  // 0.8 s at 500 Hz
  std::size_t best = 0;
  double best_v = -1e300;
  for (std::size_t lag = 300; lag <= 500; ++lag) {
    double acc = 0.0;
    for (std::size_t i = 0; i + lag < q.size(); ++i) acc += q.samples[i] * q.samples[i + lag];
    acc /= static_cast<double>(q.size() - lag);
    if (acc > best_v) {
      best_v = acc;
      best = lag;
    }
  }
  CHECK(std::abs(static_cast<long>(best) - static_cast<long>(period)) <= 1);

  CHECK(gen_ppg_waveform(72.0, 4.0, 5.0, 2500.0, 9).samples ==
        gen_ppg_waveform(72.0, 4.0, 5.0, 2500.0, 9).samples);
  CHECK_THROWS_AS(gen_ppg_waveform(10.0, 0.0, 5.0, 2500.0, 1), Error);
}

TEST_CASE("qpsk symbols: unit modulus, determinism, balanced constellation") {
  const Eigen::MatrixXcd a = gen_qpsk_symbols(15625, 64, 3);
  CHECK(a == gen_qpsk_symbols(15625, 64, 3));
  std::array<std::size_t, 4> counts{};
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const Complex v = a.data()[i];
    CHECK(std::abs(std::abs(v) - 1.0) < 1e-12);
    counts[(v.real() > 0 ? 1 : 0) + (v.imag() > 0 ? 2 : 0)]++;
  }
  REQUIRE(a.size() == 1000000);
  for (std::size_t c : counts) CHECK(std::abs(static_cast<double>(c) / 1e6 - 0.25) < 0.005);
}

TEST_CASE("ofdm modulate: DC symbol, duration, cyclic prefix") {
  const OfdmConfig cfg;
  CHECK(cfg.symbol_rate() == doctest::Approx(250.0));
  Eigen::MatrixXcd dc = Eigen::MatrixXcd::Zero(64, 1);
  dc(0, 0) = 1.0;
  const ComplexSeries s = ofdm_modulate(dc, cfg);
  REQUIRE(s.size() == 80);
  for (const Complex& v : s.samples) CHECK(std::abs(v - Complex(1.0 / 64.0, 0.0)) < 1e-15);

  const ComplexSeries t = ofdm_modulate(gen_qpsk_symbols(250, 64, 4), cfg);
  CHECK(t.duration() == doctest::Approx(1.0).epsilon(1e-15));
  for (std::size_t m = 0; m < 250; m += 37)
    for (std::size_t i = 0; i < 16; ++i) CHECK(t.samples[m * 80 + i] == t.samples[m * 80 + 64 + i]);
}

TEST_CASE("identity channel passes tx through and demodulates to ones") {
  const OfdmConfig cfg;
  const Eigen::MatrixXcd sym = gen_qpsk_symbols(100, 64, 5);
  const ComplexSeries tx = ofdm_modulate(sym, cfg);
  ChestKinematics still;
  still.cardiac_amp = 0.0;
  still.resp_amp = 0.0;
  const ComplexSeries rx = apply_channel(tx, still, chest_only(), 1);
  CHECK(rx.samples == tx.samples);
  const SubcarrierMatrix h = ofdm_demodulate(rx, sym, cfg);
  CHECK(h.symbol_rate == doctest::Approx(250.0));
  CHECK((h.estimates.array() - Complex(1.0, 0.0)).abs().maxCoeff() < 1e-9);
}

TEST_CASE("static chest displacement rotates the phase by 4 pi d / lambda") {
  ChestKinematics k;
  k.cardiac_amp = 0.0;
  k.resp_amp = 0.5e-3;
  k.resp_rate = 0.0;
  k.resp_phase = std::numbers::pi / 2.0;
  ChannelModel ch = chest_only();
  ch.wavelength = 0.05725;
  const ComplexSeries tx = unit_power_noise(1000, 6);
  const ComplexSeries rx = apply_channel(tx, k, ch, 1);
  const double want = 4.0 * std::numbers::pi * 0.5e-3 / 0.05725;
  CHECK(want == doctest::Approx(0.10975).epsilon(1e-4));
  for (std::size_t i = 0; i < tx.size(); ++i) CHECK(std::abs(std::arg(rx.samples[i] / tx.samples[i]) - want) < 1e-12);
}

TEST_CASE("measured SNR of the additive noise") {
  ChestKinematics still;
  still.cardiac_amp = 0.0;
  still.resp_amp = 0.0;
  ChannelModel noisy = chest_only();
  noisy.noise_snr_db = 10.0;
  const ComplexSeries tx = unit_power_noise(200000, 7);
  const ComplexSeries clean = apply_channel(tx, still, chest_only(), 1);
  const ComplexSeries rx = apply_channel(tx, still, noisy, 2);
  double ps = 0.0, pn = 0.0;
  for (std::size_t i = 0; i < tx.size(); ++i) {
    ps += std::norm(clean.samples[i]);
    pn += std::norm(rx.samples[i] - clean.samples[i]);
  }
  CHECK(std::abs(10.0 * std::log10(ps / pn) - 10.0) < 0.2);
}

TEST_CASE("demodulated phase tracks the injected displacement") {
  const OfdmConfig cfg;
  const std::size_t n_sym = 1000;  // 4 s
  ChestKinematics k;
  k.cardiac_amp = 0.5e-3;
  k.resp_amp = 5e-3;
  k.resp_rate = 0.25;
  k.resp_phase = 0.3;
  k.ppg_source = gen_ppg_waveform(70.0, 3.0, 4.5, 2500.0, 8);
  ChannelModel ch = chest_only();
  ch.wavelength = cfg.wavelength();
  const Eigen::MatrixXcd sym = gen_qpsk_symbols(n_sym, 64, 9);
  const SubcarrierMatrix h = ofdm_demodulate(apply_channel(ofdm_modulate(sym, cfg), k, ch, 1), sym, cfg);
  const Displacement d(k);
  double worst = 0.0;
  for (std::size_t m = 0; m < n_sym; ++m) {
    const double want = 4.0 * std::numbers::pi * d(symbol_center_time(m, cfg)) / ch.wavelength;
    for (Eigen::Index r = 0; r < 64; r += 9)
      worst = std::max(worst, std::abs(std::arg(h.estimates(r, static_cast<Eigen::Index>(m))) - want));
  }
  CHECK(worst < 0.01);
  CHECK(d.bound() == doctest::Approx(5.5e-3));
}

TEST_CASE("simulate_record shapes, determinism and raw IQ consistency") {
  RecordSpec spec;
  spec.seed = 77;
  spec.duration_s = 4.0;
  Rng geo(1);
  spec.channel = default_channel(geo, spec.snr_db, OfdmConfig{}.wavelength());
  const OfdmConfig cfg;
  const SimulatedRecord a = simulate_record(spec, cfg, true);
  const SimulatedRecord b = simulate_record(spec, cfg, true);
  CHECK(a.estimates.subcarriers() == 64);
  CHECK(a.estimates.symbols() == 1000);
  CHECK(a.ppg_reference.size() == 10000);
  CHECK(a.ppg_reference.rate == 2500.0);
  CHECK(a.estimates.estimates == b.estimates.estimates);
  CHECK(a.ppg_reference.samples == b.ppg_reference.samples);
  REQUIRE(a.raw_iq.has_value());
  const SubcarrierMatrix again =
      ofdm_demodulate(*a.raw_iq, record_tx_symbols(spec.seed, 1000, cfg), cfg);
  CHECK((again.estimates - a.estimates.estimates).cwiseAbs().maxCoeff() < 1e-9);

  spec.seed = 78;
  CHECK(simulate_record(spec, cfg).estimates.estimates != a.estimates.estimates);
}
