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

// Channel simulator standing in for a real SDR capture: an OFDM/QPSK link
// whose reflected path is phase-modulated by chest displacement, plus a
// synthetic reference PPG that drives the cardiac part of that displacement.

#ifndef RFPPG_RFSIM_HPP
#define RFPPG_RFSIM_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rfppg/rng.hpp"
#include "rfppg/signal.hpp"

namespace rfppg {

inline constexpr double kSpeedOfLight = 299792458.0;

struct OfdmConfig {
  std::size_t n_subcarriers = 64;
  std::size_t cp_len = 16;
  double sample_rate = 20000.0;  // Hz
  double center_freq = 5.24e9;   // Hz

  std::size_t symbol_length() const noexcept { return n_subcarriers + cp_len; }
  double symbol_rate() const noexcept {
    return sample_rate / static_cast<double>(symbol_length());
  }
  double wavelength() const noexcept { return kSpeedOfLight / center_freq; }
  void validate() const;
};

struct ChestKinematics {
  double cardiac_amp = 0.5e-3;  // m
  double resp_amp = 5e-3;       // m
  double resp_rate = 0.25;      // Hz
  double resp_phase = 0.0;      // rad
  RealSeries ppg_source;        // drives the cardiac displacement
};

// Evaluates d(t) = cardiac_amp * p(t) + resp_amp * sin(2 pi f t + phase),
// where p is the PPG source made zero-mean and scaled to unit peak magnitude.
class Displacement {
 public:
  explicit Displacement(const ChestKinematics& kin);
  double operator()(double t) const;
  double bound() const noexcept { return cardiac_amp_ + resp_amp_; }

 private:
  std::vector<double> shape_;
  double rate_ = 1.0;
  double cardiac_amp_ = 0.0;
  double resp_amp_ = 0.0;
  double resp_omega_ = 0.0;
  double resp_phase_ = 0.0;
};

struct PathTap {
  Complex gain{1.0, 0.0};
  std::size_t delay = 0;  // samples
};

struct ChannelModel {
  std::vector<PathTap> static_paths;
  PathTap chest_path{};
  // Infinity disables the noise source.
  double noise_snr_db = std::numeric_limits<double>::infinity();
  double wavelength = kSpeedOfLight / 5.24e9;  // m
};

/// Synthetic reference PPG: per beat a systolic Gaussian lobe and a dicrotic
/// lobe of 0.35 relative amplitude delayed by 0.35 of the beat period. Beat
/// periods are jittered uniformly by +/- hrv_pct percent. Systolic peaks sit
/// at 0.25 of the nominal period after each beat boundary.
RealSeries gen_ppg_waveform(double hr_bpm, double hrv_pct, double duration_s,
                            double rate, std::uint64_t seed);

// Entries are drawn from {(+-1 +- j) / sqrt(2)}; rows are subcarriers.
Eigen::MatrixXcd gen_qpsk_symbols(std::size_t n_symbols, std::size_t n_subcarriers,
                                  std::uint64_t seed);

/// Inverse DFT per symbol (1/N convention) with the last cp_len samples
/// prepended as cyclic prefix.
ComplexSeries ofdm_modulate(const Eigen::MatrixXcd& symbols, const OfdmConfig& cfg);

/// rx[n] = sum(static) + chest_gain * exp(j 4 pi d(t) / lambda) * tx[n - delay]
/// plus complex white Gaussian noise at noise_snr_db relative to the clean
/// received power. tx must be sampled at 20 kHz.
ComplexSeries apply_channel(const ComplexSeries& tx, const ChestKinematics& chest,
                            const ChannelModel& ch, std::uint64_t seed);

// Block form used by the record generator: tx starts at absolute sample
// first_sample, samples before the block are treated as zero, and noise is
// drawn from the caller's generator.
std::vector<Complex> apply_channel_block(std::span<const Complex> tx,
                                         double sample_rate, std::size_t first_sample,
                                         const Displacement& motion,
                                         const ChannelModel& ch, Rng& noise_rng);

/// Drops the cyclic prefix, takes the length-N DFT, and divides by the known
/// transmitted symbols. Output rate is the OFDM symbol rate.
SubcarrierMatrix ofdm_demodulate(const ComplexSeries& rx, const Eigen::MatrixXcd& tx_symbols,
                                 const OfdmConfig& cfg);

// Centre of the DFT window of symbol m, in seconds from the start of the capture.
double symbol_center_time(std::size_t m, const OfdmConfig& cfg);

// Per-session description of one simulated recording.
struct RecordSpec {
  std::string record_id;
  std::string subject_id;
  int session = 1;
  std::uint64_t seed = 0;
  double duration_s = 300.0;
  double ppg_rate = 2500.0;
  double hr_bpm = 72.0;
  double hrv_pct = 3.0;
  double cardiac_amp = 0.5e-3;
  double resp_amp = 5e-3;
  double resp_rate = 0.25;
  double resp_phase = 0.0;
  double snr_db = 20.0;
  ChannelModel channel;
  // Reference sensor impairments.
  double ppg_dc = 1.5;
  double ppg_drift_amp = 0.8;
  double ppg_drift_freq = 0.05;
  double ppg_noise_std = 0.02;
  int artifact_bursts = 0;
};

struct SimulatedRecord {
  SubcarrierMatrix estimates;
  RealSeries ppg_reference;  // as a finger sensor would log it
  RealSeries ppg_clean;      // ground truth pulse shape
  std::vector<double> artifact_times;  // burst centres, seconds
  std::optional<ComplexSeries> raw_iq;
};

// Default multipath geometry for a subject: a direct leakage path, a weaker
// wall reflection, and a chest path placed in quadrature with the direct path.
ChannelModel default_channel(Rng& rng, double snr_db, double wavelength);

// Transmitted symbols of a simulated record, regenerated from its seed; this
// is what a raw-IQ consumer needs to run ofdm_demodulate on the capture.
Eigen::MatrixXcd record_tx_symbols(std::uint64_t record_seed, std::size_t n_symbols,
                                   const OfdmConfig& cfg);

SimulatedRecord simulate_record(const RecordSpec& spec, const OfdmConfig& cfg,
                                bool keep_raw_iq = false);

}  // namespace rfppg

#endif  // RFPPG_RFSIM_HPP
