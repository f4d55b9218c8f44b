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

// Conditioning of the reference PPG and the radio channel estimates, and the
// pairing of both into aligned 400-sample training segments.

#ifndef RFPPG_PREPROCESS_HPP
#define RFPPG_PREPROCESS_HPP

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "rfppg/pca.hpp"
#include "rfppg/signal.hpp"

namespace rfppg {

enum class FuseMode {
  ComplexModulus,  // |X_R(n) + j X_I(n)|, length N
  Concat,          // |[X_R ; X_I]|, length 2N
};

const char* fuse_mode_name(FuseMode mode) noexcept;
FuseMode parse_fuse_mode(const std::string& name);

struct FusedRadioSeries {
  RealSeries values;  // non-negative
  FuseMode mode = FuseMode::ComplexModulus;
};

// Rows 0, 4, ..., 60 of a 64-row matrix.
SubcarrierMatrix select_subcarriers(const SubcarrierMatrix& m);

// Fused channel of one part (real or imaginary): the leading principal
// component's scores with the projected channel mean added back.
std::vector<double> fused_component(const Eigen::MatrixXd& part);

// Modulus fusion of two already-reduced series.
FusedRadioSeries fuse_components(std::span<const double> real_part,
                                 std::span<const double> imag_part, FuseMode mode,
                                 double rate);

/// PCA on the real and imaginary parts of a 16-row matrix separately, then
/// modulus fusion.
FusedRadioSeries pca_fuse(const SubcarrierMatrix& m, FuseMode mode);

struct DenoiseBands {
  int levels = 10;
  std::vector<int> keep_details{5, 6, 7, 8};
  bool keep_approximation = false;
};

/// db2 decomposition to bands.levels levels; zeroes every detail level not in
/// keep_details (and the approximation unless kept), then reconstructs at the
/// original length. Throws InputTooShort below 2^levels samples.
RealSeries dwt_denoise(const RealSeries& x, const DenoiseBands& bands = {});

// Smallest depth whose approximation band [0, rate / 2^(L+1)] lies below band_hz.
int baseline_depth(double rate, double band_hz = 0.2);

/// Subtracts the db2 approximation reconstruction at baseline_depth(rate).
RealSeries ppg_baseline_remove(const RealSeries& x, double band_hz = 0.2);

/// Zero-phase Butterworth low-pass (forward-backward cascaded biquads).
RealSeries butterworth_lpf(const RealSeries& x, int order = 12, double cutoff_hz = 3.4);

struct FlaggedWindow {
  std::size_t index = 0;
  std::size_t first = 0;  // sample range [first, last)
  std::size_t last = 0;
  double peak_z = 0.0;
};

/// Flags windows whose peak |z| against whole-record statistics exceeds
/// z_thresh. The trailing partial window is scanned as well.
std::vector<FlaggedWindow> artifact_scan(const RealSeries& x, double z_thresh = 6.0,
                                         double window_s = kSegmentSeconds);

struct Alignment {
  Segment aligned;
  int lag = 0;  // aligned[n] = radio[(n + lag) mod L]
};

/// Exhaustive sweep of circular shifts in [-max_lag, max_lag] maximizing the
/// normalized inner product with ppg. Ties go to the smallest |lag|, negative
/// first.
Alignment align_segments(const Segment& radio, const Segment& ppg, int max_lag = 91);

struct PipelineConfig {
  double processed_rate = kProcessedRate;
  double segment_seconds = kSegmentSeconds;
  double artifact_z = 6.0;
  double baseline_band_hz = 0.2;
  int lpf_order = 12;
  double lpf_cutoff_hz = 3.4;
  DenoiseBands radio_bands{};
  FuseMode fuse_mode = FuseMode::ComplexModulus;
  int max_lag = 91;
  ResamplerOptions resampler{};
};

struct SegmentPair {
  Segment radio;
  Segment ppg;
  int lag = 0;
  std::string record_id;
  std::string subject_id;
  std::size_t index = 0;  // segment index within the record
};

struct RecordResult {
  std::vector<SegmentPair> pairs;
  std::vector<FlaggedWindow> flagged;
  std::size_t radio_segments = 0;
  std::size_t ppg_segments = 0;
};

// Radio side only: selection, fusion, denoising, resampling and record-level
// Z-scoring. Used directly when translating a capture without a reference.
RealSeries preprocess_radio(const SubcarrierMatrix& capture, const PipelineConfig& cfg);

// PPG side only; samples inside flagged windows are bridged linearly before
// filtering.
RealSeries preprocess_ppg(const RealSeries& ppg, const PipelineConfig& cfg,
                          const std::vector<FlaggedWindow>& flagged);

/// Whole-record pipeline producing aligned segment pairs. Throws EmptyResult
/// if no pair survives artifact exclusion.
RecordResult preprocess_record(const SubcarrierMatrix& radio, const RealSeries& ppg,
                               const PipelineConfig& cfg, const std::string& record_id = {},
                               const std::string& subject_id = {});

}  // namespace rfppg

#endif  // RFPPG_PREPROCESS_HPP
