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

// Series types shared by every stage of the pipeline, plus the handful of
// numeric operations (normalization, segmentation, resampling, metrics) that
// all of them lean on.

#ifndef RFPPG_SIGNAL_HPP
#define RFPPG_SIGNAL_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace rfppg {

using Complex = std::complex<double>;

// Common rate of the processed radio and PPG series: 2.2 s is exactly 400
// samples at this rate.
inline constexpr double kProcessedRate = 2000.0 / 11.0;
inline constexpr double kSegmentSeconds = 2.2;
inline constexpr std::size_t kSegmentLength = 400;

struct RealSeries {
  std::vector<double> samples;
  double rate = 0.0;  // Hz

  std::size_t size() const noexcept { return samples.size(); }
  double duration() const noexcept {
    return rate > 0.0 ? static_cast<double>(samples.size()) / rate : 0.0;
  }
};

struct ComplexSeries {
  std::vector<Complex> samples;
  double rate = 0.0;  // Hz

  std::size_t size() const noexcept { return samples.size(); }
  double duration() const noexcept {
    return rate > 0.0 ? static_cast<double>(samples.size()) / rate : 0.0;
  }
};

// Per-symbol complex channel estimates: one row per subcarrier, one column
// per OFDM symbol.
struct SubcarrierMatrix {
  Eigen::MatrixXcd estimates;
  double symbol_rate = 0.0;  // Hz

  Eigen::Index subcarriers() const noexcept { return estimates.rows(); }
  Eigen::Index symbols() const noexcept { return estimates.cols(); }
};

struct Segment {
  std::vector<double> samples;
  std::size_t origin_index = 0;  // first sample in the parent series
  double duration_s = 0.0;
};

double mean(std::span<const double> x);
// Population (1/N) standard deviation.
double population_std(std::span<const double> x);

/// Subtracts the mean and divides by the population standard deviation.
/// Throws EmptyInput for fewer than two samples and DegenerateVariance for a
/// constant series.
RealSeries zscore(const RealSeries& x);
std::vector<double> zscore(std::span<const double> x);

/// Splits x into floor(N / L) non-overlapping segments of
/// L = round(seg_seconds * rate) samples. The trailing remainder is dropped.
std::vector<Segment> segment(const RealSeries& x, double seg_seconds);

struct ResamplerOptions {
  double kaiser_beta = 8.0;
  int taps_per_phase = 64;
};

/// Polyphase windowed-sinc resampler. The rate ratio is approximated by a
/// rational up/down with up <= 4096; the anti-alias cutoff is the lower of the
/// two Nyquist rates and each phase carries taps_per_phase taps at the lower
/// rate, normalized to unit DC gain. Edges use whole-sample symmetric
/// extension.
RealSeries resample(const RealSeries& x, double target_rate,
                    const ResamplerOptions& options = {});

// Number of samples resample() emits for an input of length n.
std::size_t resampled_length(std::size_t n, double rate, double target_rate);

double mae(std::span<const double> a, std::span<const double> b);
double mae(const Segment& a, const Segment& b);

// Pearson correlation; returns 0 when either input has zero variance.
double pearson(std::span<const double> a, std::span<const double> b);

bool all_finite(std::span<const double> x) noexcept;

}  // namespace rfppg

#endif  // RFPPG_SIGNAL_HPP
