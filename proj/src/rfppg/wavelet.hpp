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

#ifndef RFPPG_WAVELET_HPP
#define RFPPG_WAVELET_HPP

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace rfppg {

// Daubechies-2 filter bank, four taps.
struct Db2 {
  static const std::array<double, 4> dec_lo;
  static const std::array<double, 4> dec_hi;
  static const std::array<double, 4> rec_lo;
  static const std::array<double, 4> rec_hi;
};

struct WaveletDecomposition {
  std::vector<double> approximation;          // coarsest level
  std::vector<std::vector<double>> details;   // details[j - 1] is level j
  std::size_t length = 0;                     // original signal length

  int levels() const noexcept { return static_cast<int>(details.size()); }
};

// Single analysis step with half-sample symmetric extension; each output has
// floor((N + 3) / 2) coefficients.
void dwt_step(std::span<const double> x, std::vector<double>& approx,
              std::vector<double>& detail);

// Inverse of dwt_step; returns 2 * n - 2 samples for n coefficients per band.
std::vector<double> idwt_step(std::span<const double> approx, std::span<const double> detail);

WaveletDecomposition wavedec(std::span<const double> x, int levels);
std::vector<double> waverec(const WaveletDecomposition& coeffs);

}  // namespace rfppg

#endif  // RFPPG_WAVELET_HPP
