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

#include "rfppg/butterworth.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "rfppg/error.hpp"

namespace rfppg {

ButterworthLowpass::ButterworthLowpass(int order, double cutoff_hz, double sample_rate)
    : rate_(sample_rate), cutoff_(cutoff_hz) {
  if (order < 1) fail(ErrorCode::InvalidArgument, "Butterworth order must be >= 1");
  if (!(cutoff_hz > 0.0) || !(sample_rate > 2.0 * cutoff_hz))
    fail(ErrorCode::NyquistViolation, "cutoff " + std::to_string(cutoff_hz) +
                                          " Hz is not below Nyquist of " +
                                          std::to_string(sample_rate) + " Hz");
  const double k = std::tan(std::numbers::pi * cutoff_hz / sample_rate);
  const double k2 = k * k;
  // Analog prototype poles in conjugate pairs: s = exp(j pi (2i + n + 1) / 2n).
  for (int i = 0; i < order / 2; ++i) {
    const double theta = std::numbers::pi * (2.0 * i + order + 1.0) / (2.0 * order);
    const double damping = -2.0 * std::cos(theta);  // > 0 for left half-plane poles
    const double a0 = 1.0 + damping * k + k2;
    Biquad s;
    s.b0 = k2 / a0;
    s.b1 = 2.0 * k2 / a0;
    s.b2 = k2 / a0;
    s.a1 = 2.0 * (k2 - 1.0) / a0;
    s.a2 = (1.0 - damping * k + k2) / a0;
    sections_.push_back(s);
  }
  if (order % 2 == 1) {
    Biquad s;
    s.b0 = k / (1.0 + k);
    s.b1 = k / (1.0 + k);
    s.a1 = (k - 1.0) / (k + 1.0);
    sections_.push_back(s);
  }
}

double ButterworthLowpass::magnitude(double f) const {
  const double w = 2.0 * std::numbers::pi * f / rate_;
  const std::complex<double> z1 = std::polar(1.0, -w);
  const std::complex<double> z2 = z1 * z1;
  double mag = 1.0;
  for (const Biquad& s : sections_) {
    const std::complex<double> num = s.b0 + s.b1 * z1 + s.b2 * z2;
    const std::complex<double> den = 1.0 + s.a1 * z1 + s.a2 * z2;
    mag *= std::abs(num / den);
  }
  return mag;
}

std::vector<double> ButterworthLowpass::run(std::span<const double> x, bool steady_start) const {
  std::vector<double> y(x.begin(), x.end());
  if (y.empty()) return y;
  double level = steady_start ? y.front() : 0.0;  // steady-state input level of each section
  for (const Biquad& s : sections_) {
    // Transposed direct form II. Every section has unit DC gain, so a constant
    // input u leaves the state at z2 = (b2 - a2) u, z1 = (b1 - a1) u + z2.
    double z2 = (s.b2 - s.a2) * level;
    double z1 = (s.b1 - s.a1) * level + z2;
    for (double& v : y) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
  return y;
}

std::vector<double> ButterworthLowpass::filter(std::span<const double> x) const {
  return run(x, false);
}

std::vector<double> ButterworthLowpass::filtfilt(std::span<const double> x) const {
  const std::size_t n = x.size();
  if (n == 0) fail(ErrorCode::EmptyInput, "filtfilt of an empty signal");
  if (n == 1) return {x[0]};
  const auto want = static_cast<std::size_t>(std::ceil(3.0 * rate_ / cutoff_));
  const std::size_t pad = std::min(n - 1, want);

  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

  std::vector<double> fwd = run(ext, true);
  std::reverse(fwd.begin(), fwd.end());
  std::vector<double> bwd = run(fwd, true);
  std::reverse(bwd.begin(), bwd.end());
  return std::vector<double>(bwd.begin() + static_cast<std::ptrdiff_t>(pad),
                             bwd.begin() + static_cast<std::ptrdiff_t>(pad + n));
}

}  // namespace rfppg
