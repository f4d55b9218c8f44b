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

#ifndef RFPPG_BUTTERWORTH_HPP
#define RFPPG_BUTTERWORTH_HPP

#include <span>
#include <vector>

namespace rfppg {

// Normalized biquad: y = (b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2).
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

// Low-pass Butterworth realized as cascaded second-order sections through the
// bilinear transform with frequency prewarping. Odd orders end with a
// first-order section (b2 = a2 = 0).
class ButterworthLowpass {
 public:
  ButterworthLowpass(int order, double cutoff_hz, double sample_rate);

  const std::vector<Biquad>& sections() const noexcept { return sections_; }
  double sample_rate() const noexcept { return rate_; }

  // Single-pass magnitude response at f Hz.
  double magnitude(double f) const;

  // Causal single pass starting from rest.
  std::vector<double> filter(std::span<const double> x) const;

  // Forward-backward pass with odd-extension padding and steady-state initial
  // conditions; zero phase, squared magnitude.
  std::vector<double> filtfilt(std::span<const double> x) const;

 private:
  std::vector<double> run(std::span<const double> x, bool steady_start) const;

  std::vector<Biquad> sections_;
  double rate_;
  double cutoff_;
};

}  // namespace rfppg

#endif  // RFPPG_BUTTERWORTH_HPP
