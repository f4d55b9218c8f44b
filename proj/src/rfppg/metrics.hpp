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

// Evaluation helpers: peak picking, heart rate, and order statistics.

#ifndef RFPPG_METRICS_HPP
#define RFPPG_METRICS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace rfppg {

/// Local maxima above rel_height * max(x), at least min_spacing_s apart. When
/// two candidates are closer than that the taller one wins.
std::vector<std::size_t> find_peaks(std::span<const double> x, double rate,
                                    double rel_height = 0.5, double min_spacing_s = 0.3);

// 60 / mean peak interval; empty with fewer than two peaks.
std::optional<double> heart_rate_bpm(std::span<const double> x, double rate);

// Linear-interpolated quantile (type 7); q in [0, 1].
double quantile(std::vector<double> v, double q);

}  // namespace rfppg

#endif  // RFPPG_METRICS_HPP
