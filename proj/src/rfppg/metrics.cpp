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

#include "rfppg/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "rfppg/error.hpp"

namespace rfppg {

std::vector<std::size_t> find_peaks(std::span<const double> x, double rate, double rel_height,
                                    double min_spacing_s) {
  std::vector<std::size_t> peaks;
  if (x.size() < 3) return peaks;
  const double top = *std::max_element(x.begin(), x.end());
  if (!(top > 0.0)) return peaks;
  const double floor = rel_height * top;
  const auto spacing = static_cast<std::size_t>(std::ceil(min_spacing_s * rate));

  std::vector<std::size_t> cand;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    if (x[i] <= floor || x[i] <= x[i - 1]) continue;
    // Plateaus count once, at their first sample.
    std::size_t j = i;
    while (j + 1 < x.size() && x[j + 1] == x[i]) ++j;
    if (j + 1 < x.size() && x[j + 1] < x[i]) cand.push_back(i);
    i = j;
  }
  // Tallest first; keep a candidate only if it is clear of every kept peak.
  std::vector<std::size_t> by_height = cand;
  std::stable_sort(by_height.begin(), by_height.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] > x[b]; });
  for (std::size_t c : by_height) {
    const bool clear = std::none_of(peaks.begin(), peaks.end(), [&](std::size_t p) {
      return (c > p ? c - p : p - c) < spacing;
    });
    if (clear) peaks.push_back(c);
  }
  std::sort(peaks.begin(), peaks.end());
  return peaks;
}

std::optional<double> heart_rate_bpm(std::span<const double> x, double rate) {
  const std::vector<std::size_t> p = find_peaks(x, rate);
  if (p.size() < 2) return std::nullopt;
  const double mean_interval =
      static_cast<double>(p.back() - p.front()) / static_cast<double>(p.size() - 1) / rate;
  return 60.0 / mean_interval;
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) fail(ErrorCode::EmptyInput, "quantile of an empty set");
  if (!(q >= 0.0 && q <= 1.0)) fail(ErrorCode::InvalidArgument, "quantile outside [0, 1]");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace rfppg
