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

#include "rfppg/fft.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace rfppg {
namespace {

void radix2(std::span<Complex> a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
    const std::size_t half = len / 2;
    for (std::size_t k = 0; k < half; ++k) {
      const Complex w = std::polar(1.0, ang * static_cast<double>(k));
      for (std::size_t i = k; i < n; i += len) {
        const Complex u = a[i];
        const Complex v = a[i + half] * w;
        a[i] = u + v;
        a[i + half] = u - v;
      }
    }
  }
}

void direct(std::span<Complex> a, bool inverse) {
  const std::size_t n = a.size();
  const double sign = inverse ? 1.0 : -1.0;
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t idx = (k * t) % n;
      acc += a[t] * std::polar(1.0, sign * 2.0 * std::numbers::pi *
                                        static_cast<double>(idx) / static_cast<double>(n));
    }
    out[k] = acc;
  }
  std::copy(out.begin(), out.end(), a.begin());
}

void transform(std::span<Complex> a, bool inverse) {
  if (a.size() <= 1) return;
  if (std::has_single_bit(a.size())) {
    radix2(a, inverse);
  } else {
    direct(a, inverse);
  }
}

}  // namespace

void dft_inplace(std::span<Complex> data) { transform(data, false); }

void idft_inplace(std::span<Complex> data) {
  transform(data, true);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (Complex& c : data) c *= scale;
}

}  // namespace rfppg
