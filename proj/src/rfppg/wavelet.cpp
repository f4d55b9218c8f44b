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

#include "rfppg/wavelet.hpp"

#include <cmath>

#include "rfppg/error.hpp"

namespace rfppg {
namespace {

constexpr double kS3 = 1.7320508075688772;  // sqrt(3)
constexpr double kNorm = 5.6568542494923806;  // 4 sqrt(2)
constexpr double h0 = (1.0 + kS3) / kNorm;
constexpr double h1 = (3.0 + kS3) / kNorm;
constexpr double h2 = (3.0 - kS3) / kNorm;
constexpr double h3 = (1.0 - kS3) / kNorm;

constexpr std::size_t kTaps = 4;

// Half-sample symmetric extension, repeated as often as needed.
inline std::size_t symmetric_index(long long i, long long n) {
  const long long period = 2 * n;
  long long r = i % period;
  if (r < 0) r += period;
  if (r >= n) r = period - 1 - r;
  return static_cast<std::size_t>(r);
}

}  // namespace

const std::array<double, 4> Db2::rec_lo = {h0, h1, h2, h3};
const std::array<double, 4> Db2::dec_lo = {h3, h2, h1, h0};
const std::array<double, 4> Db2::rec_hi = {h3, -h2, h1, -h0};
const std::array<double, 4> Db2::dec_hi = {-h0, h1, -h2, h3};

void dwt_step(std::span<const double> x, std::vector<double>& approx,
              std::vector<double>& detail) {
  const auto n = static_cast<long long>(x.size());
  if (n == 0) fail(ErrorCode::EmptyInput, "dwt of an empty signal");
  const std::size_t out_len = (x.size() + kTaps - 1) / 2;
  approx.assign(out_len, 0.0);
  detail.assign(out_len, 0.0);
  for (std::size_t o = 0; o < out_len; ++o) {
    const long long centre = 2 * static_cast<long long>(o) + 1;
    double a = 0.0, d = 0.0;
    for (std::size_t j = 0; j < kTaps; ++j) {
      const long long idx = centre - static_cast<long long>(j);
      const double v = (idx >= 0 && idx < n) ? x[static_cast<std::size_t>(idx)]
                                             : x[symmetric_index(idx, n)];
      a += Db2::dec_lo[j] * v;
      d += Db2::dec_hi[j] * v;
    }
    approx[o] = a;
    detail[o] = d;
  }
}

std::vector<double> idwt_step(std::span<const double> approx, std::span<const double> detail) {
  if (approx.size() != detail.size())
    fail(ErrorCode::LengthMismatch, "idwt: approximation and detail lengths differ");
  if (approx.size() < 2) fail(ErrorCode::InputTooShort, "idwt needs at least 2 coefficients");
  const std::size_t nc = approx.size();
  const std::size_t out_len = 2 * nc - kTaps + 2;
  std::vector<double> out(out_len, 0.0);
  // Full upsampled convolution, keeping samples [kTaps - 2, kTaps - 2 + out_len).
  for (std::size_t k = 0; k < nc; ++k) {
    for (std::size_t j = 0; j < kTaps; ++j) {
      const long long pos = static_cast<long long>(2 * k + j) - static_cast<long long>(kTaps - 2);
      if (pos < 0 || pos >= static_cast<long long>(out_len)) continue;
      out[static_cast<std::size_t>(pos)] += approx[k] * Db2::rec_lo[j] + detail[k] * Db2::rec_hi[j];
    }
  }
  return out;
}

WaveletDecomposition wavedec(std::span<const double> x, int levels) {
  if (levels < 1) fail(ErrorCode::InvalidArgument, "wavelet depth must be at least 1");
  if (x.empty()) fail(ErrorCode::EmptyInput, "wavelet decomposition of an empty signal");
  WaveletDecomposition out;
  out.length = x.size();
  out.details.resize(static_cast<std::size_t>(levels));
  std::vector<double> current(x.begin(), x.end());
  std::vector<double> approx;
  for (int level = 1; level <= levels; ++level) {
    dwt_step(current, approx, out.details[static_cast<std::size_t>(level - 1)]);
    current.swap(approx);
  }
  out.approximation = std::move(current);
  return out;
}

std::vector<double> waverec(const WaveletDecomposition& coeffs) {
  std::vector<double> a = coeffs.approximation;
  for (int level = coeffs.levels(); level >= 1; --level) {
    const std::vector<double>& d = coeffs.details[static_cast<std::size_t>(level - 1)];
    if (a.size() == d.size() + 1) a.pop_back();
    a = idwt_step(a, d);
  }
  if (a.size() < coeffs.length)
    fail(ErrorCode::ShapeMismatch, "wavelet coefficients do not match the recorded length");
  a.resize(coeffs.length);
  return a;
}

}  // namespace rfppg
