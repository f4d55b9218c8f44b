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

#include "rfppg/dct.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "rfppg/error.hpp"

namespace rfppg {
namespace {

std::mutex g_basis_mutex;
std::map<std::size_t, std::unique_ptr<const Eigen::MatrixXd>> g_basis;

Eigen::MatrixXd make_basis(std::size_t n) {
  const auto size = static_cast<Eigen::Index>(n);
  const double nn = static_cast<double>(n);
  Eigen::MatrixXd b(size, size);
  for (Eigen::Index k = 0; k < size; ++k) {
    const double s = std::sqrt((k == 0 ? 1.0 : 2.0) / nn);
    for (Eigen::Index i = 0; i < size; ++i) {
      // Reduce the angle's integer part exactly before calling cos.
      const auto m = (2 * i + 1) * k % (4 * size);
      b(k, i) = s * std::cos(std::numbers::pi * static_cast<double>(m) / (2.0 * nn));
    }
  }
  return b;
}

void check_segment_length(std::size_t n) {
  if (n != kSegmentLength)
    fail(ErrorCode::LengthMismatch, "expected a " + std::to_string(kSegmentLength) +
                                        "-sample segment, got " + std::to_string(n));
}

}  // namespace

const Eigen::MatrixXd& dct_basis(std::size_t n) {
  if (n == 0) fail(ErrorCode::EmptyInput, "DCT of an empty vector");
  std::lock_guard<std::mutex> lock(g_basis_mutex);
  auto it = g_basis.find(n);
  if (it == g_basis.end())
    it = g_basis.emplace(n, std::make_unique<const Eigen::MatrixXd>(make_basis(n))).first;
  return *it->second;
}

std::vector<double> dct2(std::span<const double> x) {
  const Eigen::MatrixXd& b = dct_basis(x.size());
  const Eigen::Map<const Eigen::VectorXd> in(x.data(), static_cast<Eigen::Index>(x.size()));
  const Eigen::VectorXd out = b * in;
  return {out.data(), out.data() + out.size()};
}

std::vector<double> idct2(std::span<const double> v) {
  const Eigen::MatrixXd& b = dct_basis(v.size());
  const Eigen::Map<const Eigen::VectorXd> in(v.data(), static_cast<Eigen::Index>(v.size()));
  const Eigen::VectorXd out = b.transpose() * in;
  return {out.data(), out.data() + out.size()};
}

std::vector<double> dct2(const Segment& seg) {
  check_segment_length(seg.samples.size());
  return dct2(std::span<const double>(seg.samples));
}

Segment idct2_segment(std::span<const double> v) {
  check_segment_length(v.size());
  Segment out;
  out.samples = idct2(v);
  out.duration_s = kSegmentSeconds;
  return out;
}

Eigen::MatrixXd dct2_rows(const Eigen::MatrixXd& x) {
  return x * dct_basis(static_cast<std::size_t>(x.cols())).transpose();
}

Eigen::MatrixXd idct2_rows(const Eigen::MatrixXd& v) {
  return v * dct_basis(static_cast<std::size_t>(v.cols()));
}

}  // namespace rfppg
