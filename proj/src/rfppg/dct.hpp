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

// Orthonormal type-II DCT and its inverse.

#ifndef RFPPG_DCT_HPP
#define RFPPG_DCT_HPP

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rfppg/signal.hpp"

namespace rfppg {

/// X_k = s_k sum_n x_n cos(pi (2n + 1) k / 2N), s_0 = sqrt(1/N), s_k = sqrt(2/N).
std::vector<double> dct2(std::span<const double> x);
std::vector<double> idct2(std::span<const double> v);

// Segment forms insist on the canonical 400-sample length.
std::vector<double> dct2(const Segment& seg);
Segment idct2_segment(std::span<const double> v);

// Row-wise transforms of a batch (one signal per row).
Eigen::MatrixXd dct2_rows(const Eigen::MatrixXd& x);
Eigen::MatrixXd idct2_rows(const Eigen::MatrixXd& v);

// The N x N basis with B(k, n) = s_k cos(pi (2n + 1) k / 2N); cached per N.
const Eigen::MatrixXd& dct_basis(std::size_t n);

}  // namespace rfppg

#endif  // RFPPG_DCT_HPP
