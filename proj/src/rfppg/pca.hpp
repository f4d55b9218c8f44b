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

#ifndef RFPPG_PCA_HPP
#define RFPPG_PCA_HPP

#include <vector>

#include <Eigen/Dense>

namespace rfppg {

struct PrincipalComponent {
  Eigen::VectorXd loadings;    // unit norm, largest-magnitude entry positive
  std::vector<double> scores;  // loadings' * (x - row means), one per column
  double projected_mean = 0.0; // loadings' * row means
  double variance = 0.0;       // leading eigenvalue of the 1/N covariance
  double explained_fraction = 0.0;
};

/// Leading principal component of x, where each row is a variable observed
/// over the columns. Covariance uses the population (1/N) normalization so
/// the score variance equals the leading eigenvalue. Throws
/// DegenerateVariance when every row is constant.
PrincipalComponent pca_first_component(const Eigen::MatrixXd& x);

}  // namespace rfppg

#endif  // RFPPG_PCA_HPP
