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

#ifndef RFPPG_RIDGE_HPP
#define RFPPG_RIDGE_HPP

#include <Eigen/Dense>

namespace rfppg {

// Predictions are Y = X W + 1 b' with one observation per row.
struct RidgeModel {
  Eigen::MatrixXd W;  // inputs x outputs
  Eigen::VectorXd b;  // outputs
  double alpha = 0.0;
};

/// Closed-form fit on column-centered data:
/// W = (Xc' Xc + alpha I)^-1 Xc' Yc, b = mean(Y) - W' mean(X).
/// Throws SingularSystem when the normal matrix cannot be inverted reliably.
RidgeModel ridge_fit(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double alpha);

Eigen::MatrixXd ridge_predict(const RidgeModel& m, const Eigen::MatrixXd& x);

// ||X W + b - Y||_F^2 + alpha ||W||_F^2 for an arbitrary W, b.
double ridge_objective(const Eigen::MatrixXd& w, const Eigen::VectorXd& b,
                       const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double alpha);

}  // namespace rfppg

#endif  // RFPPG_RIDGE_HPP
