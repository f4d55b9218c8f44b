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

#include "rfppg/ridge.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rfppg/error.hpp"

namespace rfppg {

RidgeModel ridge_fit(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double alpha) {
  if (x.rows() < 1) fail(ErrorCode::EmptyDataset, "ridge fit needs at least one observation");
  if (x.rows() != y.rows())
    fail(ErrorCode::ShapeMismatch, "ridge inputs and targets differ in row count");
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    fail(ErrorCode::InvalidArgument, "ridge alpha must be finite and non-negative");
  if (!x.allFinite() || !y.allFinite())
    fail(ErrorCode::InvalidArgument, "ridge data contains non-finite values");

  const Eigen::RowVectorXd mx = x.colwise().mean();
  const Eigen::RowVectorXd my = y.colwise().mean();
  const Eigen::MatrixXd xc = x.rowwise() - mx;
  const Eigen::MatrixXd yc = y.rowwise() - my;

  Eigen::MatrixXd a = xc.transpose() * xc;
  a.diagonal().array() += alpha;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  const double tiny = static_cast<double>(a.rows()) * std::numeric_limits<double>::epsilon();
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || !(ldlt.rcond() > tiny))
    fail(ErrorCode::SingularSystem, "ridge normal matrix is singular (alpha = " +
                                        std::to_string(alpha) + ")");

  RidgeModel m;
  m.alpha = alpha;
  m.W = ldlt.solve(xc.transpose() * yc);
  m.b = (my - mx * m.W).transpose();
  return m;
}

Eigen::MatrixXd ridge_predict(const RidgeModel& m, const Eigen::MatrixXd& x) {
  if (x.cols() != m.W.rows())
    fail(ErrorCode::ShapeMismatch, "ridge input width " + std::to_string(x.cols()) +
                                       " does not match model " + std::to_string(m.W.rows()));
  Eigen::MatrixXd y = x * m.W;
  y.rowwise() += m.b.transpose();
  return y;
}

double ridge_objective(const Eigen::MatrixXd& w, const Eigen::VectorXd& b,
                       const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double alpha) {
  Eigen::MatrixXd r = x * w - y;
  r.rowwise() += b.transpose();
  return r.squaredNorm() + alpha * w.squaredNorm();
}

}  // namespace rfppg
