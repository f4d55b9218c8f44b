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

#include "rfppg/pca.hpp"

#include <algorithm>
#include <cmath>

#include "rfppg/error.hpp"

namespace rfppg {

PrincipalComponent pca_first_component(const Eigen::MatrixXd& x) {
  if (x.rows() < 1 || x.cols() < 2)
    fail(ErrorCode::InvalidArgument, "PCA needs at least one variable and two observations");
  if (!x.allFinite()) fail(ErrorCode::InvalidArgument, "PCA input contains non-finite values");

  const Eigen::VectorXd mu = x.rowwise().mean();
  const Eigen::MatrixXd centered = x.colwise() - mu;
  const Eigen::MatrixXd cov =
      (centered * centered.transpose()) / static_cast<double>(x.cols());
  const double total = cov.trace();
  const double scale = std::max(1.0, mu.cwiseAbs().maxCoeff());
  if (!(total > 1e-24 * scale * scale))
    fail(ErrorCode::DegenerateVariance, "PCA input has no variance");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success)
    fail(ErrorCode::DegenerateVariance, "covariance eigendecomposition failed");
  // Eigenvalues come back in increasing order.
  const Eigen::Index lead = cov.rows() - 1;
  PrincipalComponent pc;
  pc.loadings = eig.eigenvectors().col(lead);
  Eigen::Index arg = 0;
  for (Eigen::Index i = 1; i < pc.loadings.size(); ++i)
    if (std::abs(pc.loadings(i)) > std::abs(pc.loadings(arg))) arg = i;
  if (pc.loadings(arg) < 0.0) pc.loadings = -pc.loadings;

  pc.variance = eig.eigenvalues()(lead);
  pc.explained_fraction = pc.variance / total;
  const Eigen::RowVectorXd s = pc.loadings.transpose() * centered;
  pc.scores.assign(s.data(), s.data() + s.size());
  pc.projected_mean = pc.loadings.dot(mu);
  return pc;
}

}  // namespace rfppg
