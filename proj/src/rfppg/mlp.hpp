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

// Fully connected regressor trained from scratch: leaky-ReLU hidden layers,
// identity output, MAE loss with an L2 weight penalty, Adam updates.

#ifndef RFPPG_MLP_HPP
#define RFPPG_MLP_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace rfppg {

struct DenseLayer {
  Eigen::MatrixXd W;  // outputs x inputs
  Eigen::VectorXd b;
};

struct MlpModel {
  std::vector<DenseLayer> layers;
  double leaky_slope = 0.01;

  // Input width followed by each layer's output width.
  std::vector<std::size_t> dims() const;
  void validate() const;  // ShapeMismatch on a broken chain
};

/// He-uniform weights, U(-sqrt(6 / fan_in), sqrt(6 / fan_in)), zero biases.
MlpModel mlp_init(const std::vector<std::size_t>& dims, std::uint64_t seed,
                  double leaky_slope = 0.01);

Eigen::VectorXd mlp_forward(const MlpModel& m, const Eigen::VectorXd& x);
// One sample per column.
Eigen::MatrixXd mlp_forward_batch(const MlpModel& m, const Eigen::MatrixXd& x);

struct MlpGradient {
  std::vector<Eigen::MatrixXd> dW;
  std::vector<Eigen::VectorXd> db;
};

// Mean absolute error over every output entry of a batch (one sample per column).
double mlp_mae(const MlpModel& m, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

/// Loss = mean |f(x) - y| + l2 * sum ||W_i||_F^2 (biases unpenalized). The
/// subgradient of |r| at r = 0 is taken as 0. Fills grad when non-null.
double mlp_loss(const MlpModel& m, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                double l2, MlpGradient* grad = nullptr);

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class Adam {
 public:
  Adam(const MlpModel& shape, const AdamConfig& cfg);
  void step(MlpModel& m, const MlpGradient& g);
  long steps() const noexcept { return t_; }

 private:
  AdamConfig cfg_;
  long t_ = 0;
  std::vector<Eigen::MatrixXd> mW_, vW_;
  std::vector<Eigen::VectorXd> mb_, vb_;
};

struct TrainConfig {
  std::vector<std::size_t> dims{400, 512, 512, 512, 400};
  double leaky_slope = 0.01;
  double l2_lambda = 1e-6;
  AdamConfig adam{};
  std::size_t batch_size = 32;
  int epochs = 500;
  int patience = 50;  // 0 disables early stopping
  std::uint64_t seed = 42;

  void validate() const;
};

struct EpochRecord {
  int epoch = 0;          // 1-based
  double train_mae = 0.0; // full training set, end of epoch
  double val_mae = 0.0;   // NaN when there is no validation set
  double train_loss = 0.0;
};

struct TrainResult {
  MlpModel model;  // weights of the best validation epoch
  std::vector<EpochRecord> history;
  int best_epoch = 0;
};

/// Mini-batch Adam on (x, y) with one sample per column. Batches are drawn by a
/// seeded per-epoch shuffle. With a validation set the best-validation weights
/// are restored at the end and training stops after `patience` epochs without
/// improvement. Throws EmptyDataset and DivergedLoss.
TrainResult mlp_train(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                      const Eigen::MatrixXd& x_val, const Eigen::MatrixXd& y_val,
                      const TrainConfig& cfg);

}  // namespace rfppg

#endif  // RFPPG_MLP_HPP
