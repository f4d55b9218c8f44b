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

#include "rfppg/mlp.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rfppg/error.hpp"
#include "rfppg/rng.hpp"

namespace rfppg {
namespace {

constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kShuffleStream = 2;

Eigen::MatrixXd leaky(const Eigen::MatrixXd& z, double slope) {
  return z.array().max(slope * z.array()).matrix();
}

double weight_norm2(const MlpModel& m) {
  double s = 0.0;
  for (const DenseLayer& l : m.layers) s += l.W.squaredNorm();
  return s;
}

void check_batch(const MlpModel& m, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  m.validate();
  if (x.rows() != m.layers.front().W.cols() || y.rows() != m.layers.back().W.rows() ||
      x.cols() != y.cols())
    fail(ErrorCode::ShapeMismatch, "batch shape does not match the network");
  if (x.cols() == 0) fail(ErrorCode::EmptyDataset, "empty batch");
}

}  // namespace

std::vector<std::size_t> MlpModel::dims() const {
  std::vector<std::size_t> d;
  if (layers.empty()) return d;
  d.push_back(static_cast<std::size_t>(layers.front().W.cols()));
  for (const DenseLayer& l : layers) d.push_back(static_cast<std::size_t>(l.W.rows()));
  return d;
}

void MlpModel::validate() const {
  if (layers.empty()) fail(ErrorCode::ShapeMismatch, "network has no layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const DenseLayer& l = layers[i];
    if (l.b.size() != l.W.rows())
      fail(ErrorCode::ShapeMismatch, "bias of layer " + std::to_string(i + 1) +
                                         " does not match its weight rows");
    if (i > 0 && l.W.cols() != layers[i - 1].W.rows())
      fail(ErrorCode::ShapeMismatch, "layer " + std::to_string(i + 1) +
                                         " input width breaks the dimension chain");
  }
}

MlpModel mlp_init(const std::vector<std::size_t>& dims, std::uint64_t seed, double leaky_slope) {
  if (dims.size() < 2) fail(ErrorCode::InvalidArgument, "network needs at least one layer");
  for (std::size_t d : dims)
    if (d == 0) fail(ErrorCode::InvalidArgument, "layer widths must be positive");
  Rng rng(mix_seed(seed, kInitStream));
  MlpModel m;
  m.leaky_slope = leaky_slope;
  for (std::size_t i = 1; i < dims.size(); ++i) {
    const auto out = static_cast<Eigen::Index>(dims[i]);
    const auto in = static_cast<Eigen::Index>(dims[i - 1]);
    const double limit = std::sqrt(6.0 / static_cast<double>(in));
    DenseLayer l{Eigen::MatrixXd(out, in), Eigen::VectorXd::Zero(out)};
    for (Eigen::Index r = 0; r < out; ++r)
      for (Eigen::Index c = 0; c < in; ++c) l.W(r, c) = rng.uniform(-limit, limit);
    m.layers.push_back(std::move(l));
  }
  return m;
}

Eigen::MatrixXd mlp_forward_batch(const MlpModel& m, const Eigen::MatrixXd& x) {
  m.validate();
  if (x.rows() != m.layers.front().W.cols())
    fail(ErrorCode::ShapeMismatch, "input width " + std::to_string(x.rows()) +
                                       " does not match network input " +
                                       std::to_string(m.layers.front().W.cols()));
  Eigen::MatrixXd h = x;
  for (std::size_t i = 0; i < m.layers.size(); ++i) {
    Eigen::MatrixXd z = m.layers[i].W * h;
    z.colwise() += m.layers[i].b;
    h = i + 1 < m.layers.size() ? leaky(z, m.leaky_slope) : std::move(z);
  }
  return h;
}

Eigen::VectorXd mlp_forward(const MlpModel& m, const Eigen::VectorXd& x) {
  return mlp_forward_batch(m, x);
}

double mlp_mae(const MlpModel& m, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  check_batch(m, x, y);
  return (mlp_forward_batch(m, x) - y).cwiseAbs().mean();
}

double mlp_loss(const MlpModel& m, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                double l2, MlpGradient* grad) {
  check_batch(m, x, y);
  const std::size_t n_layers = m.layers.size();
  std::vector<Eigen::MatrixXd> h(n_layers + 1);  // h[i] feeds layer i
  std::vector<Eigen::MatrixXd> z(n_layers);
  h[0] = x;
  for (std::size_t i = 0; i < n_layers; ++i) {
    z[i] = m.layers[i].W * h[i];
    z[i].colwise() += m.layers[i].b;
    h[i + 1] = i + 1 < n_layers ? leaky(z[i], m.leaky_slope) : z[i];
  }
  const Eigen::MatrixXd r = h[n_layers] - y;
  const double loss = r.cwiseAbs().mean() + l2 * weight_norm2(m);
  if (grad == nullptr) return loss;

  grad->dW.resize(n_layers);
  grad->db.resize(n_layers);
  const double scale = 1.0 / static_cast<double>(r.size());
  Eigen::MatrixXd delta =
      r.unaryExpr([scale](double v) { return v > 0.0 ? scale : (v < 0.0 ? -scale : 0.0); });
  for (std::size_t i = n_layers; i-- > 0;) {
    grad->dW[i] = delta * h[i].transpose() + 2.0 * l2 * m.layers[i].W;
    grad->db[i] = delta.rowwise().sum();
    if (i == 0) break;
    const double slope = m.leaky_slope;
    delta = (m.layers[i].W.transpose() * delta)
                .cwiseProduct(z[i - 1].unaryExpr([slope](double v) { return v > 0.0 ? 1.0 : slope; }));
  }
  return loss;
}

Adam::Adam(const MlpModel& shape, const AdamConfig& cfg) : cfg_(cfg) {
  for (const DenseLayer& l : shape.layers) {
    mW_.push_back(Eigen::MatrixXd::Zero(l.W.rows(), l.W.cols()));
    vW_.push_back(Eigen::MatrixXd::Zero(l.W.rows(), l.W.cols()));
    mb_.push_back(Eigen::VectorXd::Zero(l.b.size()));
    vb_.push_back(Eigen::VectorXd::Zero(l.b.size()));
  }
}

void Adam::step(MlpModel& m, const MlpGradient& g) {
  if (g.dW.size() != m.layers.size() || mW_.size() != m.layers.size())
    fail(ErrorCode::ShapeMismatch, "optimizer state does not match the network");
  ++t_;
  const double b1 = cfg_.beta1, b2 = cfg_.beta2, eps = cfg_.epsilon;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  const double lr = cfg_.learning_rate;
  const auto update = [&](auto& param, auto& mom, auto& vel, const auto& grad) {
    mom = b1 * mom + (1.0 - b1) * grad;
    vel = b2 * vel + (1.0 - b2) * grad.cwiseAbs2();
    param.array() -= lr * (mom.array() / c1) / ((vel.array() / c2).sqrt() + eps);
  };
  for (std::size_t i = 0; i < m.layers.size(); ++i) {
    update(m.layers[i].W, mW_[i], vW_[i], g.dW[i]);
    update(m.layers[i].b, mb_[i], vb_[i], g.db[i]);
  }
}

void TrainConfig::validate() const {
  if (dims.size() < 2) fail(ErrorCode::InvalidArgument, "network needs at least one layer");
  if (!(l2_lambda >= 0.0)) fail(ErrorCode::InvalidArgument, "l2_lambda must be non-negative");
  if (!(adam.learning_rate > 0.0) || !(adam.epsilon > 0.0))
    fail(ErrorCode::InvalidArgument, "learning rate and epsilon must be positive");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0) || !(adam.beta2 >= 0.0 && adam.beta2 < 1.0))
    fail(ErrorCode::InvalidArgument, "Adam betas must lie in [0, 1)");
  if (batch_size == 0) fail(ErrorCode::InvalidArgument, "batch size must be positive");
  if (epochs < 1) fail(ErrorCode::InvalidArgument, "epochs must be positive");
  if (patience < 0) fail(ErrorCode::InvalidArgument, "patience must be non-negative");
}

TrainResult mlp_train(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                      const Eigen::MatrixXd& x_val, const Eigen::MatrixXd& y_val,
                      const TrainConfig& cfg) {
  cfg.validate();
  if (x.cols() < 1) fail(ErrorCode::EmptyDataset, "no training pairs");
  if (x.cols() != y.cols() || x_val.cols() != y_val.cols())
    fail(ErrorCode::ShapeMismatch, "inputs and targets differ in sample count");
  const bool has_val = x_val.cols() > 0;

  TrainResult result;
  MlpModel model = mlp_init(cfg.dims, cfg.seed, cfg.leaky_slope);
  check_batch(model, x, y);
  if (has_val) check_batch(model, x_val, y_val);
  Adam adam(model, cfg.adam);

  const auto n = static_cast<std::size_t>(x.cols());
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  double best = std::numeric_limits<double>::infinity();
  int stale = 0;
  MlpGradient grad;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    Rng rng(mix_seed(mix_seed(cfg.seed, kShuffleStream), static_cast<std::uint64_t>(epoch)));
    rng.shuffle(order.begin(), order.end());
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t stop = std::min(n, start + cfg.batch_size);
      const std::vector<Eigen::Index> idx(order.begin() + static_cast<std::ptrdiff_t>(start),
                                          order.begin() + static_cast<std::ptrdiff_t>(stop));
      const double loss = mlp_loss(model, x(Eigen::all, idx), y(Eigen::all, idx),
                                   cfg.l2_lambda, &grad);
      if (!std::isfinite(loss))
        fail(ErrorCode::DivergedLoss, "loss became non-finite in epoch " + std::to_string(epoch));
      adam.step(model, grad);
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_mae = mlp_mae(model, x, y);
    rec.train_loss = rec.train_mae + cfg.l2_lambda * weight_norm2(model);
    rec.val_mae = has_val ? mlp_mae(model, x_val, y_val) : std::numeric_limits<double>::quiet_NaN();
    if (!std::isfinite(rec.train_loss) || (has_val && !std::isfinite(rec.val_mae)))
      fail(ErrorCode::DivergedLoss, "loss became non-finite in epoch " + std::to_string(epoch));
    result.history.push_back(rec);

    if (!has_val) {
      result.best_epoch = epoch;
      continue;
    }
    if (rec.val_mae < best) {
      best = rec.val_mae;
      result.model = model;
      result.best_epoch = epoch;
      stale = 0;
    } else if (cfg.patience > 0 && ++stale >= cfg.patience) {
      break;
    }
  }
  if (!has_val) result.model = std::move(model);
  return result;
}

}  // namespace rfppg
