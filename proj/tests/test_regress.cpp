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

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rfppg/dct.hpp"
#include "rfppg/error.hpp"
#include "rfppg/metrics.hpp"
#include "rfppg/mlp.hpp"
#include "rfppg/regress.hpp"
#include "rfppg/ridge.hpp"

using namespace rfppg;

namespace {

Eigen::MatrixXd gaussian(Eigen::Index r, Eigen::Index c, std::mt19937_64& g) {
  std::normal_distribution<double> d;
  return Eigen::MatrixXd::NullaryExpr(r, c, [&] { return d(g); });
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an rfppg::Error");
  return ErrorCode::InvalidArgument;
}

std::vector<SegmentPair> random_pairs(std::size_t n, std::size_t subjects, std::mt19937_64& g) {
  std::vector<SegmentPair> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].radio.samples = oracle::random_vector(400, g);
    out[i].ppg.samples = oracle::random_vector(400, g);
    out[i].subject_id = "s" + std::to_string(i % subjects);
    out[i].record_id = out[i].subject_id + "_r1";
    out[i].index = i;
  }
  return out;
}

std::string to_text(const RegressorModel& m) {
  std::ostringstream os;
  write_model(os, m);
  return os.str();
}

}  // namespace

TEST_CASE("ridge recovers an exact linear map") {
  std::mt19937_64 g(1);
  const Eigen::MatrixXd x = gaussian(1000, 400, g);
  const RidgeModel m = ridge_fit(x, 2.0 * x, 0.0);
  CHECK((m.W - 2.0 * Eigen::MatrixXd::Identity(400, 400)).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(m.b.cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("ridge shrinks to zero for huge alpha") {
  std::mt19937_64 g(2);
  const Eigen::MatrixXd x = gaussian(50, 10, g), y = gaussian(50, 4, g);
  CHECK(ridge_fit(x, y, 1e12).W.norm() < 1e-6);
}

TEST_CASE("ridge matches an explicit normal-equation solve") {
  std::mt19937_64 g(3);
  for (double alpha : {0.0, 0.5, 3.0}) {
    const Eigen::MatrixXd x = gaussian(5, 3, g), y = gaussian(5, 2, g);
    oracle::Mat xs(5, std::vector<double>(3)), ys(5, std::vector<double>(2));
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 3; ++j) xs[i][j] = x(i, j);
      for (int j = 0; j < 2; ++j) ys[i][j] = y(i, j);
    }
    const auto want = oracle::ridge_normal_equations(xs, ys, alpha);
    const RidgeModel m = ridge_fit(x, y, alpha);
    for (int o = 0; o < 2; ++o) {
      for (int j = 0; j < 3; ++j) CHECK(std::abs(m.W(j, o) - want[j][o]) < 1e-8);
      CHECK(std::abs(m.b(o) - want[3][o]) < 1e-8);
    }
  }
}

TEST_CASE("ridge optimality and monotone shrinkage") {
  std::mt19937_64 g(4);
  const Eigen::MatrixXd x = gaussian(60, 12, g), y = gaussian(60, 5, g);
  const RidgeModel m = ridge_fit(x, y, 2.0);
  const double best = ridge_objective(m.W, m.b, x, y, 2.0);
  for (int t = 0; t < 20; ++t) {
    Eigen::MatrixXd dw = gaussian(12, 5, g);
    dw *= 1e-3 / dw.norm();
    CHECK(ridge_objective(m.W + dw, m.b, x, y, 2.0) >= best);
  }
  double prev = 1e300;
  for (double a : {0.0, 0.1, 1.0, 10.0, 100.0}) {
    const double nrm = ridge_fit(x, y, a).W.norm();
    CHECK(nrm <= prev);
    prev = nrm;
  }
  CHECK(code_of([&] { ridge_fit(gaussian(3, 8, g), gaussian(3, 2, g), 0.0); }) ==
        ErrorCode::SingularSystem);
  CHECK(code_of([&] { ridge_fit(x, gaussian(59, 5, g), 1.0); }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("mlp forward: zero weights give the output bias") {
  MlpModel m = mlp_init({6, 5, 5, 5, 4}, 1);
  for (DenseLayer& l : m.layers) {
    l.W.setZero();
    l.b.setZero();
  }
  m.layers.back().b << 1, -2, 3, -4;
  std::mt19937_64 g(5);
  const Eigen::VectorXd y = mlp_forward(m, gaussian(6, 1, g).col(0));
  CHECK(y == m.layers.back().b);
}

TEST_CASE("mlp forward is affine in the all-positive regime") {
  std::mt19937_64 g(6);
  MlpModel m = mlp_init({8, 7, 6, 5, 3}, 2);
  for (DenseLayer& l : m.layers) {
    l.W = l.W.cwiseAbs();
    l.b.setConstant(0.1);
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(8, 8);
  for (const DenseLayer& l : m.layers) a = l.W * a;
  const Eigen::VectorXd x1 = gaussian(8, 1, g).cwiseAbs(), x2 = gaussian(8, 1, g).cwiseAbs();
  const Eigen::VectorXd lhs = mlp_forward(m, x1) - mlp_forward(m, x2);
  CHECK((lhs - a * (x1 - x2)).cwiseAbs().maxCoeff() < 1e-6);

  // Single positive path behaves like the identity through every activation.
  MlpModel path = mlp_init({1, 1, 1, 1, 1}, 3);
  for (DenseLayer& l : path.layers) {
    l.W.setConstant(1.0);
    l.b.setZero();
  }
  Eigen::VectorXd v(1);
  double prev = -1e300;
  for (double in : {0.5, 1.0, 2.0, 4.0}) {
    v(0) = in;
    const double out = mlp_forward(path, v)(0);
    CHECK(out == doctest::Approx(in));
    CHECK(out > prev);
    prev = out;
  }
  v(0) = -2.0;
  CHECK(mlp_forward(path, v)(0) == doctest::Approx(-2.0 * 1e-8));
}

TEST_CASE("mlp gradient matches central differences") {
  std::mt19937_64 g(7);
  for (int trial = 0; trial < 5; ++trial) {
    MlpModel m = mlp_init({4, 3, 3, 3, 2}, 10 + trial);
    for (DenseLayer& l : m.layers) l.b = gaussian(l.b.size(), 1, g).col(0) * 0.1;
    const Eigen::MatrixXd x = gaussian(4, 3, g), y = gaussian(2, 3, g) * 3.0;

    // Reject points near the kinks of leaky ReLU or |r|.
    Eigen::MatrixXd h = x;
    double margin = 1e300;
    for (std::size_t i = 0; i < m.layers.size(); ++i) {
      const Eigen::MatrixXd z = (m.layers[i].W * h).colwise() + m.layers[i].b;
      if (i + 1 < m.layers.size()) margin = std::min(margin, z.cwiseAbs().minCoeff());
      h = z.unaryExpr([](double v) { return v > 0 ? v : 0.01 * v; });
      if (i + 1 == m.layers.size()) margin = std::min(margin, (z - y).cwiseAbs().minCoeff());
    }
    if (margin < 1e-3) continue;

    const double l2 = 0.05;
    MlpGradient grad;
    mlp_loss(m, x, y, l2, &grad);
    double worst = 0.0;
    const auto f = [&] { return mlp_loss(m, x, y, l2); };
    const auto compare = [&](double analytic, double* p) {
      const double numeric = oracle::central_difference(f, p, 1e-5);
      const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
      worst = std::max(worst, std::abs(analytic - numeric) / scale);
    };
    for (std::size_t i = 0; i < m.layers.size(); ++i) {
      for (Eigen::Index k = 0; k < m.layers[i].W.size(); ++k)
        compare(grad.dW[i].data()[k], m.layers[i].W.data() + k);
      for (Eigen::Index k = 0; k < m.layers[i].b.size(); ++k)
        compare(grad.db[i].data()[k], m.layers[i].b.data() + k);
    }
    CHECK(worst < 1e-4);
  }
}

TEST_CASE("mlp subgradient of |r| at zero is zero") {
  MlpModel m = mlp_init({2, 1}, 4);
  Eigen::MatrixXd x(2, 1);
  x << 0.3, -0.2;
  const Eigen::MatrixXd y = mlp_forward_batch(m, x);
  MlpGradient grad;
  CHECK(mlp_loss(m, x, y, 0.0, &grad) == 0.0);
  CHECK(grad.dW[0].cwiseAbs().maxCoeff() == 0.0);
  CHECK(grad.db[0].cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("first Adam step moves by about the learning rate against the gradient") {
  MlpModel m = mlp_init({1, 1}, 5);
  const double w0 = m.layers[0].W(0, 0), b0 = m.layers[0].b(0);
  AdamConfig cfg;
  cfg.learning_rate = 1e-3;
  Adam adam(m, cfg);
  MlpGradient g;
  g.dW = {Eigen::MatrixXd::Constant(1, 1, 0.37)};
  g.db = {Eigen::VectorXd::Constant(1, -2.5)};
  adam.step(m, g);
  CHECK(m.layers[0].W(0, 0) - w0 == doctest::Approx(-1e-3 * 0.37 / (0.37 + 1e-8)).epsilon(1e-9));
  CHECK(m.layers[0].b(0) - b0 == doctest::Approx(1e-3 * 2.5 / (2.5 + 1e-8)).epsilon(1e-9));
  CHECK(adam.steps() == 1);
}

TEST_CASE("mlp init is He-uniform and seeded") {
  const MlpModel a = mlp_init({400, 512, 400}, 9), b = mlp_init({400, 512, 400}, 9);
  CHECK(a.layers[0].W == b.layers[0].W);
  CHECK(a.layers[0].W.cwiseAbs().maxCoeff() <= std::sqrt(6.0 / 400.0));
  CHECK(a.layers[1].W.cwiseAbs().maxCoeff() <= std::sqrt(6.0 / 512.0));
  CHECK(a.layers[0].b.isZero());
  const double var = a.layers[0].W.squaredNorm() / a.layers[0].W.size();
  CHECK(var == doctest::Approx(2.0 / 400.0).epsilon(0.02));
  CHECK(mlp_init({400, 512, 400}, 10).layers[0].W != a.layers[0].W);
}

TEST_CASE("mlp learns the identity task") {
  std::mt19937_64 g(8);
  const Eigen::MatrixXd x = gaussian(8, 500, g);
  TrainConfig cfg;
  cfg.dims = {8, 32, 32, 32, 8};
  cfg.epochs = 200;
  cfg.adam.learning_rate = 1e-3;
  cfg.seed = 3;
  const double initial = mlp_mae(mlp_init(cfg.dims, cfg.seed, cfg.leaky_slope), x, x);
  const TrainResult r = mlp_train(x, x, Eigen::MatrixXd(8, 0), Eigen::MatrixXd(8, 0), cfg);
  CHECK(r.history.size() == 200);
  CHECK(r.history.back().train_mae < 0.1 * initial);
  CHECK(std::isnan(r.history.back().val_mae));
}

TEST_CASE("training loss on the identity task decreases with small steps") {
  std::mt19937_64 g(9);
  const Eigen::MatrixXd x = gaussian(8, 200, g);
  TrainConfig cfg;
  cfg.dims = {8, 16, 16, 16, 8};
  cfg.epochs = 60;
  cfg.adam.learning_rate = 1e-4;
  const TrainResult r = mlp_train(x, x, Eigen::MatrixXd(8, 0), Eigen::MatrixXd(8, 0), cfg);
  for (std::size_t i = 1; i < r.history.size(); ++i)
    CHECK(r.history[i].train_loss <= 1.05 * r.history[i - 1].train_loss);
  CHECK(r.history.back().train_loss < r.history.front().train_loss);
}

TEST_CASE("mlp training is deterministic and restores the best epoch") {
  std::mt19937_64 g(10);
  const Eigen::MatrixXd x = gaussian(6, 40, g), y = gaussian(6, 40, g);
  const Eigen::MatrixXd xv = gaussian(6, 10, g), yv = gaussian(6, 10, g);
  TrainConfig cfg;
  cfg.dims = {6, 8, 8, 8, 6};
  cfg.epochs = 80;
  cfg.patience = 5;
  cfg.batch_size = 4;
  cfg.adam.learning_rate = 1e-2;
  const TrainResult a = mlp_train(x, y, xv, yv, cfg), b = mlp_train(x, y, xv, yv, cfg);
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t i = 0; i < a.model.layers.size(); ++i) CHECK(a.model.layers[i].W == b.model.layers[i].W);
  double best = 1e300;
  for (const EpochRecord& e : a.history) best = std::min(best, e.val_mae);
  CHECK(a.history[a.best_epoch - 1].val_mae == best);
  CHECK(mlp_mae(a.model, xv, yv) == doctest::Approx(best).epsilon(1e-12));
  CHECK(a.history.size() <= static_cast<std::size_t>(cfg.epochs));
}

TEST_CASE("mlp training rejects empty and divergent data") {
  TrainConfig cfg;
  cfg.dims = {2, 2, 2};
  CHECK(code_of([&] { mlp_train(Eigen::MatrixXd(2, 0), Eigen::MatrixXd(2, 0), Eigen::MatrixXd(2, 0),
                                Eigen::MatrixXd(2, 0), cfg); }) == ErrorCode::EmptyDataset);
  Eigen::MatrixXd x = Eigen::MatrixXd::Ones(2, 4);
  x(0, 0) = std::numeric_limits<double>::infinity();
  CHECK(code_of([&] { mlp_train(x, Eigen::MatrixXd::Ones(2, 4), Eigen::MatrixXd(2, 0),
                                Eigen::MatrixXd(2, 0), cfg); }) == ErrorCode::DivergedLoss);
}

TEST_CASE("split sizes, disjointness and determinism") {
  const Split s = split_indices(100, 0.8, 42);
  CHECK(s.train.size() == 80);
  CHECK(s.test.size() == 20);
  std::set<std::size_t> all(s.train.begin(), s.train.end());
  all.insert(s.test.begin(), s.test.end());
  CHECK(all.size() == 100);
  CHECK(*all.rbegin() == 99);
  CHECK(std::is_sorted(s.train.begin(), s.train.end()));
  CHECK(split_indices(5, 0.8, 1).train.size() == 4);
  CHECK(split_indices(100, 0.8, 42).test == s.test);
  CHECK(split_indices(100, 0.8, 43).test != s.test);
  CHECK(code_of([] { split_indices(1, 0.8, 1); }) == ErrorCode::EmptyDataset);
  CHECK(code_of([] { split_indices(10, 1.0, 1); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("subject split keeps each subject on one side") {
  std::mt19937_64 g(11);
  const auto pairs = random_pairs(50, 5, g);
  const Split s = split_pairs(pairs, SplitSpec{0.8, 7, SplitMode::Subject});
  std::set<std::string> train, test;
  for (std::size_t i : s.train) train.insert(pairs[i].subject_id);
  for (std::size_t i : s.test) test.insert(pairs[i].subject_id);
  CHECK(train.size() == 4);
  CHECK(test.size() == 1);
  for (const auto& t : test) CHECK(train.count(t) == 0);
  CHECK(s.train.size() + s.test.size() == 50);
}

TEST_CASE("translate with identity and zero ridge models") {
  std::mt19937_64 g(12);
  RegressorModel id;
  id.ridge.W = Eigen::MatrixXd::Identity(400, 400);
  id.ridge.b = Eigen::VectorXd::Zero(400);
  const Segment x{oracle::random_vector(400, g)};
  const Segment y = translate(id, x);
  for (int i = 0; i < 400; ++i) CHECK(std::abs(y.samples[i] - x.samples[i]) < 1e-9);

  RegressorModel zero = id;
  zero.ridge.W.setZero();
  for (double v : translate(zero, x).samples) CHECK(v == 0.0);

  // Truncated model keeps only the leading coefficients.
  RegressorModel low;
  low.dct_keep = 20;
  low.ridge.W = Eigen::MatrixXd::Identity(20, 20);
  low.ridge.b = Eigen::VectorXd::Zero(20);
  auto c = dct2(x);
  std::fill(c.begin() + 20, c.end(), 0.0);
  const auto want = idct2(c);
  const Segment got = translate(low, x);
  for (int i = 0; i < 400; ++i) CHECK(std::abs(got.samples[i] - want[i]) < 1e-9);

  CHECK(code_of([&] { translate(id, Segment{std::vector<double>(100)}); }) == ErrorCode::ModelMismatch);
}

TEST_CASE("translate_series covers whole segments only") {
  RegressorModel id;
  id.ridge.W = Eigen::MatrixXd::Identity(400, 400);
  id.ridge.b = Eigen::VectorXd::Zero(400);
  std::mt19937_64 g(13);
  const RealSeries x{oracle::random_vector(1000, g), kProcessedRate};
  const RealSeries y = translate_series(id, x);
  CHECK(y.size() == 800);
  CHECK(y.rate == kProcessedRate);
  for (int i = 0; i < 800; ++i) CHECK(std::abs(y.samples[i] - x.samples[i]) < 1e-9);
}

TEST_CASE("model text round trip for both kinds") {
  std::mt19937_64 g(14);
  RegressorModel r;
  r.dct_keep = 12;
  r.ridge.W = gaussian(12, 12, g);
  r.ridge.b = gaussian(12, 1, g).col(0);
  r.ridge.alpha = 3.5;
  r.split = SplitSpec{0.75, 99, SplitMode::Subject};
  RegressorModel m;
  m.kind = ModelKind::Mlp;
  m.dct_keep = 10;
  m.mlp = mlp_init({10, 7, 7, 7, 10}, 15, 0.02);
  for (const RegressorModel* model : {&r, &m}) {
    const std::string text = to_text(*model);
    std::istringstream is(text);
    const RegressorModel back = read_model(is);
    CHECK(to_text(back) == text);
    CHECK(back.kind == model->kind);
    CHECK(back.split.mode == model->split.mode);
    CHECK(back.split.seed == model->split.seed);
    const Segment x{oracle::random_vector(400, g)};
    CHECK(translate(back, x).samples == translate(*model, x).samples);
  }
  CHECK(to_text(m).rfind("rfppg-model 1 mlp 10 7 7 7 10\n", 0) == 0);
}

TEST_CASE("malformed model files are rejected") {
  for (const char* bad : {"", "nonsense\n", "rfppg-model 2 ridge 3 3\n",
                          "rfppg-model 1 ridge 2 2\nmeta dct_keep=2\ntensor W 2 2\n1 2\n3\n"}) {
    std::istringstream is(bad);
    CHECK(code_of([&] { read_model(is); }) == ErrorCode::FormatError);
  }
}

TEST_CASE("peaks, heart rate and quantiles") {
  std::vector<double> x(1000, 0.0);
  for (std::size_t p : {100u, 300u, 500u, 700u, 900u}) x[p] = 1.0;
  x[310] = 0.9;  // suppressed: within 0.3 s of a taller peak
  x[600] = 0.2;  // below half height
  const auto peaks = find_peaks(x, 100.0);
  CHECK(peaks == std::vector<std::size_t>{100, 300, 500, 700, 900});
  CHECK(*heart_rate_bpm(x, 100.0) == doctest::Approx(30.0));
  CHECK_FALSE(heart_rate_bpm(std::vector<double>(100, 0.0), 100.0).has_value());
  CHECK(quantile({1, 2, 3, 4}, 0.25) == doctest::Approx(1.75));
  CHECK(quantile({4, 1, 3, 2}, 0.5) == doctest::Approx(2.5));
  CHECK(quantile({7}, 0.9) == 7.0);
}
