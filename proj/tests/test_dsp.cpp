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

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rfppg/butterworth.hpp"
#include "rfppg/dct.hpp"
#include "rfppg/error.hpp"
#include "rfppg/fft.hpp"
#include "rfppg/pca.hpp"
#include "rfppg/wavelet.hpp"

using namespace rfppg;

TEST_CASE("dft matches direct summation for radix-2 and other lengths") {
  std::mt19937_64 g(5);
  for (std::size_t n : {1u, 2u, 8u, 64u, 256u, 12u, 45u}) {
    std::vector<Complex> x(n);
    for (auto& v : x) v = {oracle::random_vector(1, g)[0], oracle::random_vector(1, g)[0]};
    const auto want = oracle::dft(x);
    std::vector<Complex> got = x;
    dft_inplace(got);
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(got[k] - want[k]) < 1e-10 * (1.0 + n));
    idft_inplace(got);
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(got[k] - x[k]) < 1e-12 * (1.0 + n));
  }
}

TEST_CASE("dft energy: time energy times N equals bin energy") {
  std::mt19937_64 g(6);
  std::vector<Complex> x(64);
  for (auto& v : x) v = {oracle::random_vector(1, g)[0], oracle::random_vector(1, g)[0]};
  double et = 0.0, ef = 0.0;
  for (const auto& v : x) et += std::norm(v);
  dft_inplace(x);
  for (const auto& v : x) ef += std::norm(v);
  CHECK(std::abs(et * 64.0 - ef) < 1e-9 * ef);
}

TEST_CASE("dct2 closed forms") {
  const auto c = dct2(std::vector<double>{1.5, 1.5, 1.5, 1.5});
  CHECK(c[0] == doctest::Approx(3.0).epsilon(1e-15));
  for (int k = 1; k < 4; ++k) CHECK(std::abs(c[k]) < 1e-15);
  const auto d = dct2(std::vector<double>{1.0, 0.0});
  CHECK(d[0] == doctest::Approx(std::sqrt(0.5)));
  CHECK(d[1] == doctest::Approx(std::sqrt(0.5)));
  const auto back = idct2(std::vector<double>{3.0, 0, 0, 0});
  for (double v : back) CHECK(v == doctest::Approx(1.5));
  for (double v : idct2(std::vector<double>(400, 0.0))) CHECK(v == 0.0);
}

TEST_CASE("dct2 matches the direct O(N^2) oracle and inverts") {
  std::mt19937_64 g(8);
  for (int t = 0; t < 10; ++t) {
    Segment s{oracle::random_vector(400, g, -3, 3)};
    const auto got = dct2(s);
    const auto want = oracle::dct2(s.samples);
    double e_t = 0.0, e_f = 0.0;
    for (std::size_t k = 0; k < 400; ++k) {
      CHECK(std::abs(got[k] - want[k]) < 1e-9);
      e_f += got[k] * got[k];
      e_t += s.samples[k] * s.samples[k];
    }
    CHECK(std::abs(std::sqrt(e_f) - std::sqrt(e_t)) < 1e-9 * std::sqrt(e_t));
    const Segment back = idct2_segment(got);
    for (std::size_t k = 0; k < 400; ++k) CHECK(std::abs(back.samples[k] - s.samples[k]) < 1e-9);
  }
  for (std::size_t n : {3u, 17u, 64u}) {
    const auto x = oracle::random_vector(n, g);
    const auto got = dct2(x), want = oracle::dct2(x);
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(got[k] - want[k]) < 1e-12);
  }
}

TEST_CASE("dct2 is linear and the row forms agree") {
  std::mt19937_64 g(9);
  const auto x = oracle::random_vector(400, g), y = oracle::random_vector(400, g);
  std::vector<double> mix(400);
  for (int i = 0; i < 400; ++i) mix[i] = 2.5 * x[i] - 0.75 * y[i];
  const auto dx = dct2(x), dy = dct2(y), dm = dct2(mix);
  for (int i = 0; i < 400; ++i) CHECK(std::abs(dm[i] - (2.5 * dx[i] - 0.75 * dy[i])) < 1e-9);

  Eigen::MatrixXd rows(2, 400);
  for (int i = 0; i < 400; ++i) {
    rows(0, i) = x[i];
    rows(1, i) = y[i];
  }
  const Eigen::MatrixXd r = dct2_rows(rows);
  for (int i = 0; i < 400; ++i) CHECK(std::abs(r(0, i) - dx[i]) < 1e-12);
  CHECK((idct2_rows(r) - rows).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("dct2 segment form insists on 400 samples") {
  Segment s{std::vector<double>(399, 0.0)};
  CHECK_THROWS_AS(dct2(s), Error);
}

TEST_CASE("db2 filters are orthonormal") {
  double lo = 0.0, hi = 0.0, cross = 0.0;
  for (int i = 0; i < 4; ++i) {
    lo += Db2::dec_lo[i] * Db2::dec_lo[i];
    hi += Db2::dec_hi[i] * Db2::dec_hi[i];
    cross += Db2::dec_lo[i] * Db2::dec_hi[i];
  }
  CHECK(lo == doctest::Approx(1.0));
  CHECK(hi == doctest::Approx(1.0));
  CHECK(std::abs(cross) < 1e-15);
  CHECK(Db2::dec_lo[0] + Db2::dec_lo[1] + Db2::dec_lo[2] + Db2::dec_lo[3] ==
        doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("wavedec and waverec reconstruct perfectly") {
  std::mt19937_64 g(10);
  for (std::size_t n : {7u, 64u, 1000u, 1817u, 4096u}) {
    const auto x = oracle::random_vector(n, g, -5, 5);
    for (int levels : {1, 3, 6}) {
      const auto c = wavedec(x, levels);
      CHECK(c.levels() == levels);
      const auto y = waverec(c);
      REQUIRE(y.size() == n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y[i] - x[i]) < 1e-8);
    }
  }
}

TEST_CASE("butterworth magnitude at cutoff and beyond") {
  const ButterworthLowpass f(12, 3.4, 2500.0);
  CHECK(f.sections().size() == 6);
  CHECK(f.magnitude(0.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(f.magnitude(3.4) / (1.0 / std::sqrt(2.0)) - 1.0) < 0.01);
  const double analytic = 1.0 / std::sqrt(1.0 + std::pow(10.0 / 3.4, 24.0));
  CHECK(std::abs(f.magnitude(10.0) / analytic - 1.0) < 0.05);

  // Steady-state amplitude of a 10 Hz tone after one causal pass.
  std::vector<double> x(25000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(2.0 * std::numbers::pi * 10.0 * i / 2500.0);
  const auto y = f.filter(x);
  double peak = 0.0;
  for (std::size_t i = 12500; i < y.size(); ++i) peak = std::max(peak, std::abs(y[i]));
  CHECK(std::abs(peak / analytic - 1.0) < 0.05);

  const ButterworthLowpass odd(5, 3.4, 2500.0);
  CHECK(odd.sections().size() == 3);
  CHECK(std::abs(odd.magnitude(3.4) * std::sqrt(2.0) - 1.0) < 0.01);
  CHECK_THROWS_AS(ButterworthLowpass(12, 200.0, 250.0), Error);
}

TEST_CASE("filtfilt keeps constants and is linear") {
  const ButterworthLowpass f(12, 3.4, kProcessedRate);
  const auto c = f.filtfilt(std::vector<double>(1000, 2.75));
  for (double v : c) CHECK(std::abs(v - 2.75) < 1e-6);
  std::mt19937_64 g(12);
  const auto x = oracle::random_vector(1000, g), y = oracle::random_vector(1000, g);
  std::vector<double> m(1000);
  for (int i = 0; i < 1000; ++i) m[i] = 1.5 * x[i] - 2.0 * y[i];
  const auto fx = f.filtfilt(x), fy = f.filtfilt(y), fm = f.filtfilt(m);
  for (int i = 0; i < 1000; ++i) CHECK(std::abs(fm[i] - (1.5 * fx[i] - 2.0 * fy[i])) < 1e-9);
}

TEST_CASE("pca rank-one case") {
  Eigen::MatrixXd x(2, 3);
  x << 1, 0, -1, 2, 0, -2;
  const PrincipalComponent pc = pca_first_component(x);
  CHECK(pc.explained_fraction == doctest::Approx(1.0));
  CHECK(pc.scores[1] == doctest::Approx(0.0));
  CHECK(pc.scores[0] == doctest::Approx(-pc.scores[2]));
  CHECK(pc.scores[0] == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("pca leading variance matches a Jacobi eigensolver") {
  std::mt19937_64 g(13);
  std::normal_distribution<double> d;
  Eigen::MatrixXd x(16, 1000);
  Eigen::MatrixXd mix = Eigen::MatrixXd::NullaryExpr(16, 16, [&] { return d(g); });
  Eigen::MatrixXd raw = Eigen::MatrixXd::NullaryExpr(16, 1000, [&] { return d(g); });
  x = mix * raw;
  x.colwise() += Eigen::VectorXd::LinSpaced(16, 0.0, 3.0);
  const PrincipalComponent pc = pca_first_component(x);

  const Eigen::VectorXd mu = x.rowwise().mean();
  oracle::Mat cov(16, std::vector<double>(16, 0.0));
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      double acc = 0.0;
      for (int n = 0; n < 1000; ++n) acc += (x(i, n) - mu(i)) * (x(j, n) - mu(j));
      cov[i][j] = acc / 1000.0;
    }
  const auto [vals, vecs] = oracle::jacobi_eigen(cov);
  double score_var = 0.0;
  for (double s : pc.scores) score_var += s * s;
  score_var /= 1000.0;
  CHECK(std::abs(pc.variance - vals[0]) < 1e-8 * vals[0]);
  CHECK(std::abs(score_var - vals[0]) < 1e-8 * vals[0]);

  // No random unit direction captures more variance.
  const Eigen::MatrixXd centered = x.colwise() - mu;
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXd u = Eigen::VectorXd::NullaryExpr(16, [&] { return d(g); });
    u.normalize();
    const double v = (u.transpose() * centered).squaredNorm() / 1000.0;
    CHECK(v <= score_var + 1e-9);
  }

  // Rotating the variables leaves the spectrum alone.
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(mix);
  const Eigen::MatrixXd q = qr.householderQ();
  const PrincipalComponent rotated = pca_first_component(q * x);
  CHECK(std::abs(rotated.explained_fraction - pc.explained_fraction) < 1e-9);
}

TEST_CASE("pca rejects constant rows") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Constant(16, 10, 2.0);
  CHECK_THROWS_AS(pca_first_component(x), Error);
}
