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
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rfppg/error.hpp"
#include "rfppg/signal.hpp"

using namespace rfppg;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an rfppg::Error");
  return ErrorCode::InvalidArgument;
}

RealSeries gaussian(std::size_t n, double rate, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> d(3.0, 2.0);
  RealSeries x{std::vector<double>(n), rate};
  for (double& v : x.samples) v = d(g);
  return x;
}

}  // namespace

TEST_CASE("zscore of 1 2 3 uses the population deviation") {
  const auto z = zscore(std::vector<double>{1, 2, 3});
  const double s = 1.0 / std::sqrt(2.0 / 3.0);
  CHECK(z[0] == doctest::Approx(-s).epsilon(1e-12));
  CHECK(z[1] == doctest::Approx(0.0));
  CHECK(z[2] == doctest::Approx(s).epsilon(1e-12));
}

TEST_CASE("zscore rejects constant and tiny inputs") {
  CHECK(code_of([] { zscore(std::vector<double>{5, 5, 5}); }) == ErrorCode::DegenerateVariance);
  CHECK(code_of([] { zscore(std::vector<double>{1}); }) == ErrorCode::EmptyInput);
}

TEST_CASE("zscore moments, idempotence and affine invariance") {
  const RealSeries x = gaussian(10000, 100.0, 7);
  const RealSeries z = zscore(x);
  double m = 0.0, v = 0.0;
  for (double e : z.samples) m += e;
  m /= z.size();
  for (double e : z.samples) v += (e - m) * (e - m);
  v /= z.size();
  CHECK(std::abs(m) < 1e-9);
  CHECK(std::abs(std::sqrt(v) - 1.0) < 1e-9);

  const RealSeries zz = zscore(z);
  RealSeries affine = x;
  for (double& e : affine.samples) e = -3.5 * e + 11.0;
  const RealSeries za = zscore(affine);
  for (std::size_t i = 0; i < z.size(); ++i) {
    CHECK(std::abs(zz.samples[i] - z.samples[i]) < 1e-9);
    CHECK(std::abs(za.samples[i] + z.samples[i]) < 1e-9);
  }
}

TEST_CASE("segment lengths and remainder") {
  RealSeries small{std::vector<double>(20, 1.0), 5.0};
  const auto s = segment(small, 2.2);
  REQUIRE(s.size() == 1);
  CHECK(s[0].samples.size() == 11);

  RealSeries x = gaussian(4000, kProcessedRate, 1);
  const auto segs = segment(x, kSegmentSeconds);
  REQUIRE(segs.size() == 10);
  std::vector<double> joined;
  for (const Segment& seg : segs) {
    CHECK(seg.samples.size() == 400);
    joined.insert(joined.end(), seg.samples.begin(), seg.samples.end());
  }
  CHECK(std::equal(joined.begin(), joined.end(), x.samples.begin()));

  RealSeries short_x{std::vector<double>(399, 0.0), kProcessedRate};
  CHECK(code_of([&] { segment(short_x, kSegmentSeconds); }) == ErrorCode::SegmentTooLong);
}

TEST_CASE("resample preserves DC and a slow sinusoid") {
  RealSeries c{std::vector<double>(2500, 3.25), 250.0};
  const RealSeries rc = resample(c, kProcessedRate);
  CHECK(rc.rate == doctest::Approx(kProcessedRate));
  for (std::size_t i = 100; i + 100 < rc.size(); ++i) CHECK(std::abs(rc.samples[i] - 3.25) < 1e-6);

  RealSeries s{std::vector<double>(25000), 2500.0};
  for (std::size_t i = 0; i < s.size(); ++i)
    s.samples[i] = std::sin(2.0 * std::numbers::pi * i / 2500.0);
  const RealSeries rs = resample(s, kProcessedRate);
  CHECK((rs.size() == 1818 || rs.size() == 1819));
  double err = 0.0, ref = 0.0;
  for (std::size_t n = 200; n + 200 < rs.size(); ++n) {
    const double want = std::sin(2.0 * std::numbers::pi * n / kProcessedRate);
    err += (rs.samples[n] - want) * (rs.samples[n] - want);
    ref += want * want;
  }
  CHECK(std::sqrt(err / ref) < 1e-3);
}

TEST_CASE("resample output length for 10 s at several rates") {
  for (double rate : {250.0, 2500.0, 1000.0, 44.1}) {
    RealSeries x{std::vector<double>(static_cast<std::size_t>(std::llround(10.0 * rate)), 1.0), rate};
    const std::size_t n = resample(x, kProcessedRate).size();
    // First and last samples span (N - 1) input periods.
    const double span = 9.0 * rate + (rate - 1.0);
    CHECK(n == static_cast<std::size_t>(std::floor(span * kProcessedRate / rate + 1e-9)) + 1);
    CHECK(n == resampled_length(x.size(), rate, kProcessedRate));
  }
}

TEST_CASE("resample at the input rate is the identity") {
  const RealSeries x = gaussian(2000, 250.0, 3);
  const RealSeries y = resample(x, 250.0);
  REQUIRE(y.size() == x.size());
  for (std::size_t i = 64; i + 64 < x.size(); ++i) CHECK(std::abs(y.samples[i] - x.samples[i]) < 1e-6);
}

TEST_CASE("mae examples, loop oracle and triangle inequality") {
  CHECK(mae(std::vector<double>{0, 0}, std::vector<double>{1, 3}) == 2.0);
  std::mt19937_64 g(11);
  for (int t = 0; t < 20; ++t) {
    const auto a = oracle::random_vector(400, g), b = oracle::random_vector(400, g),
               c = oracle::random_vector(400, g);
    double loop = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) loop += std::abs(a[i] - b[i]);
    CHECK(mae(a, b) == loop / a.size());
    CHECK(mae(a, a) == 0.0);
    CHECK(mae(a, c) <= mae(a, b) + mae(b, c) + 1e-15);
  }
  CHECK(code_of([] { mae(std::vector<double>{1}, std::vector<double>{1, 2}); }) ==
        ErrorCode::LengthMismatch);
}

TEST_CASE("pearson") {
  const std::vector<double> a{1, 2, 3, 4}, b{2, 4, 6, 8}, c{4, 3, 2, 1}, k{1, 1, 1, 1};
  CHECK(pearson(a, b) == doctest::Approx(1.0));
  CHECK(pearson(a, c) == doctest::Approx(-1.0));
  CHECK(pearson(a, k) == 0.0);
}
