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
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rfppg/config.hpp"
#include "rfppg/error.hpp"
#include "rfppg/formats.hpp"

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

SubcarrierMatrix float_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::normal_distribution<float> d;
  SubcarrierMatrix m{Eigen::MatrixXcd(rows, cols), 250.0};
  for (Eigen::Index i = 0; i < m.estimates.size(); ++i)
    m.estimates.data()[i] = {static_cast<double>(d(g)), static_cast<double>(d(g))};
  return m;
}

}  // namespace

TEST_CASE("capture header layout is little-endian and exact") {
  std::ostringstream os;
  write_capture(os, float_matrix(2, 3, 1), 0.012);
  const std::string b = os.str();
  REQUIRE(b.size() == 4 + 1 + 2 + 8 + 8 + 2 * 3 * 8);
  CHECK(b.substr(0, 4) == "RPG1");
  CHECK(b[4] == 1);
  CHECK(static_cast<unsigned char>(b[5]) == 2);
  CHECK(b[6] == 0);
  // 250.0 as an IEEE double: 0x406F400000000000, low byte first.
  const unsigned char rate[8] = {0, 0, 0, 0, 0, 0x40, 0x6F, 0x40};
  for (int i = 0; i < 8; ++i) CHECK(static_cast<unsigned char>(b[7 + i]) == rate[i]);
}

TEST_CASE("capture round trip is bit exact for float-representable estimates") {
  const SubcarrierMatrix m = float_matrix(64, 50, 2);
  std::stringstream ss;
  write_capture(ss, m, 0.2);
  const Capture c = read_capture(ss);
  CHECK(c.estimates.estimates == m.estimates);
  CHECK(c.estimates.symbol_rate == 250.0);
  CHECK(c.duration_s == 0.2);
}

TEST_CASE("capture reader rejects corrupt input") {
  std::ostringstream os;
  write_capture(os, float_matrix(4, 4, 3), 0.016);
  const std::string good = os.str();
  std::string bad_magic = good;
  bad_magic[0] = 'X';
  for (const std::string& s : {bad_magic, good.substr(0, good.size() - 3), good + "extra", std::string()}) {
    std::istringstream is(s);
    CHECK(code_of([&] { read_capture(is); }) == ErrorCode::FormatError);
  }
}

TEST_CASE("raw IQ round trip") {
  ComplexSeries iq{{{1.5, -2.0}, {0.25, 0.0}, {-8.0, 3.0}}, 20000.0};
  std::stringstream ss;
  write_raw_iq(ss, iq);
  const ComplexSeries back = read_raw_iq(ss);
  CHECK(back.samples == iq.samples);
  CHECK(back.rate == 20000.0);
}

TEST_CASE("ppg text round trip and validation") {
  std::mt19937_64 g(4);
  const RealSeries x{oracle::random_vector(500, g), 2500.0};
  std::stringstream ss;
  write_ppg(ss, x);
  CHECK(ss.str().rfind("# rate_hz=2500\n", 0) == 0);
  const RealSeries back = read_ppg(ss);
  CHECK(back.samples == x.samples);
  CHECK(back.rate == 2500.0);

  std::istringstream spaced("# rate_hz=10\n0 1.0\n0.1\t2.0\n0.2 3.0\n");
  CHECK(read_ppg(spaced).samples == std::vector<double>{1, 2, 3});
  for (const char* bad : {"0,1\n0.1,2\n", "# rate_hz=10\n0,1\n0,2\n", "# rate_hz=10\n0,1\n0.3,2\n",
                          "# rate_hz=10\n0,1\n0.1,abc\n", "# rate_hz=-1\n0,1\n"}) {
    std::istringstream is(bad);
    CHECK(code_of([&] { read_ppg(is); }) == ErrorCode::FormatError);
  }
}

TEST_CASE("pair archive round trip") {
  std::mt19937_64 g(5);
  std::vector<SegmentPair> pairs(3);
  for (std::size_t i = 0; i < 3; ++i) {
    pairs[i].radio.samples = oracle::random_vector(400, g);
    pairs[i].ppg.samples = oracle::random_vector(400, g);
    pairs[i].record_id = "s0" + std::to_string(i) + "_r1";
    pairs[i].subject_id = "s0" + std::to_string(i);
    pairs[i].index = 10 * i;
    pairs[i].lag = -45 + static_cast<int>(i);
  }
  std::stringstream ss;
  write_pairs(ss, pairs);
  const auto back = read_pairs(ss);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i].radio.samples == pairs[i].radio.samples);
    CHECK(back[i].ppg.samples == pairs[i].ppg.samples);
    CHECK(back[i].record_id == pairs[i].record_id);
    CHECK(back[i].subject_id == pairs[i].subject_id);
    CHECK(back[i].index == pairs[i].index);
    CHECK(back[i].lag == pairs[i].lag);
  }
  CHECK(code_of([] { load_pairs("/nonexistent/pairs.rpp"); }) == ErrorCode::IoError);
}

TEST_CASE("config parsing, overrides and rejection") {
  const RunConfig c = RunConfig::parse(
      "# demo\nseed = 7\nscale=0.5\nsim.subjects = 3\nmodel.kind = mlp\n"
      "mlp.hidden = 64,32,64\npre.dwt_keep_levels = 5,6,7\nsplit.mode = subject\n"
      "mlp.seed = 11\n");
  CHECK(c.seed == 7);
  CHECK(c.record_seconds() == 150.0);
  CHECK(c.sim.subjects == 3);
  CHECK(c.model_kind == ModelKind::Mlp);
  CHECK(c.pipeline.radio_bands.keep_details == std::vector<int>{5, 6, 7});
  const TrainConfig t = c.train_config();
  CHECK(t.dims == std::vector<std::size_t>{400, 64, 32, 64, 400});
  CHECK(t.seed == 11);
  CHECK(c.split_spec().mode == SplitMode::Subject);
  CHECK(c.split_spec().seed == 7);

  CHECK(RunConfig{}.train_config().dims == std::vector<std::size_t>{400, 512, 512, 512, 400});
  CHECK(RunConfig{}.train_config().l2_lambda == 1e-6);
  CHECK(RunConfig{}.train_config().adam.learning_rate == 1e-4);

  for (const char* bad : {"bogus = 1\n", "seed = -3\n", "scale = 0\n", "sim.snr_db = loud\n",
                          "mlp.hidden = 0\n", "split.fraction = 1\n", "pre.fuse_mode = sum\n",
                          "pre.lpf_cutoff_hz = 1300\n", "no equals sign\n", "model.dct_keep = 401\n"})
    CHECK(code_of([&] { RunConfig::parse(bad); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { RunConfig::load("/nonexistent.cfg"); }) == ErrorCode::IoError);

  // Every advertised key accepts at least one of a few generic values.
  for (const std::string& k : RunConfig::keys()) {
    bool ok = false;
    for (const char* v : {"1", "0.5", "true", "mlp", "subject", "concat", "5,6,7,8", "4"}) {
      RunConfig r;
      try {
        r.set(k, v);
        ok = true;
        break;
      } catch (const Error&) {
      }
    }
    CHECK_MESSAGE(ok, k);
  }
}
