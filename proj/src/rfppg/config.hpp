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

// RunConfig: every tunable of the pipeline in one key=value file.
//
//   # comment
//   seed = 42
//   sim.subjects = 4
//   pre.dwt_keep_levels = 5,6,7,8
//
// Unknown keys are rejected and every value is validated at load.

#ifndef RFPPG_CONFIG_HPP
#define RFPPG_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rfppg/mlp.hpp"
#include "rfppg/preprocess.hpp"
#include "rfppg/regress.hpp"
#include "rfppg/rfsim.hpp"

namespace rfppg {

struct SimConfig {
  int subjects = 16;
  int sessions = 2;
  double duration_s = 300.0;
  double ppg_rate = 2500.0;
  double snr_db = 20.0;
  double cardiac_amp = 0.5e-3;  // m
  double resp_amp = 5e-3;       // m
  double resp_rate = 0.25;      // Hz
  double hr_min_bpm = 58.0;
  double hr_max_bpm = 92.0;
  double hrv_min_pct = 2.0;
  double hrv_max_pct = 5.0;
  double amp_jitter = 0.2;  // per-subject relative spread of both amplitudes
  double ppg_dc = 1.5;
  double ppg_drift_amp = 0.8;
  double ppg_drift_hz = 0.05;
  double ppg_noise_std = 0.02;
  int artifact_bursts = 0;  // per record
  bool raw_iq = false;
};

struct RunConfig {
  std::uint64_t seed = 42;
  double scale = 1.0;  // multiplies sim.duration_s
  SimConfig sim;
  OfdmConfig ofdm;
  PipelineConfig pipeline;
  ModelKind model_kind = ModelKind::Ridge;
  double ridge_alpha = 100.0;
  std::size_t dct_keep = 0;
  std::vector<std::size_t> mlp_hidden{512, 512, 512};
  TrainConfig mlp;  // dims and seed are filled in by train_config()
  std::optional<std::uint64_t> mlp_seed;
  double split_fraction = 0.8;
  std::optional<std::uint64_t> split_seed;
  SplitMode split_mode = SplitMode::Segment;

  // Throws ConfigError naming the key.
  void set(const std::string& key, const std::string& value);
  void validate() const;

  double record_seconds() const noexcept { return sim.duration_s * scale; }
  SplitSpec split_spec() const;
  TrainConfig train_config() const;

  static RunConfig load(const std::string& path);
  static RunConfig parse(const std::string& text, const std::string& origin = "<config>");
  static std::vector<std::string> keys();
};

}  // namespace rfppg

#endif  // RFPPG_CONFIG_HPP
