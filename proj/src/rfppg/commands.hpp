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

// The five pipeline commands, each available in memory (for tests and the
// acceptance harness) and as a file-to-file operation (for the CLI).

#ifndef RFPPG_COMMANDS_HPP
#define RFPPG_COMMANDS_HPP

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "rfppg/config.hpp"
#include "rfppg/mlp.hpp"
#include "rfppg/preprocess.hpp"
#include "rfppg/regress.hpp"
#include "rfppg/rfsim.hpp"

namespace rfppg {

using LogFn = std::function<void(const std::string&)>;

// RFPPG_WORKERS if set (>= 1), else the hardware thread count.
std::size_t worker_count();

// Runs f(i) for i in [0, n) on up to `workers` threads. The first exception
// (lowest index) is rethrown after all workers finish.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& f);

// Per-record simulation parameters, fully determined by the config seed.
std::vector<RecordSpec> plan_dataset(const RunConfig& cfg);

void cmd_simulate(const RunConfig& cfg, const std::string& out_dir, const LogFn& log = {});

struct RecordReport {
  std::string record_id;
  std::string path;
  std::size_t pairs = 0;
  std::size_t flagged = 0;
  std::string error;  // empty on success
};

struct DatasetPairs {
  std::vector<SegmentPair> pairs;  // sorted by (record id, segment index)
  std::vector<RecordReport> records;
};

/// Preprocesses every capture (*.rpg with a matching *.ppg.txt) in a dataset
/// directory. Bad records are reported and skipped; throws EmptyResult when no
/// pair survives.
DatasetPairs preprocess_dataset(const RunConfig& cfg, const std::string& dataset_dir,
                                const LogFn& log = {});
std::size_t cmd_preprocess(const RunConfig& cfg, const std::string& dataset_dir,
                           const std::string& out_file, const LogFn& log = {});

struct TrainOutcome {
  RegressorModel model;
  std::vector<EpochRecord> history;  // DCT-domain MAE; validation = held-out split
  Split split;
};

TrainOutcome train_model(const RunConfig& cfg, const std::vector<SegmentPair>& pairs,
                         ModelKind kind);
// Writes the model, <out_model>.history.csv and <out_model>.loss.svg.
TrainOutcome cmd_train(const RunConfig& cfg, const std::string& pairs_file, ModelKind kind,
                       const std::string& out_model, const LogFn& log = {});

struct SegmentEval {
  std::string split;
  std::size_t pair = 0;  // index into the pair list
  double mae_time = 0.0;
  double mae_dct = 0.0;
  double pearson = 0.0;
  double hr_ref = 0.0;  // NaN when fewer than two peaks
  double hr_syn = 0.0;
  Segment synthetic;
};

struct SplitMetrics {
  std::string split;
  std::size_t n = 0;
  double mae_time = 0.0;
  double mae_dct = 0.0;
  double pearson_median = 0.0;
  double pearson_q1 = 0.0;
  double pearson_q3 = 0.0;
  double hr_err_median = 0.0;  // NaN when no segment has both heart rates
  std::size_t hr_n = 0;
};

struct EvalReport {
  std::vector<SplitMetrics> splits;  // "train", "test"
  std::vector<SegmentEval> segments;

  const SplitMetrics& split(const std::string& name) const;
};

// Splits the pairs as recorded in the model and evaluates both halves.
EvalReport evaluate(const RegressorModel& m, const std::vector<SegmentPair>& pairs);

// Writes metrics.csv, segments.csv, waveforms.csv, overlay_1.svg, overlay_2.svg.
void write_eval_report(const std::string& report_dir, const EvalReport& report,
                       const std::vector<SegmentPair>& pairs);
EvalReport cmd_eval(const RunConfig& cfg, const std::string& pairs_file,
                    const std::string& model_file, const std::string& report_dir,
                    const LogFn& log = {});

RealSeries cmd_translate(const RunConfig& cfg, const std::string& capture_file,
                         const std::string& model_file, const std::string& out_ppg,
                         const LogFn& log = {});

}  // namespace rfppg

#endif  // RFPPG_COMMANDS_HPP
