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

// DCT-domain translation from radio segments to PPG segments, the model
// container shared by both regressors, and its text serialization.

#ifndef RFPPG_REGRESS_HPP
#define RFPPG_REGRESS_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rfppg/mlp.hpp"
#include "rfppg/preprocess.hpp"
#include "rfppg/ridge.hpp"
#include "rfppg/signal.hpp"

namespace rfppg {

enum class ModelKind { Ridge, Mlp };
const char* model_kind_name(ModelKind kind) noexcept;
ModelKind parse_model_kind(const std::string& name);

enum class SplitMode { Segment, Subject };
const char* split_mode_name(SplitMode mode) noexcept;
SplitMode parse_split_mode(const std::string& name);

struct SplitSpec {
  double fraction = 0.8;
  std::uint64_t seed = 42;
  SplitMode mode = SplitMode::Segment;
};

struct Split {
  std::vector<std::size_t> train;  // ascending indices into the pair list
  std::vector<std::size_t> test;
};

/// Seeded shuffle of 0..n-1; the first floor(n * fraction) go to train.
Split split_indices(std::size_t n, double fraction, std::uint64_t seed);

/// Segment mode splits pairs directly. Subject mode shuffles the sorted
/// subject ids and sends floor(subjects * fraction) of them to train.
Split split_pairs(const std::vector<SegmentPair>& pairs, const SplitSpec& spec);

struct RegressorModel {
  ModelKind kind = ModelKind::Ridge;
  RidgeModel ridge;
  MlpModel mlp;
  std::size_t dct_keep = 0;  // leading coefficients used; 0 keeps all 400
  SplitSpec split;           // provenance, so evaluation can rebuild the split

  std::size_t coefficients() const noexcept { return dct_keep == 0 ? kSegmentLength : dct_keep; }
  std::vector<std::size_t> dims() const;
  void validate() const;  // ModelMismatch when dims disagree with dct_keep
};

// Leading `keep` DCT coefficients of the radio (or PPG) segment of each listed
// pair, one pair per row.
Eigen::MatrixXd dct_features(const std::vector<SegmentPair>& pairs,
                             const std::vector<std::size_t>& idx, bool radio_side,
                             std::size_t keep);

// Maps DCT feature rows to predicted PPG DCT rows (keep columns).
Eigen::MatrixXd predict_dct(const RegressorModel& m, const Eigen::MatrixXd& features);

/// idct2(model(dct2(radio))): the synthetic PPG segment.
Segment translate(const RegressorModel& m, const Segment& radio);
std::vector<Segment> translate(const RegressorModel& m, const std::vector<Segment>& radio);

/// Translates every whole segment of a processed radio series and concatenates
/// the results at the series rate.
RealSeries translate_series(const RegressorModel& m, const RealSeries& radio);

/// Text format:
///   rfppg-model 1 <ridge|mlp> <d0> <d1> ...
///   meta dct_keep=<k> leaky_slope=<s> alpha=<a> split_mode=<m> split_fraction=<f> split_seed=<n>
///   tensor <name> <rows> <cols>      followed by <rows> lines of <cols> numbers
///   ...
///   end
/// Ridge stores W (inputs x outputs) and b; MLP stores W1, b1, ..., Wn, bn with
/// Wi as outputs x inputs. Numbers use the shortest round-trip decimal form.
void write_model(std::ostream& os, const RegressorModel& m);
RegressorModel read_model(std::istream& is);
void save_model(const std::string& path, const RegressorModel& m);
RegressorModel load_model(const std::string& path);

}  // namespace rfppg

#endif  // RFPPG_REGRESS_HPP
