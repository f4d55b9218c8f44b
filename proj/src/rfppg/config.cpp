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

#include "rfppg/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "rfppg/error.hpp"
#include "rfppg/text.hpp"

namespace rfppg {
namespace {

using Setter = std::function<void(RunConfig&, const std::string&)>;

[[noreturn]] void bad(const std::string& value, const char* want) {
  throw std::invalid_argument("'" + value + "' is not " + want);
}

double as_double(const std::string& v) {
  const auto d = parse_double(v);
  if (!d || std::isnan(*d)) bad(v, "a number");
  return *d;
}

double as_positive(const std::string& v) {
  const double d = as_double(v);
  if (!(d > 0.0) || !std::isfinite(d)) bad(v, "a positive finite number");
  return d;
}

double as_nonnegative(const std::string& v) {
  const double d = as_double(v);
  if (!(d >= 0.0) || !std::isfinite(d)) bad(v, "a non-negative finite number");
  return d;
}

std::int64_t as_int(const std::string& v) {
  const auto i = parse_int(v);
  if (!i) bad(v, "an integer");
  return *i;
}

int as_count(const std::string& v) {
  const auto i = as_int(v);
  if (i < 1 || i > 1000000) bad(v, "a positive count");
  return static_cast<int>(i);
}

std::uint64_t as_seed(const std::string& v) {
  const auto u = parse_uint(v);
  if (!u) bad(v, "an unsigned integer");
  return *u;
}

bool as_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad(v, "a boolean");
}

std::vector<std::size_t> as_list(const std::string& v) {
  std::vector<std::size_t> out;
  std::stringstream ss(v);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto u = parse_uint(trim(item));
    if (!u) bad(v, "a comma-separated list of unsigned integers");
    out.push_back(static_cast<std::size_t>(*u));
  }
  return out;
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"seed", [](RunConfig& c, const std::string& v) { c.seed = as_seed(v); }},
      {"scale", [](RunConfig& c, const std::string& v) { c.scale = as_positive(v); }},

      {"sim.subjects", [](RunConfig& c, const std::string& v) { c.sim.subjects = as_count(v); }},
      {"sim.sessions", [](RunConfig& c, const std::string& v) { c.sim.sessions = as_count(v); }},
      {"sim.duration_s", [](RunConfig& c, const std::string& v) { c.sim.duration_s = as_positive(v); }},
      {"sim.ppg_rate_hz", [](RunConfig& c, const std::string& v) { c.sim.ppg_rate = as_positive(v); }},
      {"sim.snr_db", [](RunConfig& c, const std::string& v) { c.sim.snr_db = as_double(v); }},
      {"sim.cardiac_amp_m", [](RunConfig& c, const std::string& v) { c.sim.cardiac_amp = as_nonnegative(v); }},
      {"sim.resp_amp_m", [](RunConfig& c, const std::string& v) { c.sim.resp_amp = as_nonnegative(v); }},
      {"sim.resp_rate_hz", [](RunConfig& c, const std::string& v) { c.sim.resp_rate = as_nonnegative(v); }},
      {"sim.hr_min_bpm", [](RunConfig& c, const std::string& v) { c.sim.hr_min_bpm = as_positive(v); }},
      {"sim.hr_max_bpm", [](RunConfig& c, const std::string& v) { c.sim.hr_max_bpm = as_positive(v); }},
      {"sim.hrv_min_pct", [](RunConfig& c, const std::string& v) { c.sim.hrv_min_pct = as_nonnegative(v); }},
      {"sim.hrv_max_pct", [](RunConfig& c, const std::string& v) { c.sim.hrv_max_pct = as_nonnegative(v); }},
      {"sim.amp_jitter", [](RunConfig& c, const std::string& v) { c.sim.amp_jitter = as_nonnegative(v); }},
      {"sim.ppg_dc", [](RunConfig& c, const std::string& v) { c.sim.ppg_dc = as_double(v); }},
      {"sim.ppg_drift_amp", [](RunConfig& c, const std::string& v) { c.sim.ppg_drift_amp = as_nonnegative(v); }},
      {"sim.ppg_drift_hz", [](RunConfig& c, const std::string& v) { c.sim.ppg_drift_hz = as_nonnegative(v); }},
      {"sim.ppg_noise_std", [](RunConfig& c, const std::string& v) { c.sim.ppg_noise_std = as_nonnegative(v); }},
      {"sim.artifact_bursts", [](RunConfig& c, const std::string& v) {
         const auto i = as_int(v);
         if (i < 0 || i > 10000) bad(v, "a burst count in [0, 10000]");
         c.sim.artifact_bursts = static_cast<int>(i);
       }},
      {"sim.raw_iq", [](RunConfig& c, const std::string& v) { c.sim.raw_iq = as_bool(v); }},

      {"ofdm.cp_len", [](RunConfig& c, const std::string& v) { c.ofdm.cp_len = static_cast<std::size_t>(as_count(v)); }},
      {"ofdm.sample_rate_hz", [](RunConfig& c, const std::string& v) { c.ofdm.sample_rate = as_positive(v); }},
      {"ofdm.center_freq_hz", [](RunConfig& c, const std::string& v) { c.ofdm.center_freq = as_positive(v); }},

      {"pre.processed_rate_hz", [](RunConfig& c, const std::string& v) { c.pipeline.processed_rate = as_positive(v); }},
      {"pre.segment_s", [](RunConfig& c, const std::string& v) { c.pipeline.segment_seconds = as_positive(v); }},
      {"pre.artifact_z", [](RunConfig& c, const std::string& v) { c.pipeline.artifact_z = as_positive(v); }},
      {"pre.baseline_band_hz", [](RunConfig& c, const std::string& v) { c.pipeline.baseline_band_hz = as_positive(v); }},
      {"pre.lpf_order", [](RunConfig& c, const std::string& v) { c.pipeline.lpf_order = as_count(v); }},
      {"pre.lpf_cutoff_hz", [](RunConfig& c, const std::string& v) { c.pipeline.lpf_cutoff_hz = as_positive(v); }},
      {"pre.dwt_levels", [](RunConfig& c, const std::string& v) { c.pipeline.radio_bands.levels = as_count(v); }},
      {"pre.dwt_keep_levels", [](RunConfig& c, const std::string& v) {
         c.pipeline.radio_bands.keep_details.clear();
         if (trim(v).empty()) return;
         for (std::size_t l : as_list(v)) c.pipeline.radio_bands.keep_details.push_back(static_cast<int>(l));
       }},
      {"pre.dwt_keep_approx", [](RunConfig& c, const std::string& v) { c.pipeline.radio_bands.keep_approximation = as_bool(v); }},
      {"pre.fuse_mode", [](RunConfig& c, const std::string& v) { c.pipeline.fuse_mode = parse_fuse_mode(v); }},
      {"pre.max_lag", [](RunConfig& c, const std::string& v) {
         const auto i = as_int(v);
         if (i < 0) bad(v, "a non-negative lag");
         c.pipeline.max_lag = static_cast<int>(i);
       }},
      {"pre.resample_beta", [](RunConfig& c, const std::string& v) { c.pipeline.resampler.kaiser_beta = as_nonnegative(v); }},
      {"pre.resample_taps", [](RunConfig& c, const std::string& v) { c.pipeline.resampler.taps_per_phase = as_count(v); }},

      {"model.kind", [](RunConfig& c, const std::string& v) { c.model_kind = parse_model_kind(v); }},
      {"model.dct_keep", [](RunConfig& c, const std::string& v) {
         const auto i = as_int(v);
         if (i < 0) bad(v, "a non-negative coefficient count");
         c.dct_keep = static_cast<std::size_t>(i);
       }},
      {"ridge.alpha", [](RunConfig& c, const std::string& v) { c.ridge_alpha = as_nonnegative(v); }},

      {"mlp.hidden", [](RunConfig& c, const std::string& v) { c.mlp_hidden = as_list(v); }},
      {"mlp.leaky_slope", [](RunConfig& c, const std::string& v) { c.mlp.leaky_slope = as_nonnegative(v); }},
      {"mlp.l2_lambda", [](RunConfig& c, const std::string& v) { c.mlp.l2_lambda = as_nonnegative(v); }},
      {"mlp.learning_rate", [](RunConfig& c, const std::string& v) { c.mlp.adam.learning_rate = as_positive(v); }},
      {"mlp.beta1", [](RunConfig& c, const std::string& v) { c.mlp.adam.beta1 = as_nonnegative(v); }},
      {"mlp.beta2", [](RunConfig& c, const std::string& v) { c.mlp.adam.beta2 = as_nonnegative(v); }},
      {"mlp.epsilon", [](RunConfig& c, const std::string& v) { c.mlp.adam.epsilon = as_positive(v); }},
      {"mlp.batch_size", [](RunConfig& c, const std::string& v) { c.mlp.batch_size = static_cast<std::size_t>(as_count(v)); }},
      {"mlp.epochs", [](RunConfig& c, const std::string& v) { c.mlp.epochs = as_count(v); }},
      {"mlp.patience", [](RunConfig& c, const std::string& v) {
         const auto i = as_int(v);
         if (i < 0) bad(v, "a non-negative epoch count");
         c.mlp.patience = static_cast<int>(i);
       }},
      {"mlp.seed", [](RunConfig& c, const std::string& v) { c.mlp_seed = as_seed(v); }},

      {"split.fraction", [](RunConfig& c, const std::string& v) { c.split_fraction = as_double(v); }},
      {"split.seed", [](RunConfig& c, const std::string& v) { c.split_seed = as_seed(v); }},
      {"split.mode", [](RunConfig& c, const std::string& v) { c.split_mode = parse_split_mode(v); }},
  };
  return table;
}

[[noreturn]] void config_error(const std::string& what) { fail(ErrorCode::ConfigError, what); }

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) config_error("unknown config key '" + key + "'");
  try {
    it->second(*this, std::string(trim(value)));
  } catch (const std::invalid_argument& e) {
    config_error(key + ": " + e.what());
  } catch (const Error& e) {
    config_error(key + ": " + e.what());
  }
}

void RunConfig::validate() const {
  if (sim.hr_min_bpm < 30.0 || sim.hr_max_bpm > 200.0 || sim.hr_min_bpm > sim.hr_max_bpm)
    config_error("heart-rate range must satisfy 30 <= sim.hr_min_bpm <= sim.hr_max_bpm <= 200");
  if (sim.hrv_min_pct > sim.hrv_max_pct || sim.hrv_max_pct > 20.0)
    config_error("HRV range must satisfy sim.hrv_min_pct <= sim.hrv_max_pct <= 20");
  if (sim.amp_jitter >= 1.0) config_error("sim.amp_jitter must be below 1");
  if (sim.ppg_rate <= 2.0 * pipeline.lpf_cutoff_hz)
    config_error("sim.ppg_rate_hz must exceed twice pre.lpf_cutoff_hz");
  if (ofdm.cp_len >= ofdm.n_subcarriers) config_error("ofdm.cp_len must be below 64");
  if (std::llround(pipeline.segment_seconds * pipeline.processed_rate) !=
      static_cast<long long>(kSegmentLength))
    config_error("pre.segment_s * pre.processed_rate_hz must round to 400 samples");
  if (pipeline.radio_bands.levels > 20) config_error("pre.dwt_levels must be at most 20");
  for (int l : pipeline.radio_bands.keep_details)
    if (l < 1 || l > pipeline.radio_bands.levels)
      config_error("pre.dwt_keep_levels entries must lie in [1, pre.dwt_levels]");
  if (pipeline.radio_bands.keep_details.empty() && !pipeline.radio_bands.keep_approximation)
    config_error("radio denoising would zero every band");
  if (2 * static_cast<std::size_t>(pipeline.max_lag) >= kSegmentLength)
    config_error("pre.max_lag must be below half a segment");
  if (dct_keep > kSegmentLength) config_error("model.dct_keep must be at most 400");
  if (mlp_hidden.empty()) config_error("mlp.hidden needs at least one width");
  for (std::size_t w : mlp_hidden)
    if (w == 0) config_error("mlp.hidden widths must be positive");
  if (!(mlp.adam.beta1 < 1.0) || !(mlp.adam.beta2 < 1.0))
    config_error("Adam betas must be below 1");
  if (!(split_fraction > 0.0 && split_fraction < 1.0))
    config_error("split.fraction must lie in (0, 1)");
  if (!(record_seconds() >= 2.0 * pipeline.segment_seconds))
    config_error("records must span at least two segments");
}

SplitSpec RunConfig::split_spec() const {
  return SplitSpec{split_fraction, split_seed.value_or(seed), split_mode};
}

TrainConfig RunConfig::train_config() const {
  TrainConfig t = mlp;
  const std::size_t width = dct_keep == 0 ? kSegmentLength : dct_keep;
  t.dims.assign(1, width);
  t.dims.insert(t.dims.end(), mlp_hidden.begin(), mlp_hidden.end());
  t.dims.push_back(width);
  t.seed = mlp_seed.value_or(seed);
  return t;
}

RunConfig RunConfig::parse(const std::string& text, const std::string& origin) {
  RunConfig c;
  std::istringstream is(text);
  std::size_t line_no = 0;
  for (std::string line; std::getline(is, line);) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string_view body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      config_error(origin + ":" + std::to_string(line_no) + ": expected key = value");
    const std::string key(trim(body.substr(0, eq)));
    const std::string value(trim(body.substr(eq + 1)));
    try {
      c.set(key, value);
    } catch (const Error& e) {
      config_error(origin + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  c.validate();
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorCode::IoError, "cannot open config " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse(ss.str(), path);
}

std::vector<std::string> RunConfig::keys() {
  std::vector<std::string> out;
  for (const auto& [k, _] : setters()) out.push_back(k);
  return out;
}

}  // namespace rfppg
