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

#include "rfppg/rfppg.h"

#include <algorithm>
#include <exception>
#include <memory>
#include <mutex>
#include <new>
#include <string>

#include "rfppg/commands.hpp"
#include "rfppg/error.hpp"

struct rfppg_config {
  rfppg::RunConfig cfg;
};

struct rfppg_model {
  rfppg::RegressorModel model;
};

struct rfppg_report {
  rfppg::EvalReport report;
};

namespace {

thread_local std::string last_error;

rfppg_status set_error(rfppg_status status, const std::string& msg) {
  last_error = msg;
  return status;
}

// Every exported entry point funnels through here so no exception crosses the
// C boundary.
template <typename F>
rfppg_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return RFPPG_OK;
  } catch (const rfppg::Error& e) {
    return set_error(static_cast<rfppg_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(RFPPG_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return set_error(RFPPG_INTERNAL_ERROR, e.what());
  } catch (...) {
    return set_error(RFPPG_INTERNAL_ERROR, "unknown exception");
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) rfppg::fail(rfppg::ErrorCode::InvalidArgument, std::string(what) + " is NULL");
}

rfppg::LogFn make_log(rfppg_log_fn fn, void* user) {
  if (fn == nullptr) return {};
  auto mu = std::make_shared<std::mutex>();
  return [fn, user, mu](const std::string& msg) {
    std::lock_guard<std::mutex> lock(*mu);
    fn(msg.c_str(), user);
  };
}

}  // namespace

extern "C" {

const char* rfppg_version(void) { return "1.0.0"; }

const char* rfppg_status_name(rfppg_status status) {
  if (status == RFPPG_OK) return "Ok";
  if (status == RFPPG_INTERNAL_ERROR) return "InternalError";
  if (status >= RFPPG_INVALID_ARGUMENT && status <= RFPPG_CONFIG_ERROR)
    return rfppg::error_code_name(static_cast<rfppg::ErrorCode>(status));
  return "Unknown";
}

const char* rfppg_last_error(void) { return last_error.c_str(); }

size_t rfppg_segment_length(void) { return rfppg::kSegmentLength; }

double rfppg_processed_rate(void) { return rfppg::kProcessedRate; }

rfppg_status rfppg_worker_count(size_t* out) {
  return guarded([&] {
    require(out, "out");
    *out = rfppg::worker_count();
  });
}

rfppg_status rfppg_config_new(rfppg_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new rfppg_config{};
  });
}

rfppg_status rfppg_config_load(const char* path, rfppg_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new rfppg_config{rfppg::RunConfig::load(path)};
  });
}

rfppg_status rfppg_config_set(rfppg_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    require(cfg, "config");
    require(key, "key");
    require(value, "value");
    rfppg::RunConfig next = cfg->cfg;
    next.set(key, value);
    next.validate();
    cfg->cfg = std::move(next);
  });
}

void rfppg_config_free(rfppg_config* cfg) { delete cfg; }

rfppg_status rfppg_simulate(const rfppg_config* cfg, const char* out_dir, rfppg_log_fn log,
                            void* user) {
  return guarded([&] {
    require(cfg, "config");
    require(out_dir, "out_dir");
    rfppg::cmd_simulate(cfg->cfg, out_dir, make_log(log, user));
  });
}

rfppg_status rfppg_preprocess(const rfppg_config* cfg, const char* dataset_dir,
                              const char* out_file, size_t* pair_count, rfppg_log_fn log,
                              void* user) {
  return guarded([&] {
    require(cfg, "config");
    require(dataset_dir, "dataset_dir");
    require(out_file, "out_file");
    const std::size_t n = rfppg::cmd_preprocess(cfg->cfg, dataset_dir, out_file, make_log(log, user));
    if (pair_count) *pair_count = n;
  });
}

rfppg_status rfppg_train(const rfppg_config* cfg, const char* pairs_file, const char* model_kind,
                         const char* out_model, rfppg_log_fn log, void* user) {
  return guarded([&] {
    require(cfg, "config");
    require(pairs_file, "pairs_file");
    require(out_model, "out_model");
    const rfppg::ModelKind kind =
        model_kind ? rfppg::parse_model_kind(model_kind) : cfg->cfg.model_kind;
    rfppg::cmd_train(cfg->cfg, pairs_file, kind, out_model, make_log(log, user));
  });
}

rfppg_status rfppg_eval(const rfppg_config* cfg, const char* pairs_file, const char* model_file,
                        const char* report_dir, rfppg_report** report, rfppg_log_fn log,
                        void* user) {
  return guarded([&] {
    require(cfg, "config");
    require(pairs_file, "pairs_file");
    require(model_file, "model_file");
    require(report_dir, "report_dir");
    rfppg::EvalReport r =
        rfppg::cmd_eval(cfg->cfg, pairs_file, model_file, report_dir, make_log(log, user));
    if (report) *report = new rfppg_report{std::move(r)};
  });
}

rfppg_status rfppg_translate(const rfppg_config* cfg, const char* capture_file,
                             const char* model_file, const char* out_ppg, double* duration_s,
                             rfppg_log_fn log, void* user) {
  return guarded([&] {
    require(cfg, "config");
    require(capture_file, "capture_file");
    require(model_file, "model_file");
    require(out_ppg, "out_ppg");
    const rfppg::RealSeries s =
        rfppg::cmd_translate(cfg->cfg, capture_file, model_file, out_ppg, make_log(log, user));
    if (duration_s) *duration_s = s.duration();
  });
}

rfppg_status rfppg_model_load(const char* path, rfppg_model** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new rfppg_model{rfppg::load_model(path)};
  });
}

const char* rfppg_model_kind(const rfppg_model* model) {
  return model ? rfppg::model_kind_name(model->model.kind) : nullptr;
}

rfppg_status rfppg_model_translate(const rfppg_model* model, const double* radio, size_t n,
                                   double* out) {
  return guarded([&] {
    require(model, "model");
    require(radio, "radio");
    require(out, "out");
    if (n != rfppg::kSegmentLength)
      rfppg::fail(rfppg::ErrorCode::ModelMismatch,
                  "segment has " + std::to_string(n) + " samples, model expects " +
                      std::to_string(rfppg::kSegmentLength));
    rfppg::Segment seg;
    seg.samples.assign(radio, radio + n);
    const rfppg::Segment y = rfppg::translate(model->model, seg);
    std::copy(y.samples.begin(), y.samples.end(), out);
  });
}

void rfppg_model_free(rfppg_model* model) { delete model; }

rfppg_status rfppg_report_metric(const rfppg_report* report, const char* split,
                                 const char* metric, double* out) {
  return guarded([&] {
    require(report, "report");
    require(split, "split");
    require(metric, "metric");
    require(out, "out");
    const rfppg::SplitMetrics& s = report->report.split(split);
    const std::string m = metric;
    if (m == "n") *out = static_cast<double>(s.n);
    else if (m == "mae_time") *out = s.mae_time;
    else if (m == "mae_dct") *out = s.mae_dct;
    else if (m == "pearson_median") *out = s.pearson_median;
    else if (m == "pearson_q1") *out = s.pearson_q1;
    else if (m == "pearson_q3") *out = s.pearson_q3;
    else if (m == "hr_err_median") *out = s.hr_err_median;
    else if (m == "hr_n") *out = static_cast<double>(s.hr_n);
    else rfppg::fail(rfppg::ErrorCode::InvalidArgument, "unknown metric " + m);
  });
}

void rfppg_report_free(rfppg_report* report) { delete report; }

}  // extern "C"
