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

#include "rfppg/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>

#include "json.hpp"
#include "rfppg/dct.hpp"
#include "rfppg/error.hpp"
#include "rfppg/formats.hpp"
#include "rfppg/metrics.hpp"
#include "rfppg/svg.hpp"
#include "rfppg/text.hpp"

namespace rfppg {
namespace fs = std::filesystem;
namespace {

constexpr const char* kCaptureExt = ".rpg";
constexpr const char* kPpgExt = ".ppg.txt";
constexpr const char* kRawIqExt = ".riq";
constexpr const char* kManifest = "manifest.json";

void emit(const LogFn& log, const std::string& msg) {
  if (log) log(msg);
}

std::string fixed(double v, int digits = 4) {
  if (!std::isfinite(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// CSV cell: shortest round-trip form, empty for NaN.
std::string cell(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  os << text;
  os.flush();
  if (!os) fail(ErrorCode::IoError, "failed writing " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    fail(ErrorCode::IoError, "cannot create directory " + dir.string());
}

std::string subject_label(int s, int subjects) {
  char buf[32];
  std::snprintf(buf, sizeof buf, subjects > 99 ? "s%03d" : "s%02d", s + 1);
  return buf;
}

std::map<std::string, std::string> manifest_subjects(const fs::path& dir) {
  std::map<std::string, std::string> out;
  const fs::path path = dir / kManifest;
  if (!fs::exists(path)) return out;
  std::ifstream is(path);
  try {
    const auto j = nlohmann::json::parse(is);
    for (const auto& rec : j.at("records"))
      out[rec.at("record_id").get<std::string>()] = rec.at("subject_id").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::FormatError, path.string() + ": " + e.what());
  }
  return out;
}

std::string history_csv(const std::vector<EpochRecord>& history) {
  std::string s = "epoch,train_mae,val_mae\n";
  for (const EpochRecord& e : history)
    s += std::to_string(e.epoch) + "," + cell(e.train_mae) + "," + cell(e.val_mae) + "\n";
  return s;
}

std::string loss_svg(const std::vector<EpochRecord>& history) {
  PlotLine train{"train MAE", {}, {}, "#1f77b4"};
  PlotLine val{"validation MAE", {}, {}, "#d62728"};
  for (const EpochRecord& e : history) {
    train.x.push_back(e.epoch);
    train.y.push_back(e.train_mae);
    val.x.push_back(e.epoch);
    val.y.push_back(e.val_mae);
  }
  return svg_line_chart({"Training and validation loss", "epoch", "MAE (DCT domain)"},
                        {train, val});
}

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

std::size_t worker_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RFPPG_WORKERS")) {
    const auto v = parse_uint(trim(env));
    if (!v || *v == 0) fail(ErrorCode::ConfigError, "RFPPG_WORKERS must be a positive integer");
    n = static_cast<std::size_t>(*v);
  }
  return n;
}

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& f) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  const auto run = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
    for (std::thread& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<RecordSpec> plan_dataset(const RunConfig& cfg) {
  cfg.validate();
  const SimConfig& sim = cfg.sim;
  std::vector<RecordSpec> plan;
  for (int s = 0; s < sim.subjects; ++s) {
    Rng subject(mix_seed(cfg.seed, 1000 + static_cast<std::uint64_t>(s)));
    const double hr = subject.uniform(sim.hr_min_bpm, sim.hr_max_bpm);
    const double hrv = subject.uniform(sim.hrv_min_pct, sim.hrv_max_pct);
    const double cardiac = sim.cardiac_amp * subject.uniform(1.0 - sim.amp_jitter, 1.0 + sim.amp_jitter);
    const double resp = sim.resp_amp * subject.uniform(1.0 - sim.amp_jitter, 1.0 + sim.amp_jitter);
    for (int session = 1; session <= sim.sessions; ++session) {
      RecordSpec spec;
      spec.subject_id = subject_label(s, sim.subjects);
      spec.record_id = spec.subject_id + "_r" + std::to_string(session);
      spec.session = session;
      spec.seed = mix_seed(mix_seed(cfg.seed, 2000 + static_cast<std::uint64_t>(s)),
                           static_cast<std::uint64_t>(session));
      Rng rec(mix_seed(spec.seed, 100));
      spec.duration_s = cfg.record_seconds();
      spec.ppg_rate = sim.ppg_rate;
      spec.hr_bpm = std::clamp(hr + rec.uniform(-2.0, 2.0), sim.hr_min_bpm, sim.hr_max_bpm);
      spec.hrv_pct = hrv;
      spec.cardiac_amp = cardiac;
      spec.resp_amp = resp;
      spec.resp_rate = sim.resp_rate;
      spec.resp_phase = rec.uniform(0.0, 2.0 * std::numbers::pi);
      spec.snr_db = sim.snr_db;
      Rng geometry(mix_seed(spec.seed, 101));
      spec.channel = default_channel(geometry, sim.snr_db, cfg.ofdm.wavelength());
      spec.ppg_dc = sim.ppg_dc;
      spec.ppg_drift_amp = sim.ppg_drift_amp;
      spec.ppg_drift_freq = sim.ppg_drift_hz;
      spec.ppg_noise_std = sim.ppg_noise_std;
      spec.artifact_bursts = sim.artifact_bursts;
      plan.push_back(std::move(spec));
    }
  }
  return plan;
}

void cmd_simulate(const RunConfig& cfg, const std::string& out_dir, const LogFn& log) {
  const std::vector<RecordSpec> plan = plan_dataset(cfg);
  const fs::path dir(out_dir);
  ensure_dir(dir);
  std::mutex log_mutex;
  parallel_for(plan.size(), worker_count(), [&](std::size_t i) {
    const RecordSpec& spec = plan[i];
    const SimulatedRecord rec = simulate_record(spec, cfg.ofdm, cfg.sim.raw_iq);
    save_capture((dir / (spec.record_id + kCaptureExt)).string(), rec.estimates, spec.duration_s);
    save_ppg((dir / (spec.record_id + kPpgExt)).string(), rec.ppg_reference);
    if (rec.raw_iq) save_raw_iq((dir / (spec.record_id + kRawIqExt)).string(), *rec.raw_iq);
    std::lock_guard<std::mutex> lock(log_mutex);
    emit(log, "simulated " + spec.record_id + " (" + fixed(spec.duration_s, 1) + " s, " +
                  fixed(spec.hr_bpm, 1) + " bpm)");
  });

  nlohmann::ordered_json j;
  j["format"] = "rfppg-dataset";
  j["version"] = 1;
  j["seed"] = cfg.seed;
  j["scale"] = cfg.scale;
  j["duration_s"] = cfg.record_seconds();
  j["ppg_rate_hz"] = cfg.sim.ppg_rate;
  j["symbol_rate_hz"] = cfg.ofdm.symbol_rate();
  j["center_freq_hz"] = cfg.ofdm.center_freq;
  j["subjects"] = cfg.sim.subjects;
  j["records"] = nlohmann::ordered_json::array();
  for (const RecordSpec& spec : plan) {
    nlohmann::ordered_json r;
    r["record_id"] = spec.record_id;
    r["subject_id"] = spec.subject_id;
    r["session"] = spec.session;
    r["seed"] = spec.seed;
    r["capture"] = spec.record_id + kCaptureExt;
    r["ppg"] = spec.record_id + kPpgExt;
    r["snr_db"] = spec.snr_db;
    r["kinematics"] = {{"hr_bpm", spec.hr_bpm},
                       {"hrv_pct", spec.hrv_pct},
                       {"cardiac_amp_m", spec.cardiac_amp},
                       {"resp_amp_m", spec.resp_amp},
                       {"resp_rate_hz", spec.resp_rate},
                       {"resp_phase_rad", spec.resp_phase}};
    r["artifact_bursts"] = spec.artifact_bursts;
    j["records"].push_back(std::move(r));
  }
  write_text(dir / kManifest, j.dump(2) + "\n");
  emit(log, "wrote " + std::to_string(plan.size()) + " records for " +
                std::to_string(cfg.sim.subjects) + " subjects to " + dir.string());
}

DatasetPairs preprocess_dataset(const RunConfig& cfg, const std::string& dataset_dir,
                                const LogFn& log) {
  cfg.validate();
  const fs::path dir(dataset_dir);
  if (!fs::is_directory(dir)) fail(ErrorCode::IoError, "not a directory: " + dataset_dir);
  std::vector<fs::path> captures;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == kCaptureExt)
      captures.push_back(entry.path());
  std::sort(captures.begin(), captures.end());
  if (captures.empty()) fail(ErrorCode::EmptyResult, "no captures in " + dataset_dir);
  const auto subjects = manifest_subjects(dir);

  std::vector<RecordResult> results(captures.size());
  DatasetPairs out;
  out.records.resize(captures.size());
  parallel_for(captures.size(), worker_count(), [&](std::size_t i) {
    RecordReport& rep = out.records[i];
    rep.record_id = captures[i].stem().string();
    rep.path = captures[i].string();
    try {
      const Capture cap = load_capture(rep.path);
      const fs::path ppg_path = dir / (rep.record_id + kPpgExt);
      if (!fs::exists(ppg_path))
        fail(ErrorCode::FormatError, rep.path + ": no matching " + ppg_path.filename().string());
      const RealSeries ppg = load_ppg(ppg_path.string());
      const auto it = subjects.find(rep.record_id);
      const std::string subject =
          it != subjects.end() ? it->second : rep.record_id.substr(0, rep.record_id.find('_'));
      results[i] = preprocess_record(cap.estimates, ppg, cfg.pipeline, rep.record_id, subject);
      rep.pairs = results[i].pairs.size();
      rep.flagged = results[i].flagged.size();
    } catch (const Error& e) {
      rep.error = std::string(error_code_name(e.code())) + ": " + e.what();
    }
  });

  std::size_t failed = 0;
  for (std::size_t i = 0; i < captures.size(); ++i) {
    const RecordReport& rep = out.records[i];
    if (!rep.error.empty()) {
      ++failed;
      emit(log, "warning: skipped " + rep.record_id + ": " + rep.error);
      continue;
    }
    emit(log, rep.record_id + ": " + std::to_string(rep.pairs) + " pairs, " +
                  std::to_string(rep.flagged) + " flagged windows");
    for (SegmentPair& p : results[i].pairs) out.pairs.push_back(std::move(p));
  }
  if (failed > 0)
    emit(log, "warning: " + std::to_string(failed) + " of " + std::to_string(captures.size()) +
                  " records failed");
  if (out.pairs.empty()) fail(ErrorCode::EmptyResult, "no segment pairs produced from " + dataset_dir);
  std::stable_sort(out.pairs.begin(), out.pairs.end(), [](const SegmentPair& a, const SegmentPair& b) {
    return a.record_id != b.record_id ? a.record_id < b.record_id : a.index < b.index;
  });
  return out;
}

std::size_t cmd_preprocess(const RunConfig& cfg, const std::string& dataset_dir,
                           const std::string& out_file, const LogFn& log) {
  const DatasetPairs data = preprocess_dataset(cfg, dataset_dir, log);
  save_pairs(out_file, data.pairs);
  emit(log, "wrote " + std::to_string(data.pairs.size()) + " pairs to " + out_file);
  return data.pairs.size();
}

TrainOutcome train_model(const RunConfig& cfg, const std::vector<SegmentPair>& pairs,
                         ModelKind kind) {
  cfg.validate();
  TrainOutcome out;
  out.split = split_pairs(pairs, cfg.split_spec());
  if (out.split.train.empty()) fail(ErrorCode::EmptyDataset, "training split is empty");
  const std::size_t keep = cfg.dct_keep;
  const Eigen::MatrixXd x = dct_features(pairs, out.split.train, true, keep);
  const Eigen::MatrixXd y = dct_features(pairs, out.split.train, false, keep);
  const Eigen::MatrixXd xv = dct_features(pairs, out.split.test, true, keep);
  const Eigen::MatrixXd yv = dct_features(pairs, out.split.test, false, keep);

  out.model.kind = kind;
  out.model.dct_keep = keep;
  out.model.split = cfg.split_spec();
  if (kind == ModelKind::Ridge) {
    out.model.ridge = ridge_fit(x, y, cfg.ridge_alpha);
    EpochRecord rec;
    rec.epoch = 1;
    rec.train_mae = (ridge_predict(out.model.ridge, x) - y).cwiseAbs().mean();
    rec.val_mae = xv.rows() > 0 ? (ridge_predict(out.model.ridge, xv) - yv).cwiseAbs().mean() : nan();
    rec.train_loss = rec.train_mae;
    out.history.push_back(rec);
  } else {
    TrainResult r = mlp_train(x.transpose(), y.transpose(), xv.transpose(), yv.transpose(),
                              cfg.train_config());
    out.model.mlp = std::move(r.model);
    out.history = std::move(r.history);
  }
  return out;
}

TrainOutcome cmd_train(const RunConfig& cfg, const std::string& pairs_file, ModelKind kind,
                       const std::string& out_model, const LogFn& log) {
  const std::vector<SegmentPair> pairs = load_pairs(pairs_file);
  emit(log, "training " + std::string(model_kind_name(kind)) + " on " +
                std::to_string(pairs.size()) + " pairs");
  TrainOutcome out = train_model(cfg, pairs, kind);
  save_model(out_model, out.model);
  write_text(out_model + ".history.csv", history_csv(out.history));
  write_text(out_model + ".loss.svg", loss_svg(out.history));
  const EpochRecord& last = out.history.back();
  emit(log, "train " + std::to_string(out.split.train.size()) + " / test " +
                std::to_string(out.split.test.size()) + " pairs; " +
                std::to_string(out.history.size()) + " epochs; final train MAE " +
                fixed(last.train_mae) + ", validation MAE " + fixed(last.val_mae));
  emit(log, "wrote " + out_model);
  return out;
}

const SplitMetrics& EvalReport::split(const std::string& name) const {
  for (const SplitMetrics& s : splits)
    if (s.split == name) return s;
  fail(ErrorCode::InvalidArgument, "no split named " + name);
}

EvalReport evaluate(const RegressorModel& m, const std::vector<SegmentPair>& pairs) {
  m.validate();
  for (const SegmentPair& p : pairs)
    if (p.radio.samples.size() != kSegmentLength || p.ppg.samples.size() != kSegmentLength)
      fail(ErrorCode::ModelMismatch, "model expects " + std::to_string(kSegmentLength) +
                                         "-sample segments, archive has " +
                                         std::to_string(p.radio.samples.size()));
  const Split split = split_pairs(pairs, m.split);
  EvalReport report;
  for (const auto& [name, idx] : {std::pair{std::string("train"), split.train},
                                  std::pair{std::string("test"), split.test}}) {
    std::vector<Segment> radio;
    for (std::size_t i : idx) radio.push_back(pairs[i].radio);
    const std::vector<Segment> syn = translate(m, radio);
    SplitMetrics sm;
    sm.split = name;
    sm.n = idx.size();
    std::vector<double> rs, hr_err;
    double sum_time = 0.0, sum_dct = 0.0;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      const SegmentPair& p = pairs[idx[j]];
      SegmentEval se;
      se.split = name;
      se.pair = idx[j];
      se.synthetic = syn[j];
      se.mae_time = mae(se.synthetic.samples, p.ppg.samples);
      se.mae_dct = mae(dct2(se.synthetic), dct2(p.ppg));
      se.pearson = pearson(se.synthetic.samples, p.ppg.samples);
      se.hr_ref = heart_rate_bpm(p.ppg.samples, kProcessedRate).value_or(nan());
      se.hr_syn = heart_rate_bpm(se.synthetic.samples, kProcessedRate).value_or(nan());
      sum_time += se.mae_time;
      sum_dct += se.mae_dct;
      rs.push_back(se.pearson);
      if (std::isfinite(se.hr_ref) && std::isfinite(se.hr_syn))
        hr_err.push_back(std::abs(se.hr_ref - se.hr_syn));
      report.segments.push_back(std::move(se));
    }
    if (!idx.empty()) {
      sm.mae_time = sum_time / static_cast<double>(idx.size());
      sm.mae_dct = sum_dct / static_cast<double>(idx.size());
      sm.pearson_median = quantile(rs, 0.5);
      sm.pearson_q1 = quantile(rs, 0.25);
      sm.pearson_q3 = quantile(rs, 0.75);
    } else {
      sm.mae_time = sm.mae_dct = sm.pearson_median = sm.pearson_q1 = sm.pearson_q3 = nan();
    }
    sm.hr_n = hr_err.size();
    sm.hr_err_median = hr_err.empty() ? nan() : quantile(hr_err, 0.5);
    report.splits.push_back(sm);
  }
  return report;
}

void write_eval_report(const std::string& report_dir, const EvalReport& report,
                       const std::vector<SegmentPair>& pairs) {
  const fs::path dir(report_dir);
  ensure_dir(dir);

  std::string metrics =
      "split,n,mae_time,mae_dct,pearson_median,pearson_q1,pearson_q3,hr_abs_err_median,hr_n\n";
  for (const SplitMetrics& s : report.splits)
    metrics += s.split + "," + std::to_string(s.n) + "," + cell(s.mae_time) + "," +
               cell(s.mae_dct) + "," + cell(s.pearson_median) + "," + cell(s.pearson_q1) + "," +
               cell(s.pearson_q3) + "," + cell(s.hr_err_median) + "," + std::to_string(s.hr_n) + "\n";
  write_text(dir / "metrics.csv", metrics);

  std::string segs = "split,record_id,subject_id,index,lag,mae_time,mae_dct,pearson,hr_ref_bpm,hr_syn_bpm\n";
  std::string waves = "split,record_id,index,sample,time_s,reference,synthetic\n";
  for (const SegmentEval& se : report.segments) {
    const SegmentPair& p = pairs[se.pair];
    const std::string idx = std::to_string(p.index);
    segs += se.split + "," + p.record_id + "," + p.subject_id + "," + idx + "," +
            std::to_string(p.lag) + "," + cell(se.mae_time) + "," + cell(se.mae_dct) + "," +
            cell(se.pearson) + "," + cell(se.hr_ref) + "," + cell(se.hr_syn) + "\n";
    const std::string prefix = se.split + "," + p.record_id + "," + idx + ",";
    for (std::size_t n = 0; n < p.ppg.samples.size(); ++n) {
      waves += prefix;
      waves += std::to_string(n);
      waves.push_back(',');
      append_double(waves, static_cast<double>(n) / kProcessedRate);
      waves.push_back(',');
      append_double(waves, p.ppg.samples[n]);
      waves.push_back(',');
      append_double(waves, se.synthetic.samples[n]);
      waves.push_back('\n');
    }
  }
  write_text(dir / "segments.csv", segs);
  write_text(dir / "waveforms.csv", waves);

  // Two overlays from the held-out split: the segments nearest its median and
  // upper-quartile correlation.
  std::vector<const SegmentEval*> pool;
  for (const SegmentEval& se : report.segments)
    if (se.split == "test") pool.push_back(&se);
  if (pool.empty())
    for (const SegmentEval& se : report.segments) pool.push_back(&se);
  if (pool.empty()) return;
  std::vector<double> rs;
  for (const SegmentEval* se : pool) rs.push_back(se->pearson);
  int plot_no = 1;
  for (double q : {0.5, 0.75}) {
    const double target = quantile(rs, q);
    const SegmentEval* best = pool.front();
    for (const SegmentEval* se : pool)
      if (std::abs(se->pearson - target) < std::abs(best->pearson - target)) best = se;
    const SegmentPair& p = pairs[best->pair];
    PlotLine ref{"reference PPG", {}, p.ppg.samples, "#222222"};
    PlotLine syn{"synthetic PPG", {}, best->synthetic.samples, "#d62728"};
    for (std::size_t n = 0; n < p.ppg.samples.size(); ++n) {
      ref.x.push_back(static_cast<double>(n) / kProcessedRate);
      syn.x.push_back(static_cast<double>(n) / kProcessedRate);
    }
    const std::string title = p.record_id + " segment " + std::to_string(p.index) +
                              " (" + best->split + ", r = " + fixed(best->pearson, 3) + ")";
    write_text(dir / ("overlay_" + std::to_string(plot_no++) + ".svg"),
               svg_line_chart({title, "time (s)", "Z-score"}, {ref, syn}));
  }
}

EvalReport cmd_eval(const RunConfig& cfg, const std::string& pairs_file,
                    const std::string& model_file, const std::string& report_dir,
                    const LogFn& log) {
  cfg.validate();
  const std::vector<SegmentPair> pairs = load_pairs(pairs_file);
  const RegressorModel model = load_model(model_file);
  const EvalReport report = evaluate(model, pairs);
  write_eval_report(report_dir, report, pairs);
  for (const SplitMetrics& s : report.splits)
    emit(log, s.split + ": n=" + std::to_string(s.n) + " MAE(time)=" + fixed(s.mae_time) +
                  " MAE(DCT)=" + fixed(s.mae_dct) + " r median=" + fixed(s.pearson_median, 3) +
                  " [" + fixed(s.pearson_q1, 3) + ", " + fixed(s.pearson_q3, 3) + "]" +
                  " HR error median=" + fixed(s.hr_err_median, 2) + " bpm (n=" +
                  std::to_string(s.hr_n) + ")");
  emit(log, "wrote report to " + report_dir);
  return report;
}

RealSeries cmd_translate(const RunConfig& cfg, const std::string& capture_file,
                         const std::string& model_file, const std::string& out_ppg,
                         const LogFn& log) {
  cfg.validate();
  const Capture cap = load_capture(capture_file);
  const RegressorModel model = load_model(model_file);
  const RealSeries radio = preprocess_radio(cap.estimates, cfg.pipeline);
  const RealSeries out = translate_series(model, radio);
  save_ppg(out_ppg, out);
  emit(log, "wrote " + fixed(out.duration(), 1) + " s of synthetic PPG to " + out_ppg);
  return out;
}

}  // namespace rfppg
