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

// rfppg command-line driver. Links only the public C API.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rfppg/rfppg.h"

namespace {

void print_log(const char* msg, void*) { std::fprintf(stderr, "%s\n", msg); }

int report(rfppg_status st, const char* what) {
  if (st == RFPPG_OK) return 0;
  std::fprintf(stderr, "rfppg %s: %s: %s\n", what, rfppg_status_name(st), rfppg_last_error());
  return static_cast<int>(st);
}

struct Config {
  rfppg_config* h = nullptr;
  ~Config() { rfppg_config_free(h); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radio-to-PPG synthesis: simulate, preprocess, train, evaluate, translate"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rfppg_version()));

  std::string config_path;
  std::string seed;
  std::string scale;
  std::vector<std::string> overrides;
  bool quiet = false;
  app.add_option("--config", config_path, "key=value run configuration file")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "master seed (overrides the config)");
  app.add_option("--scale", scale, "record duration multiplier (overrides the config)");
  app.add_option("--set", overrides, "extra key=value override, repeatable");
  app.add_flag("-q,--quiet", quiet, "suppress progress messages");

  std::string out;
  std::string model_kind;
  std::string input;
  std::string model_file;

  auto* sim = app.add_subcommand("simulate", "generate a synthetic dataset directory");
  sim->add_option("--out", out, "output directory")->default_val("dataset");

  auto* pre = app.add_subcommand("preprocess", "turn a dataset into aligned segment pairs");
  pre->add_option("dataset", input, "dataset directory")->required();
  pre->add_option("--out", out, "pair archive")->default_val("pairs.rpp");

  auto* train = app.add_subcommand("train", "fit a ridge or MLP translator");
  train->add_option("pairs", input, "pair archive")->required();
  train->add_option("--model-kind", model_kind, "ridge or mlp (default from config)")
      ->check(CLI::IsMember({"ridge", "mlp"}));
  train->add_option("--out", out, "model file")->default_val("model.txt");

  auto* eval = app.add_subcommand("eval", "evaluate a model on the train and test splits");
  eval->add_option("pairs", input, "pair archive")->required();
  eval->add_option("model", model_file, "model file")->required();
  eval->add_option("--out", out, "report directory")->default_val("report");

  auto* tr = app.add_subcommand("translate", "synthesize PPG from a radio capture");
  tr->add_option("capture", input, "capture file (.rpg)")->required();
  tr->add_option("model", model_file, "model file")->required();
  tr->add_option("--out", out, "output PPG file")->default_val("synthetic.ppg.txt");

  CLI11_PARSE(app, argc, argv);

  Config cfg;
  rfppg_status st = config_path.empty() ? rfppg_config_new(&cfg.h)
                                        : rfppg_config_load(config_path.c_str(), &cfg.h);
  if (st != RFPPG_OK) return report(st, "config");
  if (!seed.empty() && (st = rfppg_config_set(cfg.h, "seed", seed.c_str())) != RFPPG_OK)
    return report(st, "--seed");
  if (!scale.empty() && (st = rfppg_config_set(cfg.h, "scale", scale.c_str())) != RFPPG_OK)
    return report(st, "--scale");
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "rfppg --set: expected key=value, got '%s'\n", kv.c_str());
      return static_cast<int>(RFPPG_CONFIG_ERROR);
    }
    st = rfppg_config_set(cfg.h, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    if (st != RFPPG_OK) return report(st, "--set");
  }

  const rfppg_log_fn log = quiet ? nullptr : print_log;
  if (*sim) return report(rfppg_simulate(cfg.h, out.c_str(), log, nullptr), "simulate");
  if (*pre) {
    size_t n = 0;
    st = rfppg_preprocess(cfg.h, input.c_str(), out.c_str(), &n, log, nullptr);
    if (st == RFPPG_OK) std::printf("%zu\n", n);
    return report(st, "preprocess");
  }
  if (*train) {
    const char* kind = model_kind.empty() ? nullptr : model_kind.c_str();
    return report(rfppg_train(cfg.h, input.c_str(), kind, out.c_str(), log, nullptr), "train");
  }
  if (*eval)
    return report(rfppg_eval(cfg.h, input.c_str(), model_file.c_str(), out.c_str(), nullptr, log,
                             nullptr),
                  "eval");
  double duration = 0.0;
  st = rfppg_translate(cfg.h, input.c_str(), model_file.c_str(), out.c_str(), &duration, log,
                       nullptr);
  return report(st, "translate");
}
