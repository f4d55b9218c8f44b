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

#include "rfppg/regress.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "rfppg/dct.hpp"
#include "rfppg/error.hpp"
#include "rfppg/rng.hpp"
#include "rfppg/text.hpp"

namespace rfppg {
namespace {

constexpr const char* kModelMagic = "rfppg-model";
constexpr int kModelVersion = 1;

void write_tensor(std::ostream& os, const std::string& name, const Eigen::MatrixXd& t) {
  os << "tensor " << name << ' ' << t.rows() << ' ' << t.cols() << '\n';
  std::string line;
  for (Eigen::Index r = 0; r < t.rows(); ++r) {
    line.clear();
    for (Eigen::Index c = 0; c < t.cols(); ++c) {
      if (c > 0) line.push_back(' ');
      append_double(line, t(r, c));
    }
    line.push_back('\n');
    os << line;
  }
}

class ModelReader {
 public:
  explicit ModelReader(std::istream& is) : is_(is) {}

  std::vector<std::string> tokens() {
    std::string line;
    while (std::getline(is_, line)) {
      ++line_no_;
      if (!trim(line).empty()) {
        std::istringstream ss(line);
        std::vector<std::string> out;
        for (std::string tok; ss >> tok;) out.push_back(tok);
        return out;
      }
    }
    error("unexpected end of model file");
  }

  Eigen::MatrixXd tensor(const std::string& name) {
    const auto head = tokens();
    if (head.size() != 4 || head[0] != "tensor" || head[1] != name)
      error("expected tensor " + name);
    const auto rows = parse_uint(head[2]);
    const auto cols = parse_uint(head[3]);
    if (!rows || !cols || *rows == 0 || *cols == 0) error("bad shape for tensor " + name);
    Eigen::MatrixXd t(static_cast<Eigen::Index>(*rows), static_cast<Eigen::Index>(*cols));
    for (Eigen::Index r = 0; r < t.rows(); ++r) {
      const auto vals = tokens();
      if (vals.size() != *cols) error("tensor " + name + " row has wrong width");
      for (Eigen::Index c = 0; c < t.cols(); ++c) {
        const auto v = parse_double(vals[static_cast<std::size_t>(c)]);
        if (!v || !std::isfinite(*v)) error("bad number in tensor " + name);
        t(r, c) = *v;
      }
    }
    return t;
  }

  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::FormatError, "model line " + std::to_string(line_no_) + ": " + what);
  }

 private:
  std::istream& is_;
  std::size_t line_no_ = 0;
};

}  // namespace

const char* model_kind_name(ModelKind kind) noexcept {
  return kind == ModelKind::Mlp ? "mlp" : "ridge";
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "ridge") return ModelKind::Ridge;
  if (name == "mlp") return ModelKind::Mlp;
  fail(ErrorCode::InvalidArgument, "unknown model kind '" + name + "'");
}

const char* split_mode_name(SplitMode mode) noexcept {
  return mode == SplitMode::Subject ? "subject" : "segment";
}

SplitMode parse_split_mode(const std::string& name) {
  if (name == "segment") return SplitMode::Segment;
  if (name == "subject") return SplitMode::Subject;
  fail(ErrorCode::InvalidArgument, "unknown split mode '" + name + "'");
}

Split split_indices(std::size_t n, double fraction, std::uint64_t seed) {
  if (n < 2) fail(ErrorCode::EmptyDataset, "splitting needs at least 2 pairs");
  if (!(fraction > 0.0 && fraction < 1.0))
    fail(ErrorCode::InvalidArgument, "split fraction must lie in (0, 1)");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order.begin(), order.end());
  const auto n_train = static_cast<std::size_t>(std::floor(static_cast<double>(n) * fraction));
  Split s;
  s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

Split split_pairs(const std::vector<SegmentPair>& pairs, const SplitSpec& spec) {
  if (spec.mode == SplitMode::Segment) return split_indices(pairs.size(), spec.fraction, spec.seed);
  if (pairs.size() < 2) fail(ErrorCode::EmptyDataset, "splitting needs at least 2 pairs");
  std::vector<std::string> subjects;
  for (const SegmentPair& p : pairs) subjects.push_back(p.subject_id);
  std::sort(subjects.begin(), subjects.end());
  subjects.erase(std::unique(subjects.begin(), subjects.end()), subjects.end());
  if (subjects.size() < 2)
    fail(ErrorCode::EmptyDataset, "subject-level split needs at least 2 subjects");
  const Split by_subject = split_indices(subjects.size(), spec.fraction, spec.seed);
  std::map<std::string, bool> in_train;
  for (std::size_t i : by_subject.train) in_train[subjects[i]] = true;
  Split s;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    (in_train.count(pairs[i].subject_id) ? s.train : s.test).push_back(i);
  return s;
}

std::vector<std::size_t> RegressorModel::dims() const {
  if (kind == ModelKind::Mlp) return mlp.dims();
  return {static_cast<std::size_t>(ridge.W.rows()), static_cast<std::size_t>(ridge.W.cols())};
}

void RegressorModel::validate() const {
  if (dct_keep > kSegmentLength)
    fail(ErrorCode::ModelMismatch, "dct_keep exceeds the segment length");
  if (kind == ModelKind::Mlp) {
    try {
      mlp.validate();
    } catch (const Error& e) {
      fail(ErrorCode::ModelMismatch, e.what());
    }
  } else if (ridge.b.size() != ridge.W.cols()) {
    fail(ErrorCode::ModelMismatch, "ridge bias does not match its weights");
  }
  const auto d = dims();
  if (d.empty() || d.front() != coefficients() || d.back() != coefficients())
    fail(ErrorCode::ModelMismatch, "model dimension chain does not match " +
                                       std::to_string(coefficients()) + " DCT coefficients");
}

Eigen::MatrixXd dct_features(const std::vector<SegmentPair>& pairs,
                             const std::vector<std::size_t>& idx, bool radio_side,
                             std::size_t keep) {
  if (keep == 0 || keep > kSegmentLength) keep = kSegmentLength;
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(keep));
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const SegmentPair& p = pairs.at(idx[r]);
    const std::vector<double> c = dct2(radio_side ? p.radio : p.ppg);
    for (std::size_t k = 0; k < keep; ++k)
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = c[k];
  }
  return out;
}

Eigen::MatrixXd predict_dct(const RegressorModel& m, const Eigen::MatrixXd& features) {
  m.validate();
  if (static_cast<std::size_t>(features.cols()) != m.coefficients())
    fail(ErrorCode::ModelMismatch, "feature width does not match the model input");
  if (m.kind == ModelKind::Ridge) return ridge_predict(m.ridge, features);
  return mlp_forward_batch(m.mlp, features.transpose()).transpose();
}

std::vector<Segment> translate(const RegressorModel& m, const std::vector<Segment>& radio) {
  const std::size_t keep = m.coefficients();
  Eigen::MatrixXd feats(static_cast<Eigen::Index>(radio.size()), static_cast<Eigen::Index>(keep));
  for (std::size_t r = 0; r < radio.size(); ++r) {
    if (radio[r].samples.size() != kSegmentLength)
      fail(ErrorCode::ModelMismatch, "translation needs " + std::to_string(kSegmentLength) +
                                         "-sample segments, got " +
                                         std::to_string(radio[r].samples.size()));
    const std::vector<double> c = dct2(radio[r]);
    for (std::size_t k = 0; k < keep; ++k)
      feats(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = c[k];
  }
  const Eigen::MatrixXd pred = predict_dct(m, feats);
  std::vector<Segment> out;
  out.reserve(radio.size());
  std::vector<double> coeffs(kSegmentLength);
  for (std::size_t r = 0; r < radio.size(); ++r) {
    std::fill(coeffs.begin(), coeffs.end(), 0.0);
    for (std::size_t k = 0; k < keep; ++k)
      coeffs[k] = pred(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k));
    Segment s = idct2_segment(coeffs);
    s.origin_index = radio[r].origin_index;
    s.duration_s = radio[r].duration_s;
    out.push_back(std::move(s));
  }
  return out;
}

Segment translate(const RegressorModel& m, const Segment& radio) {
  return translate(m, std::vector<Segment>{radio}).front();
}

RealSeries translate_series(const RegressorModel& m, const RealSeries& radio) {
  const std::vector<Segment> segs = segment(radio, kSegmentSeconds);
  RealSeries out{{}, radio.rate};
  for (const Segment& s : translate(m, segs))
    out.samples.insert(out.samples.end(), s.samples.begin(), s.samples.end());
  return out;
}

void write_model(std::ostream& os, const RegressorModel& m) {
  m.validate();
  os << kModelMagic << ' ' << kModelVersion << ' ' << model_kind_name(m.kind);
  for (std::size_t d : m.dims()) os << ' ' << d;
  os << '\n';
  os << "meta dct_keep=" << m.dct_keep
     << " leaky_slope=" << format_double(m.kind == ModelKind::Mlp ? m.mlp.leaky_slope : 0.0)
     << " alpha=" << format_double(m.kind == ModelKind::Ridge ? m.ridge.alpha : 0.0)
     << " split_mode=" << split_mode_name(m.split.mode)
     << " split_fraction=" << format_double(m.split.fraction)
     << " split_seed=" << m.split.seed << '\n';
  if (m.kind == ModelKind::Ridge) {
    write_tensor(os, "W", m.ridge.W);
    write_tensor(os, "b", m.ridge.b);
  } else {
    for (std::size_t i = 0; i < m.mlp.layers.size(); ++i) {
      write_tensor(os, "W" + std::to_string(i + 1), m.mlp.layers[i].W);
      write_tensor(os, "b" + std::to_string(i + 1), m.mlp.layers[i].b);
    }
  }
  os << "end\n";
}

RegressorModel read_model(std::istream& is) {
  ModelReader rd(is);
  const auto head = rd.tokens();
  if (head.size() < 5 || head[0] != kModelMagic) rd.error("not an rfppg model file");
  if (head[1] != std::to_string(kModelVersion)) rd.error("unsupported model version " + head[1]);
  RegressorModel m;
  try {
    m.kind = parse_model_kind(head[2]);
  } catch (const Error&) {
    rd.error("unknown model kind " + head[2]);
  }
  std::vector<std::size_t> dims;
  for (std::size_t i = 3; i < head.size(); ++i) {
    const auto d = parse_uint(head[i]);
    if (!d || *d == 0) rd.error("bad dimension " + head[i]);
    dims.push_back(static_cast<std::size_t>(*d));
  }
  if (m.kind == ModelKind::Ridge && dims.size() != 2) rd.error("ridge model needs two dimensions");

  const auto meta = rd.tokens();
  if (meta.empty() || meta[0] != "meta") rd.error("expected meta line");
  double slope = 0.01;
  for (std::size_t i = 1; i < meta.size(); ++i) {
    const auto eq = meta[i].find('=');
    if (eq == std::string::npos) rd.error("bad meta entry " + meta[i]);
    const std::string key = meta[i].substr(0, eq);
    const std::string val = meta[i].substr(eq + 1);
    const auto num = parse_double(val);
    if (key == "dct_keep") {
      const auto k = parse_uint(val);
      if (!k) rd.error("bad dct_keep");
      m.dct_keep = static_cast<std::size_t>(*k);
    } else if (key == "leaky_slope" && num) {
      slope = *num;
    } else if (key == "alpha" && num) {
      m.ridge.alpha = *num;
    } else if (key == "split_mode" && (val == "segment" || val == "subject")) {
      m.split.mode = parse_split_mode(val);
    } else if (key == "split_fraction" && num) {
      m.split.fraction = *num;
    } else if (key == "split_seed" && parse_uint(val)) {
      m.split.seed = *parse_uint(val);
    } else {
      rd.error("bad meta entry " + meta[i]);
    }
  }

  const auto check_shape = [&](const Eigen::MatrixXd& t, std::size_t rows, std::size_t cols,
                               const std::string& name) {
    if (static_cast<std::size_t>(t.rows()) != rows || static_cast<std::size_t>(t.cols()) != cols)
      rd.error("tensor " + name + " disagrees with the header dimensions");
  };
  if (m.kind == ModelKind::Ridge) {
    m.ridge.W = rd.tensor("W");
    check_shape(m.ridge.W, dims[0], dims[1], "W");
    const Eigen::MatrixXd b = rd.tensor("b");
    check_shape(b, dims[1], 1, "b");
    m.ridge.b = b.col(0);
  } else {
    m.mlp.leaky_slope = slope;
    for (std::size_t i = 1; i < dims.size(); ++i) {
      const std::string idx = std::to_string(i);
      DenseLayer l;
      l.W = rd.tensor("W" + idx);
      check_shape(l.W, dims[i], dims[i - 1], "W" + idx);
      const Eigen::MatrixXd b = rd.tensor("b" + idx);
      check_shape(b, dims[i], 1, "b" + idx);
      l.b = b.col(0);
      m.mlp.layers.push_back(std::move(l));
    }
  }
  const auto tail = rd.tokens();
  if (tail.size() != 1 || tail[0] != "end") rd.error("expected end");
  m.validate();
  return m;
}

void save_model(const std::string& path, const RegressorModel& m) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
  write_model(os, m);
  os.flush();
  if (!os) fail(ErrorCode::IoError, "failed writing " + path);
}

RegressorModel load_model(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorCode::IoError, "cannot open " + path);
  try {
    return read_model(is);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::FormatError) throw;
    fail(ErrorCode::FormatError, path + ": " + e.what());
  }
}

}  // namespace rfppg
