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

#include "rfppg/formats.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "rfppg/error.hpp"
#include "rfppg/text.hpp"

namespace rfppg {
namespace {

constexpr std::uint8_t kFormatVersion = 1;

class ByteWriter {
 public:
  explicit ByteWriter(std::ostream& os) : os_(os) {}

  void bytes(const void* p, std::size_t n) {
    os_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    if (!os_) fail(ErrorCode::IoError, "write failed");
  }
  template <class U>
  void uint(U v) {
    unsigned char b[sizeof(U)];
    for (std::size_t i = 0; i < sizeof(U); ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    bytes(b, sizeof b);
  }
  void f32(float v) { uint(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { uint(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    if (s.size() > 0xFFFF) fail(ErrorCode::InvalidArgument, "identifier longer than 65535 bytes");
    uint(static_cast<std::uint16_t>(s.size()));
    bytes(s.data(), s.size());
  }

 private:
  std::ostream& os_;
};

class ByteReader {
 public:
  explicit ByteReader(std::istream& is) : is_(is) {}

  void bytes(void* p, std::size_t n) {
    is_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(is_.gcount()) != n) fail(ErrorCode::FormatError, "truncated file");
  }
  template <class U>
  U uint() {
    unsigned char b[sizeof(U)];
    bytes(b, sizeof b);
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(static_cast<U>(b[i]) << (8 * i));
    return v;
  }
  float f32() { return std::bit_cast<float>(uint<std::uint32_t>()); }
  double f64() { return std::bit_cast<double>(uint<std::uint64_t>()); }
  std::string str() {
    std::string s(uint<std::uint16_t>(), '\0');
    bytes(s.data(), s.size());
    return s;
  }
  void magic(const char* want) {
    char got[4];
    bytes(got, 4);
    if (std::memcmp(got, want, 4) != 0)
      fail(ErrorCode::FormatError, std::string("bad magic, expected ") + want);
  }
  void version() {
    const auto v = uint<std::uint8_t>();
    if (v != kFormatVersion)
      fail(ErrorCode::FormatError, "unsupported format version " + std::to_string(v));
  }
  void expect_end() {
    if (is_.peek() != std::char_traits<char>::eof())
      fail(ErrorCode::FormatError, "trailing bytes after payload");
  }
  // Remaining bytes, for payload-size checks.
  std::uint64_t remaining() {
    const auto here = is_.tellg();
    if (here < 0) return 0;
    is_.seekg(0, std::ios::end);
    const auto end = is_.tellg();
    is_.seekg(here);
    return static_cast<std::uint64_t>(end - here);
  }

 private:
  std::istream& is_;
};

std::ofstream open_out(const std::string& path, bool binary) {
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
  return os;
}

std::ifstream open_in(const std::string& path, bool binary) {
  std::ifstream is(path, binary ? std::ios::binary : std::ios::in);
  if (!is) fail(ErrorCode::IoError, "cannot open " + path);
  return is;
}

template <class F>
auto with_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::FormatError) throw;
    fail(ErrorCode::FormatError, path + ": " + e.what());
  }
}

void finish(std::ofstream& os, const std::string& path) {
  os.flush();
  if (!os) fail(ErrorCode::IoError, "failed writing " + path);
}

}  // namespace

void write_capture(std::ostream& os, const SubcarrierMatrix& m, double duration_s) {
  if (m.estimates.rows() < 1 || m.estimates.rows() > 0xFFFF)
    fail(ErrorCode::ShapeMismatch, "capture subcarrier count out of range");
  ByteWriter w(os);
  w.bytes("RPG1", 4);
  w.uint(kFormatVersion);
  w.uint(static_cast<std::uint16_t>(m.estimates.rows()));
  w.f64(m.symbol_rate);
  w.f64(duration_s);
  for (Eigen::Index s = 0; s < m.estimates.cols(); ++s)
    for (Eigen::Index k = 0; k < m.estimates.rows(); ++k) {
      w.f32(static_cast<float>(m.estimates(k, s).real()));
      w.f32(static_cast<float>(m.estimates(k, s).imag()));
    }
}

Capture read_capture(std::istream& is) {
  ByteReader r(is);
  r.magic("RPG1");
  r.version();
  const auto rows = r.uint<std::uint16_t>();
  Capture c;
  c.estimates.symbol_rate = r.f64();
  c.duration_s = r.f64();
  if (rows == 0) fail(ErrorCode::FormatError, "capture has zero subcarriers");
  if (!(c.estimates.symbol_rate > 0.0) || !std::isfinite(c.estimates.symbol_rate))
    fail(ErrorCode::FormatError, "capture symbol rate must be positive");
  const std::uint64_t payload = r.remaining();
  const std::uint64_t per_symbol = std::uint64_t{rows} * 8;
  if (payload % per_symbol != 0)
    fail(ErrorCode::FormatError, "capture payload is not a whole number of symbols");
  const auto cols = static_cast<Eigen::Index>(payload / per_symbol);
  c.estimates.estimates.resize(rows, cols);
  for (Eigen::Index s = 0; s < cols; ++s)
    for (Eigen::Index k = 0; k < rows; ++k) {
      const float re = r.f32();
      const float im = r.f32();
      if (!std::isfinite(re) || !std::isfinite(im))
        fail(ErrorCode::FormatError, "capture contains non-finite estimates");
      c.estimates.estimates(k, s) = Complex(re, im);
    }
  r.expect_end();
  return c;
}

void save_capture(const std::string& path, const SubcarrierMatrix& m, double duration_s) {
  std::ofstream os = open_out(path, true);
  write_capture(os, m, duration_s);
  finish(os, path);
}

Capture load_capture(const std::string& path) {
  std::ifstream is = open_in(path, true);
  return with_path(path, [&] { return read_capture(is); });
}

void write_raw_iq(std::ostream& os, const ComplexSeries& iq) {
  ByteWriter w(os);
  w.bytes("RIQ1", 4);
  w.uint(kFormatVersion);
  w.f64(iq.rate);
  w.uint(static_cast<std::uint64_t>(iq.size()));
  for (const Complex& v : iq.samples) {
    w.f32(static_cast<float>(v.real()));
    w.f32(static_cast<float>(v.imag()));
  }
}

ComplexSeries read_raw_iq(std::istream& is) {
  ByteReader r(is);
  r.magic("RIQ1");
  r.version();
  ComplexSeries iq;
  iq.rate = r.f64();
  const auto n = r.uint<std::uint64_t>();
  if (r.remaining() != n * 8) fail(ErrorCode::FormatError, "raw IQ payload length mismatch");
  iq.samples.resize(n);
  for (auto& v : iq.samples) {
    const float re = r.f32();
    const float im = r.f32();
    v = Complex(re, im);
  }
  return iq;
}

void save_raw_iq(const std::string& path, const ComplexSeries& iq) {
  std::ofstream os = open_out(path, true);
  write_raw_iq(os, iq);
  finish(os, path);
}

ComplexSeries load_raw_iq(const std::string& path) {
  std::ifstream is = open_in(path, true);
  return with_path(path, [&] { return read_raw_iq(is); });
}

void write_ppg(std::ostream& os, const RealSeries& x) {
  if (!(x.rate > 0.0)) fail(ErrorCode::InvalidArgument, "PPG rate must be positive");
  std::string buf = "# rate_hz=" + format_double(x.rate) + "\n";
  for (std::size_t i = 0; i < x.size(); ++i) {
    append_double(buf, static_cast<double>(i) / x.rate);
    buf.push_back(',');
    append_double(buf, x.samples[i]);
    buf.push_back('\n');
    if (buf.size() > (1 << 16)) {
      os << buf;
      buf.clear();
    }
  }
  os << buf;
  if (!os) fail(ErrorCode::IoError, "write failed");
}

RealSeries read_ppg(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  RealSeries x;
  const auto error = [&](const std::string& what) {
    fail(ErrorCode::FormatError, "line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(is, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  const std::string_view head = trim(line);
  constexpr std::string_view kHeader = "# rate_hz=";
  if (head.substr(0, kHeader.size()) != kHeader) error("expected '# rate_hz=<r>' header");
  const auto rate = parse_double(trim(head.substr(kHeader.size())));
  if (!rate || !(*rate > 0.0) || !std::isfinite(*rate)) error("bad rate in header");
  x.rate = *rate;

  double prev_t = 0.0;
  double first_t = 0.0;
  while (std::getline(is, line)) {
    ++line_no;
    std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto sep = body.find_first_of(", \t");
    if (sep == std::string_view::npos) error("expected time and value");
    const auto t = parse_double(trim(body.substr(0, sep)));
    std::string_view rest = trim(body.substr(sep + 1));
    if (!rest.empty() && rest.front() == ',') rest = trim(rest.substr(1));
    const auto v = parse_double(rest);
    if (!t || !v || !std::isfinite(*t) || !std::isfinite(*v)) error("bad number");
    if (x.samples.empty()) {
      first_t = *t;
    } else {
      if (!(*t > prev_t)) error("time stamps must strictly increase");
      const double expected = first_t + static_cast<double>(x.samples.size()) / x.rate;
      if (std::abs(*t - expected) > 1e-6) error("time stamps are not uniform at the header rate");
    }
    prev_t = *t;
    x.samples.push_back(*v);
  }
  if (x.samples.empty()) fail(ErrorCode::FormatError, "PPG file has no samples");
  return x;
}

void save_ppg(const std::string& path, const RealSeries& x) {
  std::ofstream os = open_out(path, false);
  write_ppg(os, x);
  finish(os, path);
}

RealSeries load_ppg(const std::string& path) {
  std::ifstream is = open_in(path, false);
  return with_path(path, [&] { return read_ppg(is); });
}

void write_pairs(std::ostream& os, const std::vector<SegmentPair>& pairs) {
  ByteWriter w(os);
  w.bytes("RPP1", 4);
  w.uint(kFormatVersion);
  const std::size_t len = pairs.empty() ? kSegmentLength : pairs.front().radio.samples.size();
  w.uint(static_cast<std::uint32_t>(len));
  w.uint(static_cast<std::uint64_t>(pairs.size()));
  for (const SegmentPair& p : pairs) {
    if (p.radio.samples.size() != len || p.ppg.samples.size() != len)
      fail(ErrorCode::LengthMismatch, "pair archive segments must share one length");
    w.str(p.record_id);
    w.str(p.subject_id);
    w.uint(static_cast<std::uint64_t>(p.index));
    w.uint(static_cast<std::uint32_t>(p.lag));
    for (double v : p.radio.samples) w.f64(v);
    for (double v : p.ppg.samples) w.f64(v);
  }
}

std::vector<SegmentPair> read_pairs(std::istream& is) {
  ByteReader r(is);
  r.magic("RPP1");
  r.version();
  const auto len = r.uint<std::uint32_t>();
  const auto count = r.uint<std::uint64_t>();
  if (len == 0) fail(ErrorCode::FormatError, "zero segment length");
  if (count > r.remaining() / (16ULL * len)) fail(ErrorCode::FormatError, "pair count exceeds file size");
  std::vector<SegmentPair> pairs(count);
  for (SegmentPair& p : pairs) {
    p.record_id = r.str();
    p.subject_id = r.str();
    p.index = static_cast<std::size_t>(r.uint<std::uint64_t>());
    p.lag = static_cast<std::int32_t>(r.uint<std::uint32_t>());
    p.radio.samples.resize(len);
    p.ppg.samples.resize(len);
    for (double& v : p.radio.samples) v = r.f64();
    for (double& v : p.ppg.samples) v = r.f64();
    p.radio.origin_index = p.ppg.origin_index = p.index * len;
    p.radio.duration_s = p.ppg.duration_s = kSegmentSeconds;
  }
  r.expect_end();
  return pairs;
}

void save_pairs(const std::string& path, const std::vector<SegmentPair>& pairs) {
  std::ofstream os = open_out(path, true);
  write_pairs(os, pairs);
  finish(os, path);
}

std::vector<SegmentPair> load_pairs(const std::string& path) {
  std::ifstream is = open_in(path, true);
  return with_path(path, [&] { return read_pairs(is); });
}

}  // namespace rfppg
