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

#include "rfppg/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rfppg/error.hpp"

namespace rfppg {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::SegmentTooLong: return "SegmentTooLong";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::RateMismatch: return "RateMismatch";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::InputTooShort: return "InputTooShort";
    case ErrorCode::NyquistViolation: return "NyquistViolation";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::DivergedLoss: return "DivergedLoss";
    case ErrorCode::EmptyResult: return "EmptyResult";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::ModelMismatch: return "ModelMismatch";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

double mean(std::span<const double> x) {
  if (x.empty()) fail(ErrorCode::EmptyInput, "mean of an empty series");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double population_std(std::span<const double> x) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(x.size()));
}

std::vector<double> zscore(std::span<const double> x) {
  if (x.size() < 2) fail(ErrorCode::EmptyInput, "zscore needs at least 2 samples");
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  const double sd = std::sqrt(ss / static_cast<double>(x.size()));
  // A constant series can leave rounding residue around its mean.
  if (!(sd > 1e-14 * std::max(1.0, std::abs(m))))
    fail(ErrorCode::DegenerateVariance, "zscore of a constant series");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - m) / sd;
  return out;
}

RealSeries zscore(const RealSeries& x) {
  return RealSeries{zscore(std::span<const double>(x.samples)), x.rate};
}

std::vector<Segment> segment(const RealSeries& x, double seg_seconds) {
  if (!(x.rate > 0.0) || !(seg_seconds > 0.0))
    fail(ErrorCode::InvalidArgument, "segment: rate and duration must be positive");
  const double exact = seg_seconds * x.rate;
  const auto len = static_cast<std::size_t>(std::llround(exact));
  if (len < 2) fail(ErrorCode::InvalidArgument, "segment length rounds below 2 samples");
  if (len > x.size())
    fail(ErrorCode::SegmentTooLong, "segment of " + std::to_string(len) +
                                        " samples exceeds series of " +
                                        std::to_string(x.size()));
  const std::size_t count = x.size() / len;
  std::vector<Segment> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto first = x.samples.begin() + static_cast<std::ptrdiff_t>(i * len);
    out.push_back(Segment{std::vector<double>(first, first + static_cast<std::ptrdiff_t>(len)),
                          i * len, static_cast<double>(len) / x.rate});
  }
  return out;
}

namespace {

struct Ratio {
  long long up = 1;
  long long down = 1;
};

// Best rational approximation by continued fractions, both terms <= limit.
Ratio rational_approx(double value, long long limit) {
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double x = value;
  Ratio best{std::max(1LL, std::llround(value)), 1};
  for (int iter = 0; iter < 64; ++iter) {
    const double a_f = std::floor(x);
    const auto a = static_cast<long long>(a_f);
    const long long h2 = a * h1 + h0;
    const long long k2 = a * k1 + k0;
    if (h2 > limit || k2 > limit) break;
    best = Ratio{h2, k2};
    if (std::abs(static_cast<double>(h2) / static_cast<double>(k2) - value) <=
        1e-12 * value)
      break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    const double frac = x - a_f;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  return best;
}

double sinc(double t) {
  if (t == 0.0) return 1.0;
  if (t == std::nearbyint(t)) return 0.0;
  const double pt = std::numbers::pi * t;
  return std::sin(pt) / pt;
}

std::size_t reflect_index(long long i, long long n) {
  if (n == 1) return 0;
  const long long period = 2 * (n - 1);
  long long r = i % period;
  if (r < 0) r += period;
  if (r >= n) r = period - r;
  return static_cast<std::size_t>(r);
}

}  // namespace

std::size_t resampled_length(std::size_t n, double rate, double target_rate) {
  if (n == 0) return 0;
  const Ratio r = rational_approx(target_rate / rate, 4096);
  return static_cast<std::size_t>(
             (static_cast<long long>(n) - 1) * r.up / r.down) + 1;
}

RealSeries resample(const RealSeries& x, double target_rate,
                    const ResamplerOptions& options) {
  if (x.samples.empty()) fail(ErrorCode::EmptyInput, "resample of an empty series");
  if (!(target_rate > 0.0) || !(x.rate > 0.0))
    fail(ErrorCode::InvalidArgument, "resample: rates must be positive");
  if (options.taps_per_phase < 2)
    fail(ErrorCode::InvalidArgument, "resample: need at least 2 taps per phase");

  const Ratio ratio = rational_approx(target_rate / x.rate, 4096);
  const long long up = ratio.up;
  const long long down = ratio.down;
  const double rho = std::min(1.0, static_cast<double>(up) / static_cast<double>(down));
  const double half = 0.5 * options.taps_per_phase / rho;  // input samples
  const double i0_beta = std::cyl_bessel_i(0.0, options.kaiser_beta);

  struct Phase {
    long long first = 0;  // offset of tap 0 relative to the base sample
    std::vector<double> taps;
  };
  std::vector<Phase> bank(static_cast<std::size_t>(up));
  for (long long j = 0; j < up; ++j) {
    const double frac = static_cast<double>(j) / static_cast<double>(up);
    const auto kmin = static_cast<long long>(std::ceil(frac - half));
    const auto kmax = static_cast<long long>(std::floor(frac + half));
    Phase& ph = bank[static_cast<std::size_t>(j)];
    ph.first = kmin;
    double sum = 0.0;
    for (long long k = kmin; k <= kmax; ++k) {
      const double tau = static_cast<double>(k) - frac;
      const double u = tau / half;
      const double w = std::abs(u) >= 1.0
                           ? 0.0
                           : std::cyl_bessel_i(0.0, options.kaiser_beta *
                                                        std::sqrt(1.0 - u * u)) /
                                 i0_beta;
      const double h = rho * sinc(rho * tau) * w;
      ph.taps.push_back(h);
      sum += h;
    }
    for (double& h : ph.taps) h /= sum;
  }

  const auto n = static_cast<long long>(x.samples.size());
  const std::size_t out_len = static_cast<std::size_t>((n - 1) * up / down) + 1;
  RealSeries out{std::vector<double>(out_len), target_rate};
  for (std::size_t m = 0; m < out_len; ++m) {
    const long long pos = static_cast<long long>(m) * down;
    const long long base = pos / up;
    const Phase& ph = bank[static_cast<std::size_t>(pos % up)];
    double acc = 0.0;
    const long long start = base + ph.first;
    if (start >= 0 && start + static_cast<long long>(ph.taps.size()) <= n) {
      const double* src = x.samples.data() + start;
      for (std::size_t t = 0; t < ph.taps.size(); ++t) acc += ph.taps[t] * src[t];
    } else {
      for (std::size_t t = 0; t < ph.taps.size(); ++t)
        acc += ph.taps[t] *
               x.samples[reflect_index(start + static_cast<long long>(t), n)];
    }
    out.samples[m] = acc;
  }
  return out;
}

double mae(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    fail(ErrorCode::LengthMismatch, "mae: lengths " + std::to_string(a.size()) +
                                        " and " + std::to_string(b.size()));
  if (a.empty()) fail(ErrorCode::EmptyInput, "mae of empty segments");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

double mae(const Segment& a, const Segment& b) { return mae(a.samples, b.samples); }

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) fail(ErrorCode::LengthMismatch, "pearson: length mismatch");
  if (a.size() < 2) fail(ErrorCode::EmptyInput, "pearson needs at least 2 samples");
  const double ma = mean(a);
  const double mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

bool all_finite(std::span<const double> x) noexcept {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace rfppg
