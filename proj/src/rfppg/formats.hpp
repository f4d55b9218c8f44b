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

// On-disk formats. Binary containers are little-endian regardless of host.
//
// Capture (.rpg):   "RPG1" u8 version=1, u16 subcarriers, f64 symbol rate Hz,
//                   f64 duration s, then f32 (re, im) pairs: all subcarriers of
//                   symbol 0, then symbol 1, ...
// Raw IQ (.riq):    "RIQ1" u8 version=1, f64 sample rate Hz, u64 count, f32 (re, im)...
// Pair archive:     "RPP1" u8 version=1, u32 segment length, u64 pair count, then
//                   per pair: u16 + bytes record id, u16 + bytes subject id,
//                   u64 segment index, i32 lag, f64 x L radio, f64 x L ppg.
// PPG text (.txt):  "# rate_hz=<r>" then one "time_s,value" line per sample.

#ifndef RFPPG_FORMATS_HPP
#define RFPPG_FORMATS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "rfppg/preprocess.hpp"
#include "rfppg/signal.hpp"

namespace rfppg {

struct Capture {
  SubcarrierMatrix estimates;
  double duration_s = 0.0;
};

void write_capture(std::ostream& os, const SubcarrierMatrix& m, double duration_s);
Capture read_capture(std::istream& is);
void save_capture(const std::string& path, const SubcarrierMatrix& m, double duration_s);
Capture load_capture(const std::string& path);

void write_raw_iq(std::ostream& os, const ComplexSeries& iq);
ComplexSeries read_raw_iq(std::istream& is);
void save_raw_iq(const std::string& path, const ComplexSeries& iq);
ComplexSeries load_raw_iq(const std::string& path);

void write_ppg(std::ostream& os, const RealSeries& x);
// Accepts comma or whitespace separators; checks strictly increasing, uniform
// time stamps against the header rate.
RealSeries read_ppg(std::istream& is);
void save_ppg(const std::string& path, const RealSeries& x);
RealSeries load_ppg(const std::string& path);

void write_pairs(std::ostream& os, const std::vector<SegmentPair>& pairs);
std::vector<SegmentPair> read_pairs(std::istream& is);
void save_pairs(const std::string& path, const std::vector<SegmentPair>& pairs);
std::vector<SegmentPair> load_pairs(const std::string& path);

}  // namespace rfppg

#endif  // RFPPG_FORMATS_HPP
