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

// Minimal SVG line charts for reports.

#ifndef RFPPG_SVG_HPP
#define RFPPG_SVG_HPP

#include <string>
#include <vector>

namespace rfppg {

struct PlotLine {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 800;
  int height = 360;
  bool log_y = false;
};

std::string svg_line_chart(const PlotSpec& spec, const std::vector<PlotLine>& lines);

}  // namespace rfppg

#endif  // RFPPG_SVG_HPP
