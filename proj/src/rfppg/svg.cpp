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

#include "rfppg/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace rfppg {
namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

std::string svg_line_chart(const PlotSpec& spec, const std::vector<PlotLine>& lines) {
  const double left = 64, right = 16, top = 32, bottom = 44;
  const double pw = spec.width - left - right;
  const double ph = spec.height - top - bottom;
  const auto ty = [&](double v) { return spec.log_y ? std::log10(std::max(v, 1e-300)) : v; };

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const PlotLine& l : lines)
    for (std::size_t i = 0; i < std::min(l.x.size(), l.y.size()); ++i) {
      if (!std::isfinite(l.x[i]) || !std::isfinite(l.y[i])) continue;
      x0 = std::min(x0, l.x[i]);
      x1 = std::max(x1, l.x[i]);
      y0 = std::min(y0, ty(l.y[i]));
      y1 = std::max(y1, ty(l.y[i]));
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  const auto sx = [&](double v) { return left + (v - x0) / (x1 - x0) * pw; };
  const auto sy = [&](double v) { return top + (1.0 - (ty(v) - y0) / (y1 - y0)) * ph; };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) +
       "\" height=\"" + std::to_string(spec.height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(spec.width / 2.0) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" +
       escape(spec.title) + "</text>\n";
  s += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(pw) + "\" height=\"" +
       num(ph) + "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0;
    const double fy = y0 + (y1 - y0) * i / 4.0;
    const double px = sx(fx);
    const double py = top + (1.0 - i / 4.0) * ph;
    s += "<text x=\"" + num(px) + "\" y=\"" + num(top + ph + 16) + "\" text-anchor=\"middle\">" +
         tick(fx) + "</text>\n";
    s += "<text x=\"" + num(left - 6) + "\" y=\"" + num(py + 4) + "\" text-anchor=\"end\">" +
         tick(spec.log_y ? std::pow(10.0, fy) : fy) + "</text>\n";
    s += "<line x1=\"" + num(left) + "\" x2=\"" + num(left + pw) + "\" y1=\"" + num(py) + "\" y2=\"" +
         num(py) + "\" stroke=\"#ddd\"/>\n";
  }
  s += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(spec.height - 8.0) +
       "\" text-anchor=\"middle\">" + escape(spec.x_label) + "</text>\n";
  s += "<text transform=\"translate(14," + num(top + ph / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
       escape(spec.y_label) + "</text>\n";

  double legend_y = top + 14;
  for (const PlotLine& l : lines) {
    s += "<polyline fill=\"none\" stroke=\"" + l.color + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < std::min(l.x.size(), l.y.size()); ++i) {
      if (!std::isfinite(l.x[i]) || !std::isfinite(l.y[i])) continue;
      s += num(sx(l.x[i])) + "," + num(sy(l.y[i])) + " ";
    }
    s += "\"/>\n";
    s += "<line x1=\"" + num(left + pw - 130) + "\" x2=\"" + num(left + pw - 110) + "\" y1=\"" +
         num(legend_y - 4) + "\" y2=\"" + num(legend_y - 4) + "\" stroke=\"" + l.color +
         "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + num(left + pw - 104) + "\" y=\"" + num(legend_y) + "\">" + escape(l.label) +
         "</text>\n";
    legend_y += 16;
  }
  s += "</svg>\n";
  return s;
}

}  // namespace rfppg
