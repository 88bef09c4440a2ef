/**
 * Copyright 2026 The R2Rec Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "r2rec/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

namespace r2rec::svg {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace

std::string line_chart(const std::string& title,
                       const std::vector<Series>& series, int width,
                       int height) {
  const double margin = 48.0;
  const double plot_w = width - 2 * margin;
  const double plot_h = height - 2 * margin;

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::size_t max_n = 0;
  for (const auto& s : series) {
    for (double v : s.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    max_n = std::max(max_n, s.values.size());
  }
  if (max_n == 0) {
    lo = 0.0;
    hi = 1.0;
  }
  if (hi <= lo) {
    hi = lo + 1.0;
  }

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) +
         "\" viewBox=\"0 0 " + std::to_string(width) + " " +
         std::to_string(height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(width / 2.0) +
         "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">" +
         escape(title) + "</text>\n";
  // Axes.
  out += "<line x1=\"" + num(margin) + "\" y1=\"" + num(margin) + "\" x2=\"" +
         num(margin) + "\" y2=\"" + num(height - margin) +
         "\" stroke=\"#444\"/>\n";
  out += "<line x1=\"" + num(margin) + "\" y1=\"" + num(height - margin) +
         "\" x2=\"" + num(width - margin) + "\" y2=\"" +
         num(height - margin) + "\" stroke=\"#444\"/>\n";
  out += "<text x=\"" + num(margin - 6) + "\" y=\"" + num(margin + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" "
         "font-size=\"11\">" +
         num(hi) + "</text>\n";
  out += "<text x=\"" + num(margin - 6) + "\" y=\"" + num(height - margin) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" "
         "font-size=\"11\">" +
         num(lo) + "</text>\n";

  double legend_y = margin;
  for (const auto& s : series) {
    if (!s.values.empty()) {
      std::string points;
      const double denom =
          s.values.size() > 1 ? static_cast<double>(s.values.size() - 1) : 1.0;
      for (std::size_t i = 0; i < s.values.size(); ++i) {
        const double x = margin + plot_w * static_cast<double>(i) / denom;
        const double y =
            height - margin - plot_h * (s.values[i] - lo) / (hi - lo);
        points += num(x) + "," + num(y) + " ";
      }
      out += "<polyline fill=\"none\" stroke=\"" + s.color +
             "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
    }
    out += "<text x=\"" + num(width - margin) + "\" y=\"" + num(legend_y) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"12\" fill=\"" +
           s.color + "\">" + escape(s.label) + "</text>\n";
    legend_y += 16.0;
  }
  out += "</svg>\n";
  return out;
}

}  // namespace r2rec::svg
