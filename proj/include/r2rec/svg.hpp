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
#ifndef R2REC_SVG_HPP_
#define R2REC_SVG_HPP_

#include <string>
#include <vector>

namespace r2rec::svg {

struct Series {
  std::string label;
  std::vector<double> values;  // x = index
  std::string color = "#2b6cb0";
};

/// Minimal line chart: axes, y-range labels, one polyline per series with a
/// small legend. Returns a complete standalone SVG document.
std::string line_chart(const std::string& title,
                       const std::vector<Series>& series, int width = 720,
                       int height = 360);

}  // namespace r2rec::svg

#endif  // R2REC_SVG_HPP_
