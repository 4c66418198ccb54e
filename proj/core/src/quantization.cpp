// quantization.cpp : fixed-bin-count and fixed-bin-width grey-level resampling
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "radiomics/quantization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace radiomics {

namespace {

constexpr long long kMaxLevels = 1'000'000;

std::string format_width(double w) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", w);
  return buf;
}

}  // namespace

QuantizationSpec QuantizationSpec::fixed_bins(int b) {
  QuantizationSpec s;
  s.mode = Mode::fixed_bins;
  s.bins = b;
  return s;
}

QuantizationSpec QuantizationSpec::fixed_width(double w) {
  QuantizationSpec s;
  s.mode = Mode::fixed_width;
  s.width = w;
  return s;
}

QuantizationSpec QuantizationSpec::parse(const std::string& text, int default_bins,
                                         double default_width) {
  std::string name = text;
  std::string value;
  if (auto colon = text.find(':'); colon != std::string::npos) {
    name = text.substr(0, colon);
    value = text.substr(colon + 1);
  }
  try {
    if (name == "bins") {
      int b = value.empty() ? default_bins : std::stoi(value);
      if (b < 2) throw_input("quantization bins must be >= 2: '" + text + "'");
      return fixed_bins(b);
    }
    if (name == "width") {
      double w = value.empty() ? default_width : std::stod(value);
      if (!(w > 0.0)) throw_input("quantization width must be > 0: '" + text + "'");
      return fixed_width(w);
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw_input("malformed quantization spec '" + text + "'");
  }
  throw_input("unknown quantization mode '" + name + "' (want bins:<B> or width:<W>)");
}

std::string QuantizationSpec::tag() const {
  return mode == Mode::fixed_bins ? "bins" + std::to_string(bins)
                                  : "w" + format_width(width);
}

QuantizedRoi quantize_fixed_bins(const RoiSample& roi, int bins) {
  if (roi.empty()) throw_computation("quantize: empty roi");
  if (bins < 2) throw_computation("quantize: bins must be >= 2");

  const double lo = roi.min_intensity();
  const double hi = roi.max_intensity();

  QuantizedRoi q;
  q.coords = roi.coords;
  q.spacing = roi.spacing;
  q.spec = QuantizationSpec::fixed_bins(bins);
  q.level_count = bins;
  q.levels.resize(roi.size());

  if (hi == lo) {
    std::fill(q.levels.begin(), q.levels.end(), 1);
    return q;
  }
  const double scale = double(bins) / (hi - lo);
  for (std::size_t i = 0; i < roi.size(); ++i) {
    int level = int(std::floor((roi.intensities[i] - lo) * scale)) + 1;
    q.levels[i] = std::clamp(level, 1, bins);
  }
  return q;
}

QuantizedRoi quantize_fixed_width(const RoiSample& roi, double width) {
  if (roi.empty()) throw_computation("quantize: empty roi");
  if (!(width > 0.0)) throw_computation("quantize: width must be > 0");

  std::vector<long long> cells(roi.size());
  for (std::size_t i = 0; i < roi.size(); ++i)
    cells[i] = (long long)std::ceil(roi.intensities[i] / width);
  const long long base = *std::min_element(cells.begin(), cells.end());
  const long long top = *std::max_element(cells.begin(), cells.end());
  if (top - base + 1 > kMaxLevels)
    throw_computation("quantize: width " + std::to_string(width) + " produces " +
                      std::to_string(top - base + 1) + " levels");

  QuantizedRoi q;
  q.coords = roi.coords;
  q.spacing = roi.spacing;
  q.spec = QuantizationSpec::fixed_width(width);
  q.level_count = int(top - base + 1);
  q.levels.resize(roi.size());
  for (std::size_t i = 0; i < roi.size(); ++i)
    q.levels[i] = int(cells[i] - base + 1);
  return q;
}

QuantizedRoi quantize(const RoiSample& roi, const QuantizationSpec& spec) {
  return spec.mode == QuantizationSpec::Mode::fixed_bins
             ? quantize_fixed_bins(roi, spec.bins)
             : quantize_fixed_width(roi, spec.width);
}

}  // namespace radiomics
