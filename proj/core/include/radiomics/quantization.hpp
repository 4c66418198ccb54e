// quantization.hpp : intensity resampling to integer grey levels
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

#pragma once

#include <string>
#include <vector>

#include "radiomics/grid.hpp"

namespace radiomics {

// Two resampling schemes:
//   fixed_bins  - a set number of bins B spanning [min, max] of the roi
//   fixed_width - bins of fixed intensity width W, anchored at zero
struct QuantizationSpec {
  enum class Mode { fixed_bins, fixed_width };

  Mode mode = Mode::fixed_bins;
  int bins = 64;       // fixed_bins only, B >= 2
  double width = 0.5;  // fixed_width only, W > 0

  static QuantizationSpec fixed_bins(int b);
  static QuantizationSpec fixed_width(double w);

  // Parses CLI syntax: "bins:64", "width:0.5", or bare "bins"/"width"
  // falling back to the given defaults.
  static QuantizationSpec parse(const std::string& text, int default_bins = 64,
                                double default_width = 0.5);

  // Short token used to suffix feature names, e.g. "bins64" or "w0.5".
  std::string tag() const;

  bool operator==(const QuantizationSpec&) const = default;
};

// RoiSample resampled to integer grey levels 1..level_count.
struct QuantizedRoi {
  std::vector<Coord> coords;  // same order as the source roi
  Spacing spacing;
  std::vector<int> levels;
  int level_count = 0;  // G: B for fixed_bins, max level for fixed_width
  QuantizationSpec spec;

  std::size_t size() const { return coords.size(); }
};

// level(v) = min(B, floor(B * (I - Imin) / (Imax - Imin)) + 1); a constant
// roi maps to level 1 everywhere.
QuantizedRoi quantize_fixed_bins(const RoiSample& roi, int bins);

// level(v) = ceil(I / W) - min over roi of ceil(I / W) + 1; negative
// intensities need no special casing.
QuantizedRoi quantize_fixed_width(const RoiSample& roi, double width);

QuantizedRoi quantize(const RoiSample& roi, const QuantizationSpec& spec);

}  // namespace radiomics
