// grid.cpp : invariants and small helpers for grid primitives
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

#include "radiomics/grid.hpp"

#include <algorithm>
#include <cmath>

namespace radiomics {

std::string to_string(IntensityUnit unit) {
  switch (unit) {
    case IntensityUnit::suv: return "SUV";
    case IntensityUnit::hu: return "HU";
    case IntensityUnit::arbitrary: return "arbitrary";
  }
  return "arbitrary";
}

IntensityUnit intensity_unit_from(std::string_view text) {
  if (text == "SUV" || text == "suv") return IntensityUnit::suv;
  if (text == "HU" || text == "hu") return IntensityUnit::hu;
  if (text == "arbitrary") return IntensityUnit::arbitrary;
  throw_input("unknown intensity unit '" + std::string(text) + "'");
}

void Volume::validate() const {
  if (dims.nx <= 0 || dims.ny <= 0 || dims.nz <= 0)
    throw_input("volume dims must be positive");
  if (std::int64_t(voxels.size()) != dims.count())
    throw_input("voxel count does not match dims");
  for (double s : {spacing.sx, spacing.sy, spacing.sz})
    if (!(s > 0.0) || !std::isfinite(s))
      throw_input("spacing components must be finite and positive");
  for (std::size_t i = 0; i < voxels.size(); ++i)
    if (std::isnan(voxels[i]))
      throw_input("NaN intensity at voxel index " + std::to_string(i));
}

void Mask::set(int x, int y, int z, bool on) {
  auto& cell = voxels[index(x, y, z)];
  if (on && !cell) ++voxel_count;
  if (!on && cell) --voxel_count;
  cell = on ? 1 : 0;
}

void Mask::recount() {
  voxel_count = std::count_if(voxels.begin(), voxels.end(),
                              [](std::uint8_t v) { return v != 0; });
}

void Mask::validate() const {
  if (dims.nx <= 0 || dims.ny <= 0 || dims.nz <= 0)
    throw_input("mask dims must be positive");
  if (std::int64_t(voxels.size()) != dims.count())
    throw_input("mask voxel count does not match dims");
  if (voxel_count < 1) throw_input("mask is empty");
}

double RoiSample::min_intensity() const {
  if (empty()) throw_computation("roi sample is empty");
  return *std::min_element(intensities.begin(), intensities.end());
}

double RoiSample::max_intensity() const {
  if (empty()) throw_computation("roi sample is empty");
  return *std::max_element(intensities.begin(), intensities.end());
}

}  // namespace radiomics
