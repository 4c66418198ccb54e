// grid.hpp : voxel-grid primitives: dimensions, spacing, volumes, masks, roi samples
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

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "radiomics/errors.hpp"

namespace radiomics {

enum class IntensityUnit { suv, hu, arbitrary };

std::string to_string(IntensityUnit unit);
IntensityUnit intensity_unit_from(std::string_view text);

struct Dims {
  int nx = 0;
  int ny = 0;
  int nz = 0;

  std::int64_t count() const {
    return std::int64_t(nx) * std::int64_t(ny) * std::int64_t(nz);
  }
  bool contains(int x, int y, int z) const {
    return x >= 0 && x < nx && y >= 0 && y < ny && z >= 0 && z < nz;
  }
  bool operator==(const Dims&) const = default;
};

struct Spacing {
  double sx = 1.0;
  double sy = 1.0;
  double sz = 1.0;

  double voxel_volume_mm3() const { return sx * sy * sz; }
  bool operator==(const Spacing&) const = default;
};

struct Coord {
  int x = 0;
  int y = 0;
  int z = 0;

  auto operator<=>(const Coord&) const = default;
};

// 3D scalar grid, x-fastest voxel order, intensities held as doubles.
struct Volume {
  Dims dims;
  Spacing spacing;
  IntensityUnit unit = IntensityUnit::arbitrary;
  std::vector<double> voxels;

  std::int64_t index(int x, int y, int z) const {
    return std::int64_t(x) + dims.nx * (std::int64_t(y) + std::int64_t(dims.ny) * z);
  }
  double at(int x, int y, int z) const { return voxels[index(x, y, z)]; }
  double& at(int x, int y, int z) { return voxels[index(x, y, z)]; }

  // Throws on violated invariants (voxel count, spacing, NaN intensities).
  void validate() const;
};

struct Mask {
  Dims dims;
  std::vector<std::uint8_t> voxels;  // nonzero = in mask
  std::int64_t voxel_count = 0;

  std::int64_t index(int x, int y, int z) const {
    return std::int64_t(x) + dims.nx * (std::int64_t(y) + std::int64_t(dims.ny) * z);
  }
  bool at(int x, int y, int z) const { return voxels[index(x, y, z)] != 0; }
  void set(int x, int y, int z, bool on);

  // Recomputes voxel_count from the payload.
  void recount();
  void validate() const;
};

// The masked voxel set every feature is computed on.
struct RoiSample {
  std::vector<Coord> coords;        // unique, x-fastest scan order
  std::vector<double> intensities;  // parallel to coords
  Spacing spacing;
  IntensityUnit unit = IntensityUnit::arbitrary;

  std::size_t size() const { return coords.size(); }
  bool empty() const { return coords.empty(); }
  double min_intensity() const;
  double max_intensity() const;
};

}  // namespace radiomics
