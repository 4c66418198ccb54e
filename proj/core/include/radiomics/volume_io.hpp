// volume_io.hpp : NRRD and raw+JSON volume readers/writers, roi extraction
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

#include <filesystem>

#include "radiomics/grid.hpp"

namespace radiomics {

// Supported containers:
//   nrrd     - minimal NRRD subset, raw little-endian encoding, attached (.nrrd)
//              or detached (.nhdr + data file)
//   raw_json - raw little-endian voxel payload (.raw) + JSON sidecar (.json)
//              { "dims": [nx,ny,nz], "spacing_mm": [sx,sy,sz],
//                "dtype": "f32|f64|i16|u8", "unit": "SUV|HU|arbitrary" }
enum class VolumeFormat { nrrd, raw_json };

enum class RawDtype { u8, i16, f32, f64 };

// Chooses the format from the file extension (.nrrd/.nhdr vs .json/.raw).
VolumeFormat detect_volume_format(const std::filesystem::path& path);

Volume load_volume(const std::filesystem::path& path, VolumeFormat format);
Volume load_volume(const std::filesystem::path& path);

// For raw_json the path names the sidecar; the payload lands next to it
// with a .raw extension. Integer dtypes are rounded and clamped on save.
// A non-empty manifest_hash is embedded as an NRRD comment / sidecar field
// so data files reference the run that produced them.
void save_volume(const Volume& volume, const std::filesystem::path& path,
                 VolumeFormat format, RawDtype dtype = RawDtype::f64,
                 std::string_view manifest_hash = {});

// Masks use the same containers; any nonzero voxel counts as inside.
Mask load_mask(const std::filesystem::path& path);
void save_mask(const Mask& mask, const Spacing& spacing,
               const std::filesystem::path& path, VolumeFormat format,
               std::string_view manifest_hash = {});

// Pulls the masked voxels out of a volume in x-fastest scan order.
RoiSample extract_roi(const Volume& volume, const Mask& mask);

}  // namespace radiomics
