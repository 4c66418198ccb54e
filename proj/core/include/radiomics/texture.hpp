// texture.hpp : GLCM / NGTDM / GLZSM construction and derived features
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

#include <array>
#include <map>
#include <string>
#include <vector>

#include "radiomics/quantization.hpp"

namespace radiomics {

// Grey-level co-occurrence matrix merged over the 13 unique 3D direction
// offsets at Chebyshev distance 1, symmetric, normalized to sum 1.
struct Glcm {
  int levels = 0;               // G
  std::vector<double> p;        // G x G, row-major, 0-based storage
  long long total_pairs = 0;    // ordered pair count the matrix was divided by

  double at(int i, int j) const {  // 1-based grey levels
    return p[std::size_t(i - 1) * std::size_t(levels) + std::size_t(j - 1)];
  }
};

// Neighborhood grey-tone difference matrix over the 26-neighborhood.
struct Ngtdm {
  int levels = 0;
  std::vector<double> s;        // per-level summed |level - neighborhood mean|
  std::vector<long long> n;     // per-level counts of valid voxels
  std::vector<double> p;        // n / total valid voxels
  long long valid_voxels = 0;
};

// Grey-level zone size matrix; zones are maximal 26-connected components of
// equal level. Stored sparsely as per-level {size -> count} maps.
struct Glzsm {
  int levels = 0;
  std::vector<std::map<long long, long long>> zones;  // zones[level-1]
  long long total_zones = 0;   // N_z
  long long roi_voxels = 0;    // N_vox
};

Glcm build_glcm(const QuantizedRoi& roi);
Ngtdm build_ngtdm(const QuantizedRoi& roi);
Glzsm build_glzsm(const QuantizedRoi& roi);

struct GlcmFeatures {
  std::map<std::string, double> values;
  bool degenerate_correlation = false;  // zero-variance marginal
};

// asm, contrast, correlation, dissimilarity, entropy, idm, id, sosv, save,
// svar, sent, dvar, dent, ic, cp (logs base 2, 0*log 0 = 0)
GlcmFeatures glcm_features(const Glcm& g);

// coarseness, contrast, busyness, complexity, strength; denominators are
// guarded by eps = 1e-6 and coarseness is capped at 1e6
std::map<std::string, double> ngtdm_features(const Ngtdm& t);

// szse, lzse, zsnu, glnu, zsp, lglze, hglze, szlge, szhge, lzlge, lzhge
std::map<std::string, double> glzsm_features(const Glzsm& z);

// Emission order for feature tables.
extern const std::array<const char*, 15> kGlcmFeatureNames;
extern const std::array<const char*, 5> kNgtdmFeatureNames;
extern const std::array<const char*, 11> kGlzsmFeatureNames;

}  // namespace radiomics
