// phantom.hpp : synthetic test-retest volume/mask pairs
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

#include <cstdint>
#include <string>

#include "radiomics/grid.hpp"

namespace radiomics {

enum class PhantomShape { ball, ellipsoid, blob };

std::string to_string(PhantomShape s);
PhantomShape phantom_shape_from(const std::string& text);

struct PhantomSpec {
  Dims dims{32, 32, 32};
  Spacing spacing{4.0, 4.0, 4.0};
  PhantomShape shape = PhantomShape::ball;
  double radius_vox = 10.0;
  double base_intensity = 100.0;
  double texture_scale = 2.0;  // correlation length of the texture, voxels
  double noise_sd = 0.0;       // per-acquisition additive noise, intensity units
  std::uint64_t seed = 0;

  void validate() const;
};

// Test/retest acquisition pair: one shared texture field plus two
// independent noise realizations; the mask is identical across the pair.
struct PhantomPair {
  Volume test;
  Volume retest;
  Mask mask;
};

PhantomPair generate_pair(const PhantomSpec& spec);

// JSON round-trip of the spec, used to persist it alongside the outputs.
std::string phantom_spec_to_json(const PhantomSpec& spec);
PhantomSpec phantom_spec_from_json(const std::string& text);

}  // namespace radiomics
