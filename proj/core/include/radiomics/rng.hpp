// rng.hpp : portable deterministic random numbers for phantom generation
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
#include <cstdint>

namespace radiomics {

// xoshiro256++ seeded through splitmix64. Streams are decorrelated by
// perturbing the splitmix64 seed with the stream id times the golden-ratio
// constant, so (seed, stream) fully determines the sequence on any
// platform.
class Rng {
public:
  static Rng from(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();

  // Uniform in (0,1).
  double next_unit();

  // Standard normal via Box-Muller; draws two uniforms per pair.
  double next_gaussian();

private:
  std::array<std::uint64_t, 4> s_{};
  double cached_gaussian_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace radiomics
