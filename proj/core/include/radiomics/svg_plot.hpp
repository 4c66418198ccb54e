// svg_plot.hpp : static Bland-Altman scatter plots
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

#include <span>
#include <string>

#include "radiomics/stats.hpp"

namespace radiomics {

// Scatter of pair means vs percent differences with mean and limit lines.
// Fixed 640x480 viewBox, no external resources, deterministic output.
// Non-finite differences (excluded pairs) are skipped.
std::string bland_altman_svg(const std::string& feature_id,
                             std::span<const double> pair_means,
                             std::span<const double> diffs_pct,
                             const BlandAltmanResult& ba,
                             const std::string& manifest_hash);

}  // namespace radiomics
