// features.hpp : named feature vectors and whole-roi extraction
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
#include <string_view>
#include <utility>
#include <vector>

#include "radiomics/grid.hpp"
#include "radiomics/quantization.hpp"

namespace radiomics {

// Ordered feature-id -> value map; insertion order defines table columns.
class FeatureVector {
public:
  void push(std::string name, double value);
  const double* find(std::string_view name) const;
  double at(std::string_view name) const;  // throws if absent

  const std::vector<std::pair<std::string, double>>& items() const { return items_; }
  std::vector<std::string> names() const;
  std::size_t size() const { return items_.size(); }

private:
  std::vector<std::pair<std::string, double>> items_;
};

// Shape + first-order features plus one texture family per quantization
// spec, with ids like "glcm.entropy@bins64".
FeatureVector extract_features(const Volume& volume, const Mask& mask,
                               std::span<const QuantizationSpec> quant_specs,
                               int hist_bins = 64);

// Column order for a given quantization list, without computing anything.
std::vector<std::string> feature_names(std::span<const QuantizationSpec> quant_specs);

}  // namespace radiomics
