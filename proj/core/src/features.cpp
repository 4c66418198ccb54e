// features.cpp : feature vector assembly over one volume/mask pair
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

#include "radiomics/features.hpp"

#include "radiomics/first_order.hpp"
#include "radiomics/shape.hpp"
#include "radiomics/texture.hpp"
#include "radiomics/volume_io.hpp"

namespace radiomics {

namespace {

constexpr const char* kShapeNames[] = {"shape.volume_ml", "shape.surface_mm2",
                                       "shape.sphericity", "shape.irregularity",
                                       "shape.major_axis_mm"};

}  // namespace

void FeatureVector::push(std::string name, double value) {
  items_.emplace_back(std::move(name), value);
}

const double* FeatureVector::find(std::string_view name) const {
  for (const auto& [n, v] : items_)
    if (n == name) return &v;
  return nullptr;
}

double FeatureVector::at(std::string_view name) const {
  if (const double* v = find(name)) return *v;
  throw_computation("unknown feature '" + std::string(name) + "'");
}

std::vector<std::string> FeatureVector::names() const {
  std::vector<std::string> out;
  out.reserve(items_.size());
  for (const auto& [n, v] : items_) out.push_back(n);
  return out;
}

FeatureVector extract_features(const Volume& volume, const Mask& mask,
                               std::span<const QuantizationSpec> quant_specs,
                               int hist_bins) {
  RoiSample roi = extract_roi(volume, mask);

  FeatureVector fv;
  const ShapeResult shape = shape_features(mask, volume.spacing);
  fv.push("shape.volume_ml", shape.volume_ml);
  fv.push("shape.surface_mm2", shape.surface_mm2);
  fv.push("shape.sphericity", shape.sphericity);
  fv.push("shape.irregularity", shape.irregularity);
  fv.push("shape.major_axis_mm", shape.major_axis_mm);

  const FirstOrderResult fo = first_order_features(roi, hist_bins);
  fv.push("fo.min", fo.min);
  fv.push("fo.max", fo.max);
  fv.push("fo.mean", fo.mean);
  fv.push("fo.sd", fo.sd);
  fv.push("fo.median", fo.median);
  fv.push("fo.skewness", fo.skewness);
  fv.push("fo.kurtosis", fo.kurtosis);
  fv.push("fo.energy", fo.energy);
  fv.push("fo.entropy_hist", fo.entropy_hist);
  fv.push("fo.ch_auc", fo.ch_auc);

  for (const QuantizationSpec& spec : quant_specs) {
    const QuantizedRoi q = quantize(roi, spec);
    const std::string tag = "@" + spec.tag();

    const GlcmFeatures glcm = glcm_features(build_glcm(q));
    for (const char* name : kGlcmFeatureNames)
      fv.push(std::string("glcm.") + name + tag, glcm.values.at(name));

    const auto ngtdm = ngtdm_features(build_ngtdm(q));
    for (const char* name : kNgtdmFeatureNames)
      fv.push(std::string("ngtdm.") + name + tag, ngtdm.at(name));

    const auto glzsm = glzsm_features(build_glzsm(q));
    for (const char* name : kGlzsmFeatureNames)
      fv.push(std::string("glzsm.") + name + tag, glzsm.at(name));
  }
  return fv;
}

std::vector<std::string> feature_names(std::span<const QuantizationSpec> quant_specs) {
  std::vector<std::string> out;
  for (const char* n : kShapeNames) out.emplace_back(n);
  for (const char* n :
       {"fo.min", "fo.max", "fo.mean", "fo.sd", "fo.median", "fo.skewness",
        "fo.kurtosis", "fo.energy", "fo.entropy_hist", "fo.ch_auc"})
    out.emplace_back(n);
  for (const QuantizationSpec& spec : quant_specs) {
    const std::string tag = "@" + spec.tag();
    for (const char* n : kGlcmFeatureNames) out.push_back(std::string("glcm.") + n + tag);
    for (const char* n : kNgtdmFeatureNames)
      out.push_back(std::string("ngtdm.") + n + tag);
    for (const char* n : kGlzsmFeatureNames)
      out.push_back(std::string("glzsm.") + n + tag);
  }
  return out;
}

}  // namespace radiomics
