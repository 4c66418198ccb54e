// first_order.hpp : intensity statistics that need no quantization step
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

#include "radiomics/grid.hpp"

namespace radiomics {

struct FirstOrderResult {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double sd = 0.0;      // sample standard deviation (n-1)
  double median = 0.0;
  double skewness = 0.0;  // Fisher g1
  double kurtosis = 0.0;  // Pearson, non-excess (3 for a normal)
  double energy = 0.0;       // sum of squared histogram probabilities
  double entropy_hist = 0.0; // bits
  double ch_auc = 0.0;
  bool degenerate = false;   // zero-variance roi
};

struct ChAucResult {
  double value = 1.0;
  bool degenerate = false;  // constant roi
};

// Area under the cumulative histogram curve F(u) = fraction of voxels with
// normalized intensity >= u, integrated exactly over u in [0,1]. Equals the
// mean normalized intensity.
ChAucResult cumulative_histogram_auc(const RoiSample& roi);

// Moments over raw intensities plus energy/entropy over an equal-width
// histogram of hist_bins bins spanning [min, max].
FirstOrderResult first_order_features(const RoiSample& roi, int hist_bins = 64);

}  // namespace radiomics
