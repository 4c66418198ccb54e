// first_order.cpp : moments, histogram energy/entropy, cumulative histogram AUC
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

#include "radiomics/first_order.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace radiomics {

ChAucResult cumulative_histogram_auc(const RoiSample& roi) {
  if (roi.empty()) throw_computation("first_order: empty roi");
  const double lo = roi.min_intensity();
  const double hi = roi.max_intensity();
  if (hi == lo) return ChAucResult{1.0, true};

  // F(u) is piecewise constant with a unit-mass drop of 1/N at each
  // normalized intensity, so the exact integral is the mean of the
  // normalized intensities.
  double sum = 0.0;
  for (double v : roi.intensities) sum += (v - lo) / (hi - lo);
  return ChAucResult{sum / double(roi.size()), false};
}

FirstOrderResult first_order_features(const RoiSample& roi, int hist_bins) {
  if (roi.empty()) throw_computation("first_order: empty roi");
  if (hist_bins < 1) throw_computation("first_order: hist_bins must be >= 1");

  const std::size_t n = roi.size();
  FirstOrderResult r;
  r.min = roi.min_intensity();
  r.max = roi.max_intensity();

  double sum = 0.0;
  for (double v : roi.intensities) sum += v;
  r.mean = sum / double(n);

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : roi.intensities) {
    const double d = v - r.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= double(n);
  m3 /= double(n);
  m4 /= double(n);

  r.sd = n > 1 ? std::sqrt(m2 * double(n) / double(n - 1)) : 0.0;

  {
    std::vector<double> sorted(roi.intensities);
    std::sort(sorted.begin(), sorted.end());
    r.median = n % 2 == 1 ? sorted[n / 2]
                          : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  }

  if (m2 > 0.0) {
    r.skewness = m3 / std::pow(m2, 1.5);
    r.kurtosis = m4 / (m2 * m2);
  } else {
    r.skewness = 0.0;
    r.kurtosis = 0.0;
    r.degenerate = true;
  }

  // Equal-width histogram over [min, max]; a constant roi collapses into a
  // single cell.
  std::vector<double> hist(std::size_t(hist_bins), 0.0);
  if (r.max == r.min) {
    hist[0] = double(n);
  } else {
    const double scale = double(hist_bins) / (r.max - r.min);
    for (double v : roi.intensities) {
      int k = int(std::floor((v - r.min) * scale));
      hist[std::size_t(std::clamp(k, 0, hist_bins - 1))] += 1.0;
    }
  }
  r.energy = 0.0;
  r.entropy_hist = 0.0;
  for (double c : hist) {
    if (c == 0.0) continue;
    const double p = c / double(n);
    r.energy += p * p;
    r.entropy_hist -= p * std::log2(p);
  }

  auto auc = cumulative_histogram_auc(roi);
  r.ch_auc = auc.value;
  r.degenerate = r.degenerate || auc.degenerate;
  return r;
}

}  // namespace radiomics
