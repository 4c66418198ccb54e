// stats.hpp : test-retest repeatability statistics
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
#include <vector>

#include "radiomics/errors.hpp"

namespace radiomics {

// One feature measured twice per lesion.
struct PairedSeries {
  std::string feature_id;
  std::vector<double> test;
  std::vector<double> retest;
};

struct PercentDiffs {
  std::vector<double> values;  // 100 * (retest - test) / pair mean
  int excluded_pairs = 0;      // pairs with zero mean, dropped with a warning
};

// d_i = 100 * (retest_i - test_i) / (0.5 * (test_i + retest_i))
PercentDiffs percent_differences(const PairedSeries& s);

// Shapiro-Wilk p-value (AS R94 approximation), 3 <= n <= 5000. A constant
// sample returns 0 by convention.
double shapiro_wilk_p(std::span<const double> sample);

struct BlandAltmanResult {
  double mean_pct = 0.0;
  double sd_pct = 0.0;
  double lower_pct = 0.0;   // repeatability limits
  double upper_pct = 0.0;
  int n = 0;                // pairs used
  int excluded_pairs = 0;
  bool normal = false;          // Shapiro-Wilk p >= 0.05 on the percent diffs
  bool log_transformed = false; // limits back-transformed from log ratios
};

// Mean/SD/limits of the percent differences when they pass normality;
// otherwise limits are back-transformed from ln(retest/test), which
// requires strictly positive measurements.
BlandAltmanResult bland_altman(const PairedSeries& s);

enum class Reliability { very_reliable, reliable, moderately_reliable, poorly_reliable };

std::string to_string(Reliability r);
Reliability reliability_from(const std::string& text);

// Cut points derived from the repeatability SD of the volume of interest.
struct ReliabilityThresholds {
  double voi_rep_sd = 0.0;
  double cut_very = 0.0;      // 0.5 * voi_rep_sd
  double cut_reliable = 0.0;  // 1.5 * voi_rep_sd
  double cut_moderate = 0.0;  // 2.0 * voi_rep_sd

  static ReliabilityThresholds from_voi_sd(double voi_rep_sd);
};

Reliability reliability_category(double feature_sd_pct,
                                 const ReliabilityThresholds& thresholds);

struct CorrelationResult {
  double rs = 0.0;
  double p_value = 1.0;
  int n = 0;
  bool degenerate = false;  // a constant series has no rank correlation
};

// Spearman rank correlation with average ranks for ties; p-value from the
// t approximation with n-2 degrees of freedom.
CorrelationResult spearman(std::span<const double> x, std::span<const double> y);

// ICC(2,1): two-way random effects, absolute agreement, single measurement.
// Zero total variance returns 1 by convention.
double icc_agreement(const PairedSeries& s);

// Shared numeric helpers (exposed for tests).
double normal_cdf(double z);
double normal_quantile(double p);
double student_t_two_sided_p(double t, double dof);

}  // namespace radiomics
