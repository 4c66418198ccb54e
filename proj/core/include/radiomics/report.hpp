// report.hpp : feature tables, run manifests, repeatability reports
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
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "radiomics/stats.hpp"

namespace radiomics {

// 64-bit FNV-1a, hex encoded; good enough to tie outputs to inputs.
std::string fnv1a_hex(const std::string& bytes);
std::string fnv1a_file(const std::filesystem::path& path);

// Run provenance. The hash covers version, inputs, quantization tags and
// lesion ids; the timestamp is informational and deliberately left out so
// repeated runs produce byte-identical data outputs.
struct Manifest {
  std::string version;
  std::string created_utc;
  std::vector<std::pair<std::string, std::string>> inputs;  // path, content hash
  std::vector<std::string> quant_tags;
  std::vector<std::string> lesion_ids;

  std::string hash() const;
  void save(const std::filesystem::path& path) const;
};

// One row per lesion, one column per feature.
struct FeatureTable {
  std::string manifest_hash;
  std::vector<std::string> lesion_ids;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> values;  // [lesion][column]

  std::optional<std::size_t> column_index(const std::string& name) const;
};

void write_table_csv(const FeatureTable& table, const std::filesystem::path& path);
void write_table_json(const FeatureTable& table, const std::filesystem::path& path);
FeatureTable read_table(const std::filesystem::path& path);  // .csv or .json

struct ReportRow {
  std::string feature_id;
  BlandAltmanResult ba;
  Reliability category = Reliability::poorly_reliable;
  double icc = 0.0;
  std::optional<double> spearman_vs_volume;         // empty when degenerate
  std::optional<double> spearman_vs_max_intensity;  // empty when degenerate/absent
};

struct RepeatabilityReport {
  std::string manifest_hash;
  std::string voi_feature;
  ReliabilityThresholds thresholds;
  std::vector<std::string> lesion_ids;  // common lesions, sorted
  std::vector<ReportRow> rows;

  // Per-row plot series aligned with `rows`: raw pair means and percent
  // differences per lesion, plus indices of |diff - mean| > 3 sd outliers
  // (flagged, never dropped).
  std::vector<std::vector<double>> series_mean;
  std::vector<std::vector<double>> series_diff_pct;
  std::vector<std::vector<int>> series_outliers;
};

// Bland-Altman per common feature column; thresholds from the VOI feature's
// repeatability SD. Features whose log fallback is impossible (nonpositive
// values with non-normal differences) keep the untransformed limits.
RepeatabilityReport compare_tables(const FeatureTable& test, const FeatureTable& retest,
                                   const std::string& voi_feature);

void write_report_csv(const RepeatabilityReport& report, const std::filesystem::path& path);
void write_report_json(const RepeatabilityReport& report, const std::filesystem::path& path);
void write_report_series_json(const RepeatabilityReport& report,
                              const std::filesystem::path& path);
RepeatabilityReport read_report_csv(const std::filesystem::path& path);
RepeatabilityReport read_report_json(const std::filesystem::path& path);
void read_report_series_json(const std::filesystem::path& path, RepeatabilityReport& report);

// Shortest round-trip decimal text for a double (shared by CSV and SVG writers).
std::string format_double_text(double v);

}  // namespace radiomics
