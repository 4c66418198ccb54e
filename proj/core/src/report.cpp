// report.cpp : table/report serialization and the compare pipeline
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

#include "radiomics/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "radiomics/version.hpp"

namespace radiomics {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr double kOutlierSdFactor = 3.0;

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_input("cannot open file", path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_input("cannot write file", path.string());
  out.write(text.data(), std::streamsize(text.size()));
  if (!out) throw_input("short write", path.string());
}

double parse_double(const std::string& text, const std::string& context) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw_input("malformed number '" + text + "' in " + context);
  return v;
}

bool parse_bool(const std::string& text, const std::string& context) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw_input("malformed boolean '" + text + "' in " + context);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

void check_csv_token(const std::string& token, const std::string& what) {
  if (token.find_first_of(",\"\n\r") != std::string::npos)
    throw_input(what + " '" + token + "' contains CSV delimiter characters");
}

ordered_json parse_json_file(const fs::path& path) {
  try {
    return ordered_json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw_input(std::string("malformed JSON: ") + e.what(), path.string());
  }
}

}  // namespace

std::string format_double_text(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

///////////////////////////////////////////////////////////////////////////
//                               Manifest                                //
///////////////////////////////////////////////////////////////////////////

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
  return buf;
}

std::string fnv1a_file(const fs::path& path) { return fnv1a_hex(read_text_file(path)); }

std::string Manifest::hash() const {
  std::string canonical = "radiomics\n" + version + "\n";
  for (const auto& [path, h] : inputs) canonical += path + ":" + h + "\n";
  for (const auto& q : quant_tags) canonical += q + "\n";
  for (const auto& id : lesion_ids) canonical += id + "\n";
  return fnv1a_hex(canonical);
}

void Manifest::save(const fs::path& path) const {
  ordered_json j;
  j["tool"] = "radiomics";
  j["version"] = version.empty() ? kVersion : version;
  j["created_utc"] = created_utc;
  ordered_json in = ordered_json::object();
  for (const auto& [p, h] : inputs) in[p] = h;
  j["inputs"] = in;
  j["quant"] = quant_tags;
  j["lesions"] = lesion_ids;
  j["hash"] = hash();
  write_text_file(path, j.dump(2) + "\n");
}

///////////////////////////////////////////////////////////////////////////
//                            Feature tables                             //
///////////////////////////////////////////////////////////////////////////

std::optional<std::size_t> FeatureTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  return std::nullopt;
}

void write_table_csv(const FeatureTable& table, const fs::path& path) {
  std::string out = "# manifest " + table.manifest_hash + "\n";
  out += "lesion_id";
  for (const auto& c : table.columns) {
    check_csv_token(c, "feature id");
    out += "," + c;
  }
  out += "\n";
  for (std::size_t r = 0; r < table.lesion_ids.size(); ++r) {
    check_csv_token(table.lesion_ids[r], "lesion id");
    out += table.lesion_ids[r];
    for (double v : table.values[r]) out += "," + format_double_text(v);
    out += "\n";
  }
  write_text_file(path, out);
}

void write_table_json(const FeatureTable& table, const fs::path& path) {
  ordered_json j;
  j["manifest_hash"] = table.manifest_hash;
  j["columns"] = table.columns;
  ordered_json rows = ordered_json::array();
  for (std::size_t r = 0; r < table.lesion_ids.size(); ++r) {
    ordered_json row;
    row["id"] = table.lesion_ids[r];
    row["values"] = table.values[r];
    rows.push_back(row);
  }
  j["lesions"] = rows;
  write_text_file(path, j.dump(2) + "\n");
}

namespace {

FeatureTable read_table_csv(const fs::path& path) {
  const std::string text = read_text_file(path);
  std::istringstream in(text);
  std::string line;
  FeatureTable t;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line);
      std::string hash_word, key;
      ls >> hash_word >> key;
      if (key == "manifest") ls >> t.manifest_hash;
      continue;
    }
    auto cells = split_csv_line(line);
    if (!have_header) {
      if (cells.empty() || cells[0] != "lesion_id")
        throw_input("feature table header must start with lesion_id", path.string());
      t.columns.assign(cells.begin() + 1, cells.end());
      have_header = true;
      continue;
    }
    if (cells.size() != t.columns.size() + 1)
      throw_input("row width mismatch in feature table", path.string());
    t.lesion_ids.push_back(cells[0]);
    std::vector<double> vals;
    vals.reserve(t.columns.size());
    for (std::size_t i = 1; i < cells.size(); ++i)
      vals.push_back(parse_double(cells[i], path.string()));
    t.values.push_back(std::move(vals));
  }
  if (!have_header) throw_input("feature table has no header", path.string());
  return t;
}

FeatureTable read_table_json(const fs::path& path) {
  ordered_json j = parse_json_file(path);
  FeatureTable t;
  try {
    t.manifest_hash = j.value("manifest_hash", "");
    t.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& row : j.at("lesions")) {
      t.lesion_ids.push_back(row.at("id").get<std::string>());
      t.values.push_back(row.at("values").get<std::vector<double>>());
      if (t.values.back().size() != t.columns.size())
        throw_input("row width mismatch in feature table", path.string());
    }
  } catch (const nlohmann::json::exception& e) {
    throw_input(std::string("malformed feature table: ") + e.what(), path.string());
  }
  return t;
}

}  // namespace

FeatureTable read_table(const fs::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv") return read_table_csv(path);
  if (ext == ".json") return read_table_json(path);
  throw_input("feature tables are .csv or .json", path.string());
}

///////////////////////////////////////////////////////////////////////////
//                           Compare pipeline                            //
///////////////////////////////////////////////////////////////////////////

RepeatabilityReport compare_tables(const FeatureTable& test, const FeatureTable& retest,
                                   const std::string& voi_feature) {
  // Common lesions, sorted for determinism.
  std::map<std::string, std::size_t> retest_rows;
  for (std::size_t i = 0; i < retest.lesion_ids.size(); ++i)
    retest_rows[retest.lesion_ids[i]] = i;

  std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> common;
  for (std::size_t i = 0; i < test.lesion_ids.size(); ++i) {
    auto it = retest_rows.find(test.lesion_ids[i]);
    if (it != retest_rows.end())
      common.push_back({test.lesion_ids[i], {i, it->second}});
  }
  std::sort(common.begin(), common.end());
  if (common.size() < 3)
    throw_input("compare needs at least 3 common lesions, found " +
                std::to_string(common.size()));

  RepeatabilityReport report;
  report.voi_feature = voi_feature;
  for (const auto& [id, rows] : common) report.lesion_ids.push_back(id);

  auto series_for = [&](std::size_t test_col, std::size_t retest_col) {
    PairedSeries s;
    s.test.reserve(common.size());
    s.retest.reserve(common.size());
    for (const auto& [id, rows] : common) {
      s.test.push_back(test.values[rows.first][test_col]);
      s.retest.push_back(retest.values[rows.second][retest_col]);
    }
    return s;
  };

  const auto voi_test_col = test.column_index(voi_feature);
  const auto voi_retest_col = retest.column_index(voi_feature);
  if (!voi_test_col || !voi_retest_col)
    throw_input("VOI feature '" + voi_feature + "' missing from a table");

  // Plain fallback when the log path is impossible (nonpositive values).
  auto bland_altman_or_plain = [](PairedSeries& s) {
    try {
      return bland_altman(s);
    } catch (const Error&) {
      PercentDiffs d = percent_differences(s);
      BlandAltmanResult r;
      r.n = int(d.values.size());
      r.excluded_pairs = d.excluded_pairs;
      double sum = 0.0;
      for (double v : d.values) sum += v;
      r.mean_pct = sum / double(d.values.size());
      double ss = 0.0;
      for (double v : d.values) ss += (v - r.mean_pct) * (v - r.mean_pct);
      r.sd_pct = d.values.size() > 1 ? std::sqrt(ss / double(d.values.size() - 1)) : 0.0;
      r.lower_pct = r.mean_pct - 1.96 * r.sd_pct;
      r.upper_pct = r.mean_pct + 1.96 * r.sd_pct;
      r.normal = false;
      r.log_transformed = false;
      return r;
    }
  };

  {
    PairedSeries voi = series_for(*voi_test_col, *voi_retest_col);
    voi.feature_id = voi_feature;
    if (percent_differences(voi).values.size() < 3)
      throw_input("VOI feature '" + voi_feature + "' has fewer than 3 usable pairs");
    const BlandAltmanResult voi_ba = bland_altman_or_plain(voi);
    report.thresholds = ReliabilityThresholds::from_voi_sd(std::abs(voi_ba.sd_pct));
  }

  const auto max_col = test.column_index("fo.max");
  std::vector<double> voi_values, max_values;
  for (const auto& [id, rows] : common) {
    voi_values.push_back(test.values[rows.first][*voi_test_col]);
    if (max_col) max_values.push_back(test.values[rows.first][*max_col]);
  }

  for (std::size_t col = 0; col < test.columns.size(); ++col) {
    const auto retest_col = retest.column_index(test.columns[col]);
    if (!retest_col) continue;  // feature absent from the retest table

    PairedSeries s = series_for(col, *retest_col);
    s.feature_id = test.columns[col];

    PercentDiffs diffs = percent_differences(s);
    if (diffs.values.size() < 3) continue;  // not enough usable pairs

    ReportRow row;
    row.feature_id = s.feature_id;
    row.ba = bland_altman_or_plain(s);
    row.category = reliability_category(std::abs(row.ba.sd_pct), report.thresholds);
    row.icc = icc_agreement(s);

    if (common.size() >= 4) {
      const CorrelationResult rv = spearman(s.test, voi_values);
      if (!rv.degenerate) row.spearman_vs_volume = rv.rs;
      if (max_col) {
        const CorrelationResult rm = spearman(s.test, max_values);
        if (!rm.degenerate) row.spearman_vs_max_intensity = rm.rs;
      }
    }

    // Plot series: raw pair means and per-lesion percent differences;
    // zero-mean pairs have no percent difference and plot as gaps.
    std::vector<double> means, dvals;
    for (std::size_t i = 0; i < s.test.size(); ++i) {
      const double pm = 0.5 * (s.test[i] + s.retest[i]);
      means.push_back(pm);
      dvals.push_back(pm == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                                : 100.0 * (s.retest[i] - s.test[i]) / pm);
    }
    // 3-sd outliers are flagged but never dropped.
    std::vector<int> outliers;
    {
      double sum = 0.0;
      int n = 0;
      for (double v : dvals)
        if (std::isfinite(v)) {
          sum += v;
          ++n;
        }
      const double m = sum / double(n);
      double ss = 0.0;
      for (double v : dvals)
        if (std::isfinite(v)) ss += (v - m) * (v - m);
      const double sd = n > 1 ? std::sqrt(ss / double(n - 1)) : 0.0;
      if (sd > 0.0)
        for (std::size_t i = 0; i < dvals.size(); ++i)
          if (std::isfinite(dvals[i]) && std::abs(dvals[i] - m) > kOutlierSdFactor * sd)
            outliers.push_back(int(i));
    }

    report.rows.push_back(std::move(row));
    report.series_mean.push_back(std::move(means));
    report.series_diff_pct.push_back(std::move(dvals));
    report.series_outliers.push_back(std::move(outliers));
  }
  return report;
}

///////////////////////////////////////////////////////////////////////////
//                         Report serialization                          //
///////////////////////////////////////////////////////////////////////////

namespace {

constexpr const char* kReportHeader =
    "feature_id,n,mean_pct,sd_pct,lower_pct,upper_pct,normal,log_transformed,"
    "category,icc,spearman_vs_volume,spearman_vs_max_intensity";

std::string optional_text(const std::optional<double>& v) {
  return v ? format_double_text(*v) : std::string();
}

}  // namespace

void write_report_csv(const RepeatabilityReport& report, const fs::path& path) {
  std::string out = "# manifest " + report.manifest_hash + "\n";
  out += "# voi_feature " + report.voi_feature + "\n";
  out += "# voi_rep_sd " + format_double_text(report.thresholds.voi_rep_sd) + "\n";
  out += kReportHeader;
  out += "\n";
  for (const auto& r : report.rows) {
    check_csv_token(r.feature_id, "feature id");
    out += r.feature_id;
    out += "," + std::to_string(r.ba.n);
    out += "," + format_double_text(r.ba.mean_pct);
    out += "," + format_double_text(r.ba.sd_pct);
    out += "," + format_double_text(r.ba.lower_pct);
    out += "," + format_double_text(r.ba.upper_pct);
    out += r.ba.normal ? ",true" : ",false";
    out += r.ba.log_transformed ? ",true" : ",false";
    out += "," + to_string(r.category);
    out += "," + format_double_text(r.icc);
    out += "," + optional_text(r.spearman_vs_volume);
    out += "," + optional_text(r.spearman_vs_max_intensity);
    out += "\n";
  }
  write_text_file(path, out);
}

void write_report_json(const RepeatabilityReport& report, const fs::path& path) {
  ordered_json j;
  j["manifest_hash"] = report.manifest_hash;
  j["voi_feature"] = report.voi_feature;
  j["voi_rep_sd"] = report.thresholds.voi_rep_sd;
  ordered_json rows = ordered_json::array();
  for (const auto& r : report.rows) {
    ordered_json row;
    row["feature_id"] = r.feature_id;
    row["n"] = r.ba.n;
    row["mean_pct"] = r.ba.mean_pct;
    row["sd_pct"] = r.ba.sd_pct;
    row["lower_pct"] = r.ba.lower_pct;
    row["upper_pct"] = r.ba.upper_pct;
    row["normal"] = r.ba.normal;
    row["log_transformed"] = r.ba.log_transformed;
    row["category"] = to_string(r.category);
    row["icc"] = r.icc;
    row["spearman_vs_volume"] =
        r.spearman_vs_volume ? ordered_json(*r.spearman_vs_volume) : ordered_json(nullptr);
    row["spearman_vs_max_intensity"] = r.spearman_vs_max_intensity
                                           ? ordered_json(*r.spearman_vs_max_intensity)
                                           : ordered_json(nullptr);
    rows.push_back(row);
  }
  j["rows"] = rows;
  write_text_file(path, j.dump(2) + "\n");
}

void write_report_series_json(const RepeatabilityReport& report, const fs::path& path) {
  ordered_json j;
  j["manifest_hash"] = report.manifest_hash;
  j["lesion_ids"] = report.lesion_ids;
  ordered_json feats = ordered_json::object();
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    ordered_json f;
    f["mean"] = report.series_mean[i];
    ordered_json diffs = ordered_json::array();
    for (double v : report.series_diff_pct[i])
      diffs.push_back(std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr));
    f["diff_pct"] = diffs;
    f["outliers"] = report.series_outliers[i];
    feats[report.rows[i].feature_id] = f;
  }
  j["features"] = feats;
  write_text_file(path, j.dump(2) + "\n");
}

RepeatabilityReport read_report_csv(const fs::path& path) {
  const std::string text = read_text_file(path);
  std::istringstream in(text);
  std::string line;
  RepeatabilityReport rep;
  double voi_sd = 0.0;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line);
      std::string hash_word, key, value;
      ls >> hash_word >> key >> value;
      if (key == "manifest") rep.manifest_hash = value;
      if (key == "voi_feature") rep.voi_feature = value;
      if (key == "voi_rep_sd") voi_sd = parse_double(value, path.string());
      continue;
    }
    if (!have_header) {
      if (line != kReportHeader)
        throw_input("unexpected report header", path.string());
      have_header = true;
      continue;
    }
    auto cells = split_csv_line(line);
    if (cells.size() != 12)
      throw_input("report row must have 12 cells", path.string());
    ReportRow r;
    r.feature_id = cells[0];
    r.ba.n = int(parse_double(cells[1], path.string()));
    r.ba.mean_pct = parse_double(cells[2], path.string());
    r.ba.sd_pct = parse_double(cells[3], path.string());
    r.ba.lower_pct = parse_double(cells[4], path.string());
    r.ba.upper_pct = parse_double(cells[5], path.string());
    r.ba.normal = parse_bool(cells[6], path.string());
    r.ba.log_transformed = parse_bool(cells[7], path.string());
    r.category = reliability_from(cells[8]);
    r.icc = parse_double(cells[9], path.string());
    if (!cells[10].empty()) r.spearman_vs_volume = parse_double(cells[10], path.string());
    if (!cells[11].empty())
      r.spearman_vs_max_intensity = parse_double(cells[11], path.string());
    rep.rows.push_back(std::move(r));
  }
  if (!have_header) throw_input("report has no header", path.string());
  rep.thresholds = ReliabilityThresholds::from_voi_sd(voi_sd);
  return rep;
}

RepeatabilityReport read_report_json(const fs::path& path) {
  ordered_json j = parse_json_file(path);
  RepeatabilityReport rep;
  try {
    rep.manifest_hash = j.value("manifest_hash", "");
    rep.voi_feature = j.at("voi_feature").get<std::string>();
    rep.thresholds =
        ReliabilityThresholds::from_voi_sd(j.at("voi_rep_sd").get<double>());
    for (const auto& row : j.at("rows")) {
      ReportRow r;
      r.feature_id = row.at("feature_id").get<std::string>();
      r.ba.n = row.at("n").get<int>();
      r.ba.mean_pct = row.at("mean_pct").get<double>();
      r.ba.sd_pct = row.at("sd_pct").get<double>();
      r.ba.lower_pct = row.at("lower_pct").get<double>();
      r.ba.upper_pct = row.at("upper_pct").get<double>();
      r.ba.normal = row.at("normal").get<bool>();
      r.ba.log_transformed = row.at("log_transformed").get<bool>();
      r.category = reliability_from(row.at("category").get<std::string>());
      r.icc = row.at("icc").get<double>();
      if (!row.at("spearman_vs_volume").is_null())
        r.spearman_vs_volume = row.at("spearman_vs_volume").get<double>();
      if (!row.at("spearman_vs_max_intensity").is_null())
        r.spearman_vs_max_intensity = row.at("spearman_vs_max_intensity").get<double>();
      rep.rows.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw_input(std::string("malformed report: ") + e.what(), path.string());
  }
  return rep;
}

void read_report_series_json(const fs::path& path, RepeatabilityReport& report) {
  ordered_json j = parse_json_file(path);
  try {
    report.lesion_ids = j.at("lesion_ids").get<std::vector<std::string>>();
    const auto& feats = j.at("features");
    report.series_mean.clear();
    report.series_diff_pct.clear();
    report.series_outliers.clear();
    for (const auto& row : report.rows) {
      if (!feats.contains(row.feature_id))
        throw_input("series file missing feature '" + row.feature_id + "'",
                    path.string());
      const auto& f = feats.at(row.feature_id);
      report.series_mean.push_back(f.at("mean").get<std::vector<double>>());
      std::vector<double> diffs;
      for (const auto& v : f.at("diff_pct"))
        diffs.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN()
                                    : v.get<double>());
      report.series_diff_pct.push_back(std::move(diffs));
      report.series_outliers.push_back(f.at("outliers").get<std::vector<int>>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw_input(std::string("malformed series file: ") + e.what(), path.string());
  }
}

}  // namespace radiomics
