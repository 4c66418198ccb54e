// radiomics_main.cpp : CLI binding extraction, comparison, phantoms, and plots
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

#include <atomic>
#include <cctype>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "radiomics/features.hpp"
#include "radiomics/phantom.hpp"
#include "radiomics/report.hpp"
#include "radiomics/svg_plot.hpp"
#include "radiomics/version.hpp"
#include "radiomics/volume_io.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace radiomics;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitComputation = 3;

void print_error_json(const std::string& kind, const std::string& message,
                      const std::string& path = {}) {
  ordered_json j;
  j["error"]["kind"] = kind;
  j["error"]["message"] = message;
  if (!path.empty()) j["error"]["path"] = path;
  std::cerr << j.dump() << "\n";
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

unsigned thread_cap() {
  unsigned cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RADIOMICS_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) cap = unsigned(v);
  }
  return cap;
}

template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  threads = unsigned(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::string sanitize_filename(const std::string& name) {
  std::string out;
  for (char c : name)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')
               ? c
               : '_';
  return out;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_input("cannot open file", path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_input("cannot write file", path.string());
  out << text;
}

///////////////////////////////////////////////////////////////////////////
//                               extract                                 //
///////////////////////////////////////////////////////////////////////////

struct LesionInput {
  std::string id;
  fs::path image;
  fs::path mask;
};

struct ExtractArgs {
  std::vector<std::string> images, masks, ids, quants;
  std::string batch, modality = "pet", out;
  int hist_bins = 64;
};

int run_extract(const ExtractArgs& args) {
  std::vector<LesionInput> lesions;
  if (!args.batch.empty()) {
    ordered_json j;
    try {
      j = ordered_json::parse(read_text(args.batch));
      for (const auto& item : j)
        lesions.push_back(LesionInput{item.at("id").get<std::string>(),
                                      item.at("image").get<std::string>(),
                                      item.at("mask").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
      throw_input(std::string("malformed batch file: ") + e.what(), args.batch);
    }
  }
  if (args.images.size() != args.masks.size())
    throw_input("--image and --mask must be given in pairs");
  if (!args.ids.empty() && args.ids.size() != args.images.size())
    throw_input("--id count must match --image count");
  for (std::size_t i = 0; i < args.images.size(); ++i) {
    const std::string id =
        i < args.ids.size() ? args.ids[i]
                            : "lesion_" + std::string(i < 10 ? "0" : "") + std::to_string(i);
    lesions.push_back(LesionInput{id, args.images[i], args.masks[i]});
  }
  if (lesions.empty()) throw_input("no inputs: give --image/--mask or --batch");
  for (const auto& l : lesions) {
    if (l.id.empty() ||
        l.id.find_first_not_of("abcdefghijklmnopqrstuvwxyz"
                               "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789._-") !=
            std::string::npos)
      throw_input("lesion id '" + l.id + "' must match [A-Za-z0-9._-]+");
    if (!fs::exists(l.image)) throw_input("image file not found", l.image.string());
    if (!fs::exists(l.mask)) throw_input("mask file not found", l.mask.string());
  }

  const double default_width = args.modality == "ct" ? 10.0 : 0.5;
  std::vector<QuantizationSpec> specs;
  for (const auto& q : args.quants)
    specs.push_back(QuantizationSpec::parse(q, 64, default_width));
  if (specs.empty()) specs.push_back(QuantizationSpec::fixed_bins(64));

  Manifest manifest;
  manifest.version = kVersion;
  manifest.created_utc = utc_now();
  for (const auto& l : lesions) {
    manifest.inputs.emplace_back(l.image.string(), fnv1a_file(l.image));
    manifest.inputs.emplace_back(l.mask.string(), fnv1a_file(l.mask));
  }
  for (const auto& s : specs) manifest.quant_tags.push_back(s.tag());
  for (const auto& l : lesions) manifest.lesion_ids.push_back(l.id);

  FeatureTable table;
  table.manifest_hash = manifest.hash();
  table.columns = feature_names(specs);
  table.lesion_ids.resize(lesions.size());
  table.values.resize(lesions.size());

  parallel_for(lesions.size(), thread_cap(), [&](std::size_t i) {
    const Volume volume = load_volume(lesions[i].image);
    const Mask mask = load_mask(lesions[i].mask);
    const FeatureVector fv = extract_features(volume, mask, specs, args.hist_bins);
    if (fv.names() != table.columns)
      throw_computation("feature set mismatch for lesion '" + lesions[i].id + "'");
    std::vector<double> row;
    row.reserve(table.columns.size());
    for (const auto& [name, value] : fv.items()) row.push_back(value);
    table.lesion_ids[i] = lesions[i].id;
    table.values[i] = std::move(row);
  });

  const fs::path out(args.out);
  write_table_csv(table, out.string() + ".csv");
  write_table_json(table, out.string() + ".json");
  manifest.save(out.string() + "_manifest.json");
  return kExitOk;
}

///////////////////////////////////////////////////////////////////////////
//                               compare                                 //
///////////////////////////////////////////////////////////////////////////

struct CompareArgs {
  std::string test, retest, out;
  std::string voi_feature = "shape.volume_ml";
  std::vector<std::string> plots;
};

void render_plots(const RepeatabilityReport& report, const std::vector<std::string>& plots,
                  const std::string& out_prefix) {
  for (const auto& feature : plots) {
    std::size_t row = report.rows.size();
    for (std::size_t i = 0; i < report.rows.size(); ++i)
      if (report.rows[i].feature_id == feature) {
        row = i;
        break;
      }
    if (row == report.rows.size())
      throw_input("feature '" + feature + "' not present in the report");
    const std::string svg =
        bland_altman_svg(feature, report.series_mean[row], report.series_diff_pct[row],
                         report.rows[row].ba, report.manifest_hash);
    write_text(out_prefix + "_" + sanitize_filename(feature) + ".svg", svg);
  }
}

int run_compare(const CompareArgs& args) {
  for (const auto& p : {args.test, args.retest})
    if (!fs::exists(p)) throw_input("feature table not found", p);

  const FeatureTable test = read_table(args.test);
  const FeatureTable retest = read_table(args.retest);

  Manifest manifest;
  manifest.version = kVersion;
  manifest.created_utc = utc_now();
  manifest.inputs.emplace_back(args.test, fnv1a_file(args.test));
  manifest.inputs.emplace_back(args.retest, fnv1a_file(args.retest));

  RepeatabilityReport report = compare_tables(test, retest, args.voi_feature);
  manifest.lesion_ids = report.lesion_ids;
  report.manifest_hash = manifest.hash();

  const std::string out = args.out;
  write_report_csv(report, out + "_report.csv");
  write_report_json(report, out + "_report.json");
  write_report_series_json(report, out + "_series.json");
  manifest.save(out + "_manifest.json");
  render_plots(report, args.plots, out);
  return kExitOk;
}

///////////////////////////////////////////////////////////////////////////
//                               phantom                                 //
///////////////////////////////////////////////////////////////////////////

struct PhantomArgs {
  std::string spec_file, out, format = "nrrd", shape = "ball";
  std::vector<int> dims{32, 32, 32};
  std::vector<double> spacing{4.0, 4.0, 4.0};
  double radius = 10.0, base = 100.0, texture_scale = 2.0, noise_sd = 0.0;
  std::uint64_t seed = 0;
};

int run_phantom(const PhantomArgs& args) {
  PhantomSpec spec;
  if (!args.spec_file.empty()) {
    if (!fs::exists(args.spec_file)) throw_input("spec file not found", args.spec_file);
    spec = phantom_spec_from_json(read_text(args.spec_file));
  } else {
    if (args.dims.size() != 3) throw_input("--dims needs three values");
    if (args.spacing.size() != 3) throw_input("--spacing needs three values");
    spec.dims = Dims{args.dims[0], args.dims[1], args.dims[2]};
    spec.spacing = Spacing{args.spacing[0], args.spacing[1], args.spacing[2]};
    spec.shape = phantom_shape_from(args.shape);
    spec.radius_vox = args.radius;
    spec.base_intensity = args.base;
    spec.texture_scale = args.texture_scale;
    spec.noise_sd = args.noise_sd;
    spec.seed = args.seed;
    spec.validate();
  }

  VolumeFormat format;
  if (args.format == "nrrd")
    format = VolumeFormat::nrrd;
  else if (args.format == "raw_json")
    format = VolumeFormat::raw_json;
  else
    throw_input("--format must be nrrd or raw_json");

  const std::string spec_json = phantom_spec_to_json(spec);
  Manifest manifest;
  manifest.version = kVersion;
  manifest.created_utc = utc_now();
  manifest.inputs.emplace_back("phantom_spec", fnv1a_hex(spec_json));
  const std::string hash = manifest.hash();

  const PhantomPair pair = generate_pair(spec);

  const std::string out = args.out;
  const std::string ext = format == VolumeFormat::nrrd ? ".nrrd" : ".json";
  save_volume(pair.test, out + "_test_volume" + ext, format, RawDtype::f64, hash);
  save_volume(pair.retest, out + "_retest_volume" + ext, format, RawDtype::f64, hash);
  save_mask(pair.mask, spec.spacing, out + "_test_mask" + ext, format, hash);
  save_mask(pair.mask, spec.spacing, out + "_retest_mask" + ext, format, hash);
  write_text(out + "_spec.json", spec_json);
  manifest.save(out + "_manifest.json");
  return kExitOk;
}

///////////////////////////////////////////////////////////////////////////
//                                report                                 //
///////////////////////////////////////////////////////////////////////////

struct ReportArgs {
  std::string report_file, series_file, out;
  std::vector<std::string> plots;
};

int run_report(const ReportArgs& args) {
  if (!fs::exists(args.report_file))
    throw_input("report file not found", args.report_file);
  std::string series = args.series_file;
  if (series.empty()) {
    series = args.report_file;
    const std::string suffix = "_report.json";
    if (series.size() > suffix.size() &&
        series.compare(series.size() - suffix.size(), suffix.size(), suffix) == 0)
      series.replace(series.size() - suffix.size(), suffix.size(), "_series.json");
    else
      throw_input("cannot derive series path; pass --series");
  }
  if (!fs::exists(series)) throw_input("series file not found", series);

  RepeatabilityReport report = read_report_json(args.report_file);
  read_report_series_json(series, report);
  if (args.plots.empty()) throw_input("report needs at least one --plot feature");
  render_plots(report, args.plots, args.out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"volumetric radiomics features and test-retest repeatability"};
  app.set_version_flag("--version", std::string("radiomics ") + kVersion);
  app.require_subcommand(1);

  ExtractArgs ex;
  auto* extract = app.add_subcommand("extract", "compute a feature table");
  extract->add_option("--image", ex.images, "input volume (.nrrd/.nhdr/.json)");
  extract->add_option("--mask", ex.masks, "binary mask, same grid as --image");
  extract->add_option("--id", ex.ids, "lesion id per --image (default lesion_NN)");
  extract->add_option("--batch", ex.batch, "JSON array of {id,image,mask}");
  extract->add_option("--quant", ex.quants, "quantization: bins:<B> or width:<W>");
  extract->add_option("--modality", ex.modality, "pet|ct (default width 0.5 vs 10)")
      ->check(CLI::IsMember({"pet", "ct"}));
  extract->add_option("--hist-bins", ex.hist_bins, "first-order histogram bins");
  extract->add_option("--out", ex.out, "output prefix")->required();

  CompareArgs cp;
  auto* compare = app.add_subcommand("compare", "test-retest repeatability report");
  compare->add_option("--test", cp.test, "feature table of the test session")->required();
  compare->add_option("--retest", cp.retest, "feature table of the retest session")
      ->required();
  compare->add_option("--voi-feature", cp.voi_feature,
                      "feature whose repeatability SD sets the category cuts");
  compare->add_option("--plot", cp.plots, "feature id to render as a Bland-Altman SVG");
  compare->add_option("--out", cp.out, "output prefix")->required();

  PhantomArgs ph;
  auto* phantom = app.add_subcommand("phantom", "generate a synthetic test-retest pair");
  phantom->add_option("--spec", ph.spec_file, "phantom spec JSON (overrides flags)");
  phantom->add_option("--dims", ph.dims, "grid size nx ny nz")->expected(3);
  phantom->add_option("--spacing", ph.spacing, "voxel spacing mm")->expected(3);
  phantom->add_option("--shape", ph.shape, "ball|ellipsoid|blob");
  phantom->add_option("--radius", ph.radius, "lesion radius in voxels");
  phantom->add_option("--base", ph.base, "base intensity");
  phantom->add_option("--texture-scale", ph.texture_scale,
                      "texture correlation length, voxels");
  phantom->add_option("--noise-sd", ph.noise_sd, "per-acquisition noise SD");
  phantom->add_option("--seed", ph.seed, "PRNG seed");
  phantom->add_option("--format", ph.format, "nrrd|raw_json");
  phantom->add_option("--out", ph.out, "output prefix")->required();

  ReportArgs rp;
  auto* report = app.add_subcommand("report", "re-render SVGs from an existing report");
  report->add_option("--report", rp.report_file, "report JSON from compare")->required();
  report->add_option("--series", rp.series_file, "series JSON (default: derived)");
  report->add_option("--plot", rp.plots, "feature id to render");
  report->add_option("--out", rp.out, "output prefix")->required();

  try {
    app.parse(argc, argv);
    if (*extract) return run_extract(ex);
    if (*compare) return run_compare(cp);
    if (*phantom) return run_phantom(ph);
    if (*report) return run_report(rp);
    return kExitInput;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    print_error_json("usage", e.what());
    return kExitInput;
  } catch (const Error& e) {
    print_error_json(e.kind() == ErrorKind::input ? "input" : "computation", e.what(),
                     e.path());
    return e.kind() == ErrorKind::input ? kExitInput : kExitComputation;
  } catch (const std::exception& e) {
    print_error_json("computation", e.what());
    return kExitComputation;
  }
}
