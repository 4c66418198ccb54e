// volume_io.cpp : NRRD subset and raw+JSON readers/writers, roi extraction
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

#include "radiomics/volume_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

static_assert(std::endian::native == std::endian::little,
              "payload decoding assumes a little-endian host");

namespace radiomics {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_input("cannot open file", path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_input("cannot write file", path.string());
  out.write(bytes.data(), std::streamsize(bytes.size()));
  if (!out) throw_input("short write", path.string());
}

std::size_t dtype_size(RawDtype t) {
  switch (t) {
    case RawDtype::u8: return 1;
    case RawDtype::i16: return 2;
    case RawDtype::f32: return 4;
    case RawDtype::f64: return 8;
  }
  return 8;
}

std::string dtype_name(RawDtype t) {
  switch (t) {
    case RawDtype::u8: return "u8";
    case RawDtype::i16: return "i16";
    case RawDtype::f32: return "f32";
    case RawDtype::f64: return "f64";
  }
  return "f64";
}

RawDtype dtype_from_name(const std::string& name, const std::string& path) {
  if (name == "u8") return RawDtype::u8;
  if (name == "i16") return RawDtype::i16;
  if (name == "f32") return RawDtype::f32;
  if (name == "f64") return RawDtype::f64;
  throw_input("unknown dtype '" + name + "'", path);
}

std::string nrrd_type_name(RawDtype t) {
  switch (t) {
    case RawDtype::u8: return "unsigned char";
    case RawDtype::i16: return "short";
    case RawDtype::f32: return "float";
    case RawDtype::f64: return "double";
  }
  return "double";
}

RawDtype nrrd_type_from(const std::string& text, const std::string& path) {
  static const std::map<std::string, RawDtype> kTypes = {
      {"uchar", RawDtype::u8},         {"unsigned char", RawDtype::u8},
      {"uint8", RawDtype::u8},         {"uint8_t", RawDtype::u8},
      {"short", RawDtype::i16},        {"short int", RawDtype::i16},
      {"signed short", RawDtype::i16}, {"int16", RawDtype::i16},
      {"int16_t", RawDtype::i16},      {"float", RawDtype::f32},
      {"double", RawDtype::f64}};
  auto it = kTypes.find(text);
  if (it == kTypes.end()) throw_input("unsupported NRRD type '" + text + "'", path);
  return it->second;
}

// Decodes a little-endian payload into doubles, rejecting NaNs with the
// index of the first offender.
std::vector<double> decode_payload(const std::string& bytes, RawDtype dtype,
                                   std::int64_t count, const std::string& path) {
  const std::size_t expected = dtype_size(dtype) * std::size_t(count);
  if (bytes.size() != expected)
    throw_input("payload size mismatch: expected " + std::to_string(expected) +
                    " bytes for " + std::to_string(count) + " voxels, got " +
                    std::to_string(bytes.size()),
                path);
  std::vector<double> out(std::size_t(count), 0.0);
  const char* p = bytes.data();
  for (std::int64_t i = 0; i < count; ++i) {
    double v = 0.0;
    switch (dtype) {
      case RawDtype::u8: {
        std::uint8_t raw;
        std::memcpy(&raw, p + i, 1);
        v = raw;
        break;
      }
      case RawDtype::i16: {
        std::int16_t raw;
        std::memcpy(&raw, p + 2 * i, 2);
        v = raw;
        break;
      }
      case RawDtype::f32: {
        float raw;
        std::memcpy(&raw, p + 4 * i, 4);
        v = raw;
        break;
      }
      case RawDtype::f64: {
        std::memcpy(&v, p + 8 * i, 8);
        break;
      }
    }
    if (std::isnan(v))
      throw_input("NaN intensity at voxel index " + std::to_string(i), path);
    out[std::size_t(i)] = v;
  }
  return out;
}

std::string encode_payload(const std::vector<double>& voxels, RawDtype dtype) {
  std::string bytes(dtype_size(dtype) * voxels.size(), '\0');
  char* p = bytes.data();
  for (std::size_t i = 0; i < voxels.size(); ++i) {
    switch (dtype) {
      case RawDtype::u8: {
        auto raw = std::uint8_t(std::clamp<long long>(std::llround(voxels[i]), 0, 255));
        std::memcpy(p + i, &raw, 1);
        break;
      }
      case RawDtype::i16: {
        auto raw = std::int16_t(std::clamp<long long>(std::llround(voxels[i]), -32768, 32767));
        std::memcpy(p + 2 * i, &raw, 2);
        break;
      }
      case RawDtype::f32: {
        float raw = float(voxels[i]);
        std::memcpy(p + 4 * i, &raw, 4);
        break;
      }
      case RawDtype::f64: {
        std::memcpy(p + 8 * i, &voxels[i], 8);
        break;
      }
    }
  }
  return bytes;
}

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

fs::path sibling_with_extension(const fs::path& path, const char* ext) {
  fs::path out = path;
  out.replace_extension(ext);
  return out;
}

// ---------------------------------------------------------------- NRRD --

struct NrrdHeader {
  Dims dims;
  Spacing spacing;
  RawDtype dtype = RawDtype::f64;
  std::string data_file;   // empty for attached payloads
  std::size_t payload_offset = 0;
};

std::string trim(std::string s) {
  auto issp = [](unsigned char c) { return std::isspace(c); };
  while (!s.empty() && issp(s.front())) s.erase(s.begin());
  while (!s.empty() && issp(s.back())) s.pop_back();
  return s;
}

// Parses "(a,b,c)" vectors from the space directions field.
std::array<double, 3> parse_direction(std::string text, const std::string& path) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '(' || text.back() != ')')
    throw_input("malformed space direction '" + text + "'", path);
  std::array<double, 3> v{};
  std::stringstream ss(text.substr(1, text.size() - 2));
  std::string item;
  for (int i = 0; i < 3; ++i) {
    if (!std::getline(ss, item, ','))
      throw_input("malformed space direction '" + text + "'", path);
    try {
      v[std::size_t(i)] = std::stod(trim(item));
    } catch (const std::exception&) {
      throw_input("malformed space direction '" + text + "'", path);
    }
  }
  return v;
}

NrrdHeader parse_nrrd_header(const std::string& bytes, const std::string& path) {
  NrrdHeader h;
  std::size_t pos = 0;
  auto next_line = [&]() -> std::string {
    std::size_t eol = bytes.find('\n', pos);
    std::string line = (eol == std::string::npos) ? bytes.substr(pos)
                                                  : bytes.substr(pos, eol - pos);
    pos = (eol == std::string::npos) ? bytes.size() : eol + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };

  std::string magic = next_line();
  if (magic.rfind("NRRD000", 0) != 0)
    throw_input("not an NRRD file (bad magic '" + magic + "')", path);

  std::map<std::string, std::string> fields;
  while (pos < bytes.size()) {
    std::string line = next_line();
    if (line.empty()) break;  // header/payload separator
    if (line[0] == '#') continue;
    std::size_t colon = line.find(": ");
    if (colon == std::string::npos) {
      // "key:=value" per-axis labels and similar are out of the subset; the
      // bare "key:value" form without a space is a malformed field for us.
      throw_input("malformed NRRD field '" + line + "'", path);
    }
    fields[line.substr(0, colon)] = trim(line.substr(colon + 2));
  }
  h.payload_offset = pos;

  auto require = [&](const char* key) -> const std::string& {
    auto it = fields.find(key);
    if (it == fields.end())
      throw_input(std::string("missing NRRD field '") + key + "'", path);
    return it->second;
  };

  if (require("dimension") != "3")
    throw_input("only 3-dimensional NRRD supported", path);
  if (require("encoding") != "raw")
    throw_input("only raw NRRD encoding supported", path);

  h.dtype = nrrd_type_from(require("type"), path);
  if (dtype_size(h.dtype) > 1) {
    if (require("endian") != "little")
      throw_input("only little-endian NRRD supported", path);
  }

  {
    std::stringstream ss(require("sizes"));
    if (!(ss >> h.dims.nx >> h.dims.ny >> h.dims.nz))
      throw_input("malformed NRRD sizes", path);
    if (h.dims.nx <= 0 || h.dims.ny <= 0 || h.dims.nz <= 0)
      throw_input("NRRD sizes must be positive", path);
  }

  {
    // Diagonal space directions only; row i carries spacing on axis i.
    std::stringstream ss(require("space directions"));
    std::string v0, v1, v2;
    if (!(ss >> v0 >> v1 >> v2))
      throw_input("malformed NRRD space directions", path);
    auto r0 = parse_direction(v0, path);
    auto r1 = parse_direction(v1, path);
    auto r2 = parse_direction(v2, path);
    if (r0[1] != 0 || r0[2] != 0 || r1[0] != 0 || r1[2] != 0 || r2[0] != 0 || r2[1] != 0)
      throw_input("only diagonal space directions supported", path);
    h.spacing = Spacing{r0[0], r1[1], r2[2]};
    if (!(h.spacing.sx > 0) || !(h.spacing.sy > 0) || !(h.spacing.sz > 0))
      throw_input("space directions must be positive", path);
  }

  if (auto it = fields.find("data file"); it != fields.end()) h.data_file = it->second;
  return h;
}

Volume load_nrrd(const fs::path& path) {
  const std::string bytes = read_file(path);
  NrrdHeader h = parse_nrrd_header(bytes, path.string());

  std::string payload;
  if (h.data_file.empty()) {
    payload = bytes.substr(h.payload_offset);
  } else {
    payload = read_file(path.parent_path() / h.data_file);
  }

  Volume v;
  v.dims = h.dims;
  v.spacing = h.spacing;
  v.unit = IntensityUnit::arbitrary;
  v.voxels = decode_payload(payload, h.dtype, h.dims.count(), path.string());
  v.validate();
  return v;
}

void save_nrrd(const Volume& volume, const fs::path& path, RawDtype dtype,
               std::string_view manifest_hash) {
  const bool detached = path.extension() == ".nhdr";
  fs::path data_path = sibling_with_extension(path, ".raw");

  std::string header;
  header += "NRRD0004\n";
  header += "# radiomics volume\n";
  if (!manifest_hash.empty())
    header += "# manifest " + std::string(manifest_hash) + "\n";
  header += "type: " + nrrd_type_name(dtype) + "\n";
  header += "dimension: 3\n";
  header += "sizes: " + std::to_string(volume.dims.nx) + " " +
            std::to_string(volume.dims.ny) + " " + std::to_string(volume.dims.nz) + "\n";
  header += "space directions: (" + format_double(volume.spacing.sx) + ",0,0) (0," +
            format_double(volume.spacing.sy) + ",0) (0,0," +
            format_double(volume.spacing.sz) + ")\n";
  header += "endian: little\n";
  header += "encoding: raw\n";

  std::string payload = encode_payload(volume.voxels, dtype);
  if (detached) {
    header += "data file: " + data_path.filename().string() + "\n\n";
    write_file(path, header);
    write_file(data_path, payload);
  } else {
    header += "\n";
    write_file(path, header + payload);
  }
}

// ------------------------------------------------------------ raw+JSON --

Volume load_raw_json(const fs::path& path) {
  ordered_json sidecar;
  try {
    sidecar = ordered_json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw_input(std::string("malformed JSON sidecar: ") + e.what(), path.string());
  }

  Volume v;
  try {
    auto dims = sidecar.at("dims");
    auto spacing = sidecar.at("spacing_mm");
    v.dims = Dims{dims.at(0).get<int>(), dims.at(1).get<int>(), dims.at(2).get<int>()};
    v.spacing = Spacing{spacing.at(0).get<double>(), spacing.at(1).get<double>(),
                        spacing.at(2).get<double>()};
    if (sidecar.contains("unit"))
      v.unit = intensity_unit_from(sidecar.at("unit").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw_input(std::string("malformed JSON sidecar: ") + e.what(), path.string());
  }
  RawDtype dtype = dtype_from_name(sidecar.at("dtype").get<std::string>(), path.string());

  fs::path data_path = sibling_with_extension(path, ".raw");
  v.voxels = decode_payload(read_file(data_path), dtype, v.dims.count(), data_path.string());
  v.validate();
  return v;
}

void save_raw_json(const Volume& volume, const fs::path& path, RawDtype dtype,
                   std::string_view manifest_hash) {
  ordered_json sidecar;
  sidecar["dims"] = {volume.dims.nx, volume.dims.ny, volume.dims.nz};
  sidecar["spacing_mm"] = {volume.spacing.sx, volume.spacing.sy, volume.spacing.sz};
  sidecar["dtype"] = dtype_name(dtype);
  sidecar["unit"] = to_string(volume.unit);
  if (!manifest_hash.empty()) sidecar["manifest"] = std::string(manifest_hash);
  write_file(path, sidecar.dump(2) + "\n");
  write_file(sibling_with_extension(path, ".raw"), encode_payload(volume.voxels, dtype));
}

}  // namespace

VolumeFormat detect_volume_format(const fs::path& path) {
  auto ext = path.extension().string();
  if (ext == ".nrrd" || ext == ".nhdr") return VolumeFormat::nrrd;
  if (ext == ".json" || ext == ".raw") return VolumeFormat::raw_json;
  throw_input("cannot detect volume format from extension '" + ext + "'", path.string());
}

Volume load_volume(const fs::path& path, VolumeFormat format) {
  return format == VolumeFormat::nrrd ? load_nrrd(path)
                                      : load_raw_json(sibling_with_extension(path, ".json"));
}

Volume load_volume(const fs::path& path) {
  return load_volume(path, detect_volume_format(path));
}

void save_volume(const Volume& volume, const fs::path& path, VolumeFormat format,
                 RawDtype dtype, std::string_view manifest_hash) {
  volume.validate();
  if (format == VolumeFormat::nrrd)
    save_nrrd(volume, path, dtype, manifest_hash);
  else
    save_raw_json(volume, sibling_with_extension(path, ".json"), dtype, manifest_hash);
}

Mask load_mask(const fs::path& path) {
  Volume v = load_volume(path);
  Mask m;
  m.dims = v.dims;
  m.voxels.resize(v.voxels.size());
  for (std::size_t i = 0; i < v.voxels.size(); ++i)
    m.voxels[i] = v.voxels[i] != 0.0 ? 1 : 0;
  m.recount();
  if (m.voxel_count == 0) throw_input("mask is empty (all voxels zero)", path.string());
  return m;
}

void save_mask(const Mask& mask, const Spacing& spacing, const fs::path& path,
               VolumeFormat format, std::string_view manifest_hash) {
  Volume v;
  v.dims = mask.dims;
  v.spacing = spacing;
  v.unit = IntensityUnit::arbitrary;
  v.voxels.assign(mask.voxels.begin(), mask.voxels.end());
  save_volume(v, path, format, RawDtype::u8, manifest_hash);
}

RoiSample extract_roi(const Volume& volume, const Mask& mask) {
  if (volume.dims != mask.dims)
    throw_input("volume and mask dims differ");
  mask.validate();

  RoiSample roi;
  roi.spacing = volume.spacing;
  roi.unit = volume.unit;
  roi.coords.reserve(std::size_t(mask.voxel_count));
  roi.intensities.reserve(std::size_t(mask.voxel_count));
  std::int64_t i = 0;
  for (int z = 0; z < volume.dims.nz; ++z)
    for (int y = 0; y < volume.dims.ny; ++y)
      for (int x = 0; x < volume.dims.nx; ++x, ++i)
        if (mask.voxels[std::size_t(i)]) {
          const double value = volume.voxels[std::size_t(i)];
          if (!std::isfinite(value))
            throw_computation("non-finite intensity inside the mask at voxel index " +
                              std::to_string(i));
          roi.coords.push_back(Coord{x, y, z});
          roi.intensities.push_back(value);
        }
  return roi;
}

}  // namespace radiomics
