// phantom.cpp : deterministic synthetic lesions with shared texture
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

#include "radiomics/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <json.hpp>

#include "radiomics/rng.hpp"

namespace radiomics {

namespace {

// Texture amplitude as a fraction of the base intensity.
constexpr double kTextureAmplitude = 0.2;
// Blob radius modulation depth.
constexpr double kBlobDepth = 0.3;

// Stream ids carved out of the phantom seed.
enum Stream : std::uint64_t {
  kStreamTexture = 0,
  kStreamNoiseTest = 1,
  kStreamNoiseRetest = 2,
  kStreamBlobShape = 3,
};

struct Grid3 {
  Dims dims;
  std::vector<double> v;

  double at(std::int64_t i) const { return v[std::size_t(i)]; }
};

Grid3 white_noise(const Dims& dims, Rng& rng) {
  Grid3 g;
  g.dims = dims;
  g.v.resize(std::size_t(dims.count()));
  for (auto& x : g.v) x = rng.next_gaussian();
  return g;
}

void smooth_separable(Grid3& g, double sigma) {
  if (sigma <= 0.0) return;
  const int radius = std::max(1, int(std::ceil(3.0 * sigma)));
  std::vector<double> kernel(std::size_t(2 * radius + 1));
  double sum = 0.0;
  for (int j = -radius; j <= radius; ++j) {
    kernel[std::size_t(j + radius)] = std::exp(-0.5 * j * j / (sigma * sigma));
    sum += kernel[std::size_t(j + radius)];
  }
  for (auto& w : kernel) w /= sum;

  const int n[3] = {g.dims.nx, g.dims.ny, g.dims.nz};
  const std::int64_t stride[3] = {1, g.dims.nx,
                                  std::int64_t(g.dims.nx) * g.dims.ny};
  std::vector<double> line;
  for (int axis = 0; axis < 3; ++axis) {
    const int la = n[axis];
    const std::int64_t s = stride[axis];
    const int nb = n[(axis + 1) % 3], nc = n[(axis + 2) % 3];
    const std::int64_t sb = stride[(axis + 1) % 3], sc = stride[(axis + 2) % 3];
    line.resize(std::size_t(la));
    for (int c = 0; c < nc; ++c)
      for (int b = 0; b < nb; ++b) {
        double* base = g.v.data() + b * sb + c * sc;
        for (int a = 0; a < la; ++a) line[std::size_t(a)] = base[a * s];
        for (int a = 0; a < la; ++a) {
          double acc = 0.0;
          for (int j = -radius; j <= radius; ++j) {
            const int aa = a + j;
            if (aa >= 0 && aa < la) acc += kernel[std::size_t(j + radius)] * line[std::size_t(aa)];
          }
          base[a * s] = acc;
        }
      }
  }
}

// Rescales to zero mean / unit variance over the whole grid.
void standardize(Grid3& g) {
  double mean = 0.0;
  for (double x : g.v) mean += x;
  mean /= double(g.v.size());
  double var = 0.0;
  for (double x : g.v) var += (x - mean) * (x - mean);
  var /= double(g.v.size());
  if (var == 0.0) {
    for (auto& x : g.v) x = 0.0;
    return;
  }
  const double inv_sd = 1.0 / std::sqrt(var);
  for (auto& x : g.v) x = (x - mean) * inv_sd;
}

Grid3 correlated_field(const Dims& dims, double sigma, Rng rng) {
  Grid3 g = white_noise(dims, rng);
  smooth_separable(g, sigma);
  standardize(g);
  return g;
}

}  // namespace

std::string to_string(PhantomShape s) {
  switch (s) {
    case PhantomShape::ball: return "ball";
    case PhantomShape::ellipsoid: return "ellipsoid";
    case PhantomShape::blob: return "blob";
  }
  return "ball";
}

PhantomShape phantom_shape_from(const std::string& text) {
  if (text == "ball") return PhantomShape::ball;
  if (text == "ellipsoid") return PhantomShape::ellipsoid;
  if (text == "blob") return PhantomShape::blob;
  throw_input("unknown phantom shape '" + text + "'");
}

void PhantomSpec::validate() const {
  if (dims.nx < 3 || dims.ny < 3 || dims.nz < 3)
    throw_input("phantom dims must be at least 3 voxels per axis");
  if (!(spacing.sx > 0.0) || !(spacing.sy > 0.0) || !(spacing.sz > 0.0))
    throw_input("phantom spacing must be positive");
  if (!(radius_vox >= 1.0)) throw_input("phantom radius must be >= 1 voxel");
  if (!(noise_sd >= 0.0)) throw_input("phantom noise_sd must be >= 0");
  if (!(texture_scale >= 0.0)) throw_input("phantom texture_scale must be >= 0");

  // The shape (including blob modulation headroom) has to fit inside the grid.
  const double margin = shape == PhantomShape::blob ? 1.0 + kBlobDepth : 1.0;
  const double rx = radius_vox * margin;
  const double ry = (shape == PhantomShape::ellipsoid ? 0.75 : 1.0) * radius_vox * margin;
  const double rz = (shape == PhantomShape::ellipsoid ? 0.6 : 1.0) * radius_vox * margin;
  if (rx > (dims.nx - 1) / 2.0 || ry > (dims.ny - 1) / 2.0 || rz > (dims.nz - 1) / 2.0)
    throw_input("phantom radius does not fit inside dims");
}

PhantomPair generate_pair(const PhantomSpec& spec) {
  spec.validate();
  const Dims dims = spec.dims;
  const double cx = (dims.nx - 1) / 2.0;
  const double cy = (dims.ny - 1) / 2.0;
  const double cz = (dims.nz - 1) / 2.0;

  const Grid3 texture =
      correlated_field(dims, spec.texture_scale, Rng::from(spec.seed, kStreamTexture));

  Grid3 blob_field;
  if (spec.shape == PhantomShape::blob)
    blob_field = correlated_field(dims, std::max(2.0, spec.texture_scale),
                                  Rng::from(spec.seed, kStreamBlobShape));

  PhantomPair out;
  out.mask.dims = dims;
  out.mask.voxels.assign(std::size_t(dims.count()), 0);

  std::int64_t idx = 0;
  for (int z = 0; z < dims.nz; ++z)
    for (int y = 0; y < dims.ny; ++y)
      for (int x = 0; x < dims.nx; ++x, ++idx) {
        const double dx = x - cx, dy = y - cy, dz = z - cz;
        bool inside = false;
        switch (spec.shape) {
          case PhantomShape::ball: {
            inside = dx * dx + dy * dy + dz * dz <= spec.radius_vox * spec.radius_vox;
            break;
          }
          case PhantomShape::ellipsoid: {
            const double ax = spec.radius_vox, ay = 0.75 * spec.radius_vox,
                         az = 0.6 * spec.radius_vox;
            inside = (dx / ax) * (dx / ax) + (dy / ay) * (dy / ay) +
                         (dz / az) * (dz / az) <=
                     1.0;
            break;
          }
          case PhantomShape::blob: {
            const double r_eff =
                spec.radius_vox * (1.0 + kBlobDepth * std::tanh(blob_field.at(idx)));
            inside = dx * dx + dy * dy + dz * dz <= r_eff * r_eff;
            break;
          }
        }
        if (inside) out.mask.voxels[std::size_t(idx)] = 1;
      }
  out.mask.recount();
  if (out.mask.voxel_count == 0) throw_input("phantom produced an empty mask");

  auto make_volume = [&](std::uint64_t noise_stream) {
    Volume v;
    v.dims = dims;
    v.spacing = spec.spacing;
    v.unit = IntensityUnit::arbitrary;
    v.voxels.assign(std::size_t(dims.count()), 0.0);
    Rng noise = Rng::from(spec.seed, noise_stream);
    for (std::int64_t i = 0; i < dims.count(); ++i) {
      const double g = noise.next_gaussian();  // drawn for every voxel so the
                                               // stream does not depend on the mask
      if (!out.mask.voxels[std::size_t(i)]) continue;
      const double value = spec.base_intensity *
                               (1.0 + kTextureAmplitude * texture.at(i)) +
                           spec.noise_sd * g;
      v.voxels[std::size_t(i)] = value;
    }
    return v;
  };
  out.test = make_volume(kStreamNoiseTest);
  out.retest = make_volume(kStreamNoiseRetest);
  return out;
}

std::string phantom_spec_to_json(const PhantomSpec& spec) {
  nlohmann::ordered_json j;
  j["dims"] = {spec.dims.nx, spec.dims.ny, spec.dims.nz};
  j["spacing_mm"] = {spec.spacing.sx, spec.spacing.sy, spec.spacing.sz};
  j["shape"] = to_string(spec.shape);
  j["radius_vox"] = spec.radius_vox;
  j["base_intensity"] = spec.base_intensity;
  j["texture_scale"] = spec.texture_scale;
  j["noise_sd"] = spec.noise_sd;
  j["seed"] = spec.seed;
  return j.dump(2) + "\n";
}

PhantomSpec phantom_spec_from_json(const std::string& text) {
  PhantomSpec spec;
  try {
    auto j = nlohmann::ordered_json::parse(text);
    auto dims = j.at("dims");
    spec.dims = Dims{dims.at(0).get<int>(), dims.at(1).get<int>(), dims.at(2).get<int>()};
    auto sp = j.at("spacing_mm");
    spec.spacing = Spacing{sp.at(0).get<double>(), sp.at(1).get<double>(),
                           sp.at(2).get<double>()};
    spec.shape = phantom_shape_from(j.at("shape").get<std::string>());
    spec.radius_vox = j.at("radius_vox").get<double>();
    spec.base_intensity = j.at("base_intensity").get<double>();
    spec.texture_scale = j.at("texture_scale").get<double>();
    spec.noise_sd = j.at("noise_sd").get<double>();
    spec.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw_input(std::string("malformed phantom spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

}  // namespace radiomics
