// texture.cpp : co-occurrence, grey-tone difference, and zone size matrices
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

#include "radiomics/texture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace radiomics {

namespace {

constexpr double kEps = 1e-6;
constexpr double kCoarsenessCap = 1e6;

inline double log2_safe(double p) { return p > 0.0 ? std::log2(p) : 0.0; }

// The 13 unique offsets at Chebyshev distance 1 (half of the 26-neighborhood).
constexpr int kHalfOffsets[13][3] = {
    {1, 0, 0},  {0, 1, 0},  {0, 0, 1},  {1, 1, 0},  {1, -1, 0},
    {1, 0, 1},  {1, 0, -1}, {0, 1, 1},  {0, 1, -1}, {1, 1, 1},
    {1, 1, -1}, {1, -1, 1}, {1, -1, -1}};

// Dense level lookup over the roi bounding box; 0 marks "not in roi".
struct LevelGrid {
  int x0 = 0, y0 = 0, z0 = 0;
  int nx = 0, ny = 0, nz = 0;
  std::vector<int> level;

  static LevelGrid build(const QuantizedRoi& roi) {
    LevelGrid g;
    int x1 = std::numeric_limits<int>::min(), y1 = x1, z1 = x1;
    g.x0 = std::numeric_limits<int>::max();
    g.y0 = g.x0;
    g.z0 = g.x0;
    for (const Coord& c : roi.coords) {
      g.x0 = std::min(g.x0, c.x);
      g.y0 = std::min(g.y0, c.y);
      g.z0 = std::min(g.z0, c.z);
      x1 = std::max(x1, c.x);
      y1 = std::max(y1, c.y);
      z1 = std::max(z1, c.z);
    }
    g.nx = x1 - g.x0 + 1;
    g.ny = y1 - g.y0 + 1;
    g.nz = z1 - g.z0 + 1;
    g.level.assign(std::size_t(g.nx) * g.ny * g.nz, 0);
    for (std::size_t i = 0; i < roi.coords.size(); ++i)
      g.ref(roi.coords[i]) = roi.levels[i];
    return g;
  }

  int& ref(const Coord& c) {
    return level[std::size_t(c.x - x0) +
                 std::size_t(nx) * (std::size_t(c.y - y0) + std::size_t(ny) * std::size_t(c.z - z0))];
  }
  int at(int x, int y, int z) const {
    x -= x0;
    y -= y0;
    z -= z0;
    if (x < 0 || x >= nx || y < 0 || y >= ny || z < 0 || z >= nz) return 0;
    return level[std::size_t(x) + std::size_t(nx) * (std::size_t(y) + std::size_t(ny) * std::size_t(z))];
  }
};

void check_roi(const QuantizedRoi& roi) {
  if (roi.size() == 0) throw_computation("texture: empty roi");
  if (roi.level_count < 1) throw_computation("texture: invalid level count");
  if (roi.levels.size() != roi.coords.size())
    throw_computation("texture: levels/coords length mismatch");
  for (int lev : roi.levels)
    if (lev < 1 || lev > roi.level_count)
      throw_computation("texture: level " + std::to_string(lev) +
                        " outside [1, " + std::to_string(roi.level_count) + "]");
}

}  // namespace

const std::array<const char*, 15> kGlcmFeatureNames = {
    "asm",  "contrast", "correlation", "dissimilarity", "entropy",
    "idm",  "id",       "sosv",        "save",          "svar",
    "sent", "dvar",     "dent",        "ic",            "cp"};
const std::array<const char*, 5> kNgtdmFeatureNames = {
    "coarseness", "contrast", "busyness", "complexity", "strength"};
const std::array<const char*, 11> kGlzsmFeatureNames = {
    "szse",  "lzse",  "zsnu",  "glnu",  "zsp",  "lglze",
    "hglze", "szlge", "szhge", "lzlge", "lzhge"};

///////////////////////////////////////////////////////////////////////////
//                              Builders                                 //
///////////////////////////////////////////////////////////////////////////

Glcm build_glcm(const QuantizedRoi& roi) {
  check_roi(roi);
  const LevelGrid grid = LevelGrid::build(roi);
  const int g = roi.level_count;

  std::vector<long long> counts(std::size_t(g) * std::size_t(g), 0);
  long long total = 0;
  for (std::size_t i = 0; i < roi.coords.size(); ++i) {
    const Coord& c = roi.coords[i];
    const int a = roi.levels[i];
    for (const auto& d : kHalfOffsets) {
      const int b = grid.at(c.x + d[0], c.y + d[1], c.z + d[2]);
      if (b == 0) continue;
      counts[std::size_t(a - 1) * std::size_t(g) + std::size_t(b - 1)]++;
      counts[std::size_t(b - 1) * std::size_t(g) + std::size_t(a - 1)]++;
      total += 2;
    }
  }
  if (total == 0)
    throw_computation("glcm: roi has no neighboring voxel pairs");

  Glcm out;
  out.levels = g;
  out.total_pairs = total;
  out.p.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    out.p[i] = double(counts[i]) / double(total);
  return out;
}

Ngtdm build_ngtdm(const QuantizedRoi& roi) {
  check_roi(roi);
  const LevelGrid grid = LevelGrid::build(roi);
  const int g = roi.level_count;

  Ngtdm out;
  out.levels = g;
  out.s.assign(std::size_t(g), 0.0);
  out.n.assign(std::size_t(g), 0);

  for (std::size_t i = 0; i < roi.coords.size(); ++i) {
    const Coord& c = roi.coords[i];
    long long sum = 0;
    int count = 0;
    for (int dz = -1; dz <= 1; ++dz)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0 && dz == 0) continue;
          const int b = grid.at(c.x + dx, c.y + dy, c.z + dz);
          if (b == 0) continue;
          sum += b;
          ++count;
        }
    if (count == 0) continue;  // isolated voxel: excluded from n and p
    const double mean = double(sum) / double(count);
    const int a = roi.levels[i];
    out.s[std::size_t(a - 1)] += std::abs(double(a) - mean);
    out.n[std::size_t(a - 1)]++;
    out.valid_voxels++;
  }
  if (out.valid_voxels == 0)
    throw_computation("ngtdm: all roi voxels are isolated");

  out.p.resize(out.n.size());
  for (std::size_t i = 0; i < out.n.size(); ++i)
    out.p[i] = double(out.n[i]) / double(out.valid_voxels);
  return out;
}

Glzsm build_glzsm(const QuantizedRoi& roi) {
  check_roi(roi);
  LevelGrid grid = LevelGrid::build(roi);

  Glzsm out;
  out.levels = roi.level_count;
  out.zones.resize(std::size_t(roi.level_count));
  out.roi_voxels = (long long)roi.size();

  // Flood fill of equal-level 26-connected components; visited voxels are
  // cleared in the grid copy.
  std::vector<Coord> stack;
  for (std::size_t i = 0; i < roi.coords.size(); ++i) {
    const Coord seed = roi.coords[i];
    const int lev = grid.at(seed.x, seed.y, seed.z);
    if (lev == 0) continue;  // already swallowed by an earlier zone
    long long size = 0;
    stack.clear();
    stack.push_back(seed);
    grid.ref(seed) = 0;
    while (!stack.empty()) {
      const Coord c = stack.back();
      stack.pop_back();
      ++size;
      for (int dz = -1; dz <= 1; ++dz)
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0 && dz == 0) continue;
            const Coord w{c.x + dx, c.y + dy, c.z + dz};
            if (grid.at(w.x, w.y, w.z) == lev) {
              grid.ref(w) = 0;
              stack.push_back(w);
            }
          }
    }
    out.zones[std::size_t(lev - 1)][size]++;
    out.total_zones++;
  }
  return out;
}

///////////////////////////////////////////////////////////////////////////
//                              Features                                 //
///////////////////////////////////////////////////////////////////////////

GlcmFeatures glcm_features(const Glcm& g) {
  if (g.levels < 1 || g.p.empty())
    throw_computation("glcm_features: invalid matrix");
  const int G = g.levels;

  std::vector<double> px(std::size_t(G), 0.0);
  std::vector<double> psum(std::size_t(2 * G + 1), 0.0);   // index i+j in [2, 2G]
  std::vector<double> pdiff(std::size_t(G), 0.0);          // index |i-j| in [0, G-1]

  double asm_ = 0.0, contrast = 0.0, dissim = 0.0, entropy = 0.0;
  double idm = 0.0, id = 0.0;
  for (int i = 1; i <= G; ++i) {
    for (int j = 1; j <= G; ++j) {
      const double p = g.at(i, j);
      if (p == 0.0) continue;
      px[std::size_t(i - 1)] += p;
      psum[std::size_t(i + j)] += p;
      pdiff[std::size_t(std::abs(i - j))] += p;
      asm_ += p * p;
      contrast += p * double(i - j) * double(i - j);
      dissim += p * std::abs(i - j);
      entropy -= p * log2_safe(p);
      idm += p / (1.0 + double(i - j) * double(i - j));
      id += p / (1.0 + std::abs(i - j));
    }
  }

  double mu = 0.0;
  for (int i = 1; i <= G; ++i) mu += double(i) * px[std::size_t(i - 1)];
  double var = 0.0;
  for (int i = 1; i <= G; ++i)
    var += (double(i) - mu) * (double(i) - mu) * px[std::size_t(i - 1)];

  GlcmFeatures out;

  // correlation over the symmetric matrix (marginals coincide)
  double corr = 0.0;
  if (var > 0.0) {
    double cross = 0.0;
    for (int i = 1; i <= G; ++i)
      for (int j = 1; j <= G; ++j) {
        const double p = g.at(i, j);
        if (p != 0.0) cross += double(i) * double(j) * p;
      }
    corr = (cross - mu * mu) / var;
  } else {
    out.degenerate_correlation = true;
  }

  // sum of squares variance about the marginal mean
  double sosv = 0.0;
  for (int i = 1; i <= G; ++i)
    for (int j = 1; j <= G; ++j) {
      const double p = g.at(i, j);
      if (p != 0.0) sosv += (double(i) - mu) * (double(i) - mu) * p;
    }

  double save = 0.0, sent = 0.0;
  for (int k = 2; k <= 2 * G; ++k) {
    const double p = psum[std::size_t(k)];
    if (p == 0.0) continue;
    save += double(k) * p;
    sent -= p * log2_safe(p);
  }
  double svar = 0.0;
  for (int k = 2; k <= 2 * G; ++k) {
    const double p = psum[std::size_t(k)];
    if (p != 0.0) svar += (double(k) - save) * (double(k) - save) * p;
  }

  double dmean = 0.0, dent = 0.0;
  for (int k = 0; k < G; ++k) {
    const double p = pdiff[std::size_t(k)];
    if (p == 0.0) continue;
    dmean += double(k) * p;
    dent -= p * log2_safe(p);
  }
  double dvar = 0.0;
  for (int k = 0; k < G; ++k) {
    const double p = pdiff[std::size_t(k)];
    if (p != 0.0) dvar += (double(k) - dmean) * (double(k) - dmean) * p;
  }

  // information correlation 1: (HXY - HXY1) / max(HX, HY)
  double hx = 0.0, hxy1 = 0.0;
  for (int i = 1; i <= G; ++i) hx -= px[std::size_t(i - 1)] * log2_safe(px[std::size_t(i - 1)]);
  for (int i = 1; i <= G; ++i)
    for (int j = 1; j <= G; ++j) {
      const double p = g.at(i, j);
      if (p != 0.0)
        hxy1 -= p * log2_safe(px[std::size_t(i - 1)] * px[std::size_t(j - 1)]);
    }
  const double ic = hx > 0.0 ? (entropy - hxy1) / hx : 0.0;

  double cp = 0.0;
  for (int i = 1; i <= G; ++i)
    for (int j = 1; j <= G; ++j) {
      const double p = g.at(i, j);
      if (p != 0.0) {
        const double d = double(i) + double(j) - 2.0 * mu;
        cp += d * d * d * d * p;
      }
    }

  out.values = {{"asm", asm_},
                {"contrast", contrast},
                {"correlation", corr},
                {"dissimilarity", dissim},
                {"entropy", entropy},
                {"idm", idm},
                {"id", id},
                {"sosv", sosv},
                {"save", save},
                {"svar", svar},
                {"sent", sent},
                {"dvar", dvar},
                {"dent", dent},
                {"ic", ic},
                {"cp", cp}};
  return out;
}

std::map<std::string, double> ngtdm_features(const Ngtdm& t) {
  if (t.levels < 1 || t.valid_voxels < 1)
    throw_computation("ngtdm_features: invalid matrix");
  const int G = t.levels;
  const double n = double(t.valid_voxels);

  double ps_sum = 0.0, s_sum = 0.0;
  int active = 0;
  for (int i = 0; i < G; ++i) {
    ps_sum += t.p[std::size_t(i)] * t.s[std::size_t(i)];
    s_sum += t.s[std::size_t(i)];
    if (t.n[std::size_t(i)] > 0) ++active;
  }

  const double coarseness = std::min(kCoarsenessCap, 1.0 / (kEps + ps_sum));

  double contrast = 0.0;
  if (active > 1) {
    double pair = 0.0;
    for (int i = 1; i <= G; ++i)
      for (int j = 1; j <= G; ++j) {
        const double pi = t.p[std::size_t(i - 1)], pj = t.p[std::size_t(j - 1)];
        if (pi > 0.0 && pj > 0.0) pair += pi * pj * double(i - j) * double(i - j);
      }
    contrast = pair / (double(active) * double(active - 1)) * (s_sum / n);
  }

  double busy_den = 0.0, complexity = 0.0, strength_num = 0.0;
  for (int i = 1; i <= G; ++i) {
    const double pi = t.p[std::size_t(i - 1)];
    if (pi <= 0.0) continue;
    for (int j = 1; j <= G; ++j) {
      const double pj = t.p[std::size_t(j - 1)];
      if (pj <= 0.0 || i == j) continue;
      busy_den += std::abs(double(i) * pi - double(j) * pj);
      complexity += std::abs(i - j) *
                    (pi * t.s[std::size_t(i - 1)] + pj * t.s[std::size_t(j - 1)]) /
                    (n * (pi + pj));
      strength_num += (pi + pj) * double(i - j) * double(i - j);
    }
  }
  const double busyness = ps_sum / (kEps + busy_den);
  const double strength = strength_num / (kEps + s_sum);

  return {{"coarseness", coarseness},
          {"contrast", contrast},
          {"busyness", busyness},
          {"complexity", complexity},
          {"strength", strength}};
}

std::map<std::string, double> glzsm_features(const Glzsm& z) {
  if (z.total_zones < 1) throw_computation("glzsm_features: no zones");
  const double nz = double(z.total_zones);

  double szse = 0.0, lzse = 0.0, glnu = 0.0, lglze = 0.0, hglze = 0.0;
  double szlge = 0.0, szhge = 0.0, lzlge = 0.0, lzhge = 0.0;
  std::map<long long, double> by_size;

  for (int lev = 1; lev <= z.levels; ++lev) {
    const auto& row = z.zones[std::size_t(lev - 1)];
    if (row.empty()) continue;
    const double i2 = double(lev) * double(lev);
    double row_sum = 0.0;
    for (const auto& [size, count] : row) {
      const double c = double(count);
      const double j2 = double(size) * double(size);
      row_sum += c;
      by_size[size] += c;
      szse += c / j2;
      lzse += c * j2;
      lglze += c / i2;
      hglze += c * i2;
      szlge += c / (i2 * j2);
      szhge += c * i2 / j2;
      lzlge += c * j2 / i2;
      lzhge += c * i2 * j2;
    }
    glnu += row_sum * row_sum;
  }
  double zsnu = 0.0;
  for (const auto& [size, count] : by_size) zsnu += count * count;

  return {{"szse", szse / nz},
          {"lzse", lzse / nz},
          {"zsnu", zsnu / nz},
          {"glnu", glnu / nz},
          {"zsp", nz / double(z.roi_voxels)},
          {"lglze", lglze / nz},
          {"hglze", hglze / nz},
          {"szlge", szlge / nz},
          {"szhge", szhge / nz},
          {"lzlge", lzlge / nz},
          {"lzhge", lzhge / nz}};
}

}  // namespace radiomics
