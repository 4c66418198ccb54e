// oracles.hpp : brute-force reference implementations for the test suites.
// These deliberately take different code paths from the library (pair
// enumeration instead of offset tables, union-find instead of flood fill,
// counting ranks instead of sort-based ranks) so agreement means something.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "radiomics/quantization.hpp"
#include "radiomics/stats.hpp"
#include "radiomics/texture.hpp"

namespace oracles {

using radiomics::Coord;
using radiomics::QuantizedRoi;

inline int chebyshev(const Coord& a, const Coord& b) {
  return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
}

// GLCM by enumerating every ordered pair of roi voxels.
inline radiomics::Glcm brute_glcm(const QuantizedRoi& roi) {
  const int g = roi.level_count;
  std::vector<long long> counts(std::size_t(g) * std::size_t(g), 0);
  long long total = 0;
  for (std::size_t i = 0; i < roi.size(); ++i)
    for (std::size_t j = 0; j < roi.size(); ++j) {
      if (i == j) continue;
      if (chebyshev(roi.coords[i], roi.coords[j]) != 1) continue;
      counts[std::size_t(roi.levels[i] - 1) * std::size_t(g) +
             std::size_t(roi.levels[j] - 1)]++;
      total++;
    }
  radiomics::Glcm out;
  out.levels = g;
  out.total_pairs = total;
  out.p.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    out.p[i] = double(counts[i]) / double(total);
  return out;
}

// NGTDM via a coordinate map rather than a dense grid.
inline radiomics::Ngtdm brute_ngtdm(const QuantizedRoi& roi) {
  std::map<Coord, int> lookup;
  for (std::size_t i = 0; i < roi.size(); ++i) lookup[roi.coords[i]] = roi.levels[i];

  radiomics::Ngtdm out;
  out.levels = roi.level_count;
  out.s.assign(std::size_t(roi.level_count), 0.0);
  out.n.assign(std::size_t(roi.level_count), 0);
  for (std::size_t i = 0; i < roi.size(); ++i) {
    long long sum = 0;
    int count = 0;
    for (int dz = -1; dz <= 1; ++dz)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0 && dz == 0) continue;
          auto it = lookup.find(Coord{roi.coords[i].x + dx, roi.coords[i].y + dy,
                                      roi.coords[i].z + dz});
          if (it == lookup.end()) continue;
          sum += it->second;
          ++count;
        }
    if (count == 0) continue;
    const int lev = roi.levels[i];
    out.s[std::size_t(lev - 1)] += std::abs(double(lev) - double(sum) / double(count));
    out.n[std::size_t(lev - 1)]++;
    out.valid_voxels++;
  }
  out.p.resize(out.n.size());
  for (std::size_t i = 0; i < out.n.size(); ++i)
    out.p[i] = out.valid_voxels ? double(out.n[i]) / double(out.valid_voxels) : 0.0;
  return out;
}

// GLZSM via union-find over roi indices.
inline radiomics::Glzsm brute_glzsm(const QuantizedRoi& roi) {
  const std::size_t n = roi.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t(0));
  std::vector<std::size_t> rank(n, 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  auto unite = [&](std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank[a] < rank[b]) std::swap(a, b);
    parent[b] = a;
    if (rank[a] == rank[b]) ++rank[a];
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (roi.levels[i] == roi.levels[j] && chebyshev(roi.coords[i], roi.coords[j]) == 1)
        unite(i, j);

  std::map<std::size_t, long long> component_size;
  for (std::size_t i = 0; i < n; ++i) component_size[find(i)]++;

  radiomics::Glzsm out;
  out.levels = roi.level_count;
  out.zones.resize(std::size_t(roi.level_count));
  out.roi_voxels = (long long)n;
  for (const auto& [root, size] : component_size) {
    out.zones[std::size_t(roi.levels[root] - 1)][size]++;
    out.total_zones++;
  }
  return out;
}

// Spearman via counting ranks and the plain product-moment formula.
inline double brute_spearman_rs(const std::vector<double>& x,
                                const std::vector<double>& y) {
  auto counting_ranks = [](const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      double less = 0, equal = 0;
      for (double w : v) {
        if (w < v[i]) ++less;
        if (w == v[i]) ++equal;
      }
      r[i] = less + (equal + 1.0) / 2.0;
    }
    return r;
  };
  const auto rx = counting_ranks(x), ry = counting_ranks(y);
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += rx[i];
    sy += ry[i];
    sxx += rx[i] * rx[i];
    syy += ry[i] * ry[i];
    sxy += rx[i] * ry[i];
  }
  const double cov = sxy - sx * sy / n;
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  return cov / std::sqrt(vx * vy);
}

// ICC(2,1) via the SST subtraction route (the library uses explicit
// residuals).
inline double brute_icc21(const std::vector<double>& test,
                          const std::vector<double>& retest) {
  const std::size_t n = test.size();
  const double k = 2.0;
  double grand = 0;
  for (std::size_t i = 0; i < n; ++i) grand += test[i] + retest[i];
  grand /= (2.0 * double(n));

  double sst = 0, ssr = 0, ssc = 0;
  double c1 = 0, c2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    c1 += test[i];
    c2 += retest[i];
  }
  c1 /= double(n);
  c2 /= double(n);
  ssc = double(n) * ((c1 - grand) * (c1 - grand) + (c2 - grand) * (c2 - grand));
  for (std::size_t i = 0; i < n; ++i) {
    const double row = 0.5 * (test[i] + retest[i]);
    ssr += k * (row - grand) * (row - grand);
    sst += (test[i] - grand) * (test[i] - grand) +
           (retest[i] - grand) * (retest[i] - grand);
  }
  const double sse = sst - ssr - ssc;
  const double msr = ssr / double(n - 1);
  const double msc = ssc / (k - 1.0);
  const double mse = sse / (double(n - 1) * (k - 1.0));
  return (msr - mse) / (msr + (k - 1.0) * mse + k * (msc - mse) / double(n));
}

// Random roi on a dims <= 6 grid with levels in 1..g_max, guaranteed to
// hold at least one Chebyshev-adjacent pair.
inline QuantizedRoi random_roi(std::mt19937_64& rng, int max_side = 6, int g_max = 8) {
  std::uniform_int_distribution<int> side(2, max_side);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    const int nx = side(rng), ny = side(rng), nz = side(rng);
    std::uniform_int_distribution<int> level(1, g_max);
    QuantizedRoi roi;
    roi.spacing = {1.0, 1.0, 1.0};
    roi.level_count = g_max;
    roi.spec = radiomics::QuantizationSpec::fixed_bins(g_max);
    for (int z = 0; z < nz; ++z)
      for (int y = 0; y < ny; ++y)
        for (int x = 0; x < nx; ++x)
          if (unit(rng) < 0.6) {
            roi.coords.push_back(Coord{x, y, z});
            roi.levels.push_back(level(rng));
          }
    bool has_pair = false;
    for (std::size_t i = 0; i < roi.size() && !has_pair; ++i)
      for (std::size_t j = i + 1; j < roi.size() && !has_pair; ++j)
        if (chebyshev(roi.coords[i], roi.coords[j]) == 1) has_pair = true;
    if (roi.size() >= 2 && has_pair) return roi;
  }
}

inline bool glcm_equal(const radiomics::Glcm& a, const radiomics::Glcm& b) {
  return a.levels == b.levels && a.total_pairs == b.total_pairs && a.p == b.p;
}

inline bool ngtdm_equal(const radiomics::Ngtdm& a, const radiomics::Ngtdm& b) {
  return a.levels == b.levels && a.valid_voxels == b.valid_voxels && a.s == b.s &&
         a.n == b.n && a.p == b.p;
}

inline bool glzsm_equal(const radiomics::Glzsm& a, const radiomics::Glzsm& b) {
  return a.levels == b.levels && a.total_zones == b.total_zones &&
         a.roi_voxels == b.roi_voxels && a.zones == b.zones;
}

}  // namespace oracles
