// test_texture.cpp : GLCM/NGTDM/GLZSM builders and features vs oracles
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "radiomics/texture.hpp"
#include "test_util.hpp"

using namespace radiomics;

namespace {

QuantizedRoi line_roi(const std::vector<int>& levels, int level_count) {
  QuantizedRoi roi;
  roi.spacing = {1, 1, 1};
  roi.level_count = level_count;
  roi.levels = levels;
  for (std::size_t i = 0; i < levels.size(); ++i)
    roi.coords.push_back(Coord{int(i), 0, 0});
  return roi;
}

// Reference NGTDM feature evaluation straight from the (s, n, p) arrays.
std::map<std::string, double> reference_ngtdm(const Ngtdm& t) {
  const double eps = 1e-6;
  const double n = double(t.valid_voxels);
  const int g = t.levels;
  double ps = 0, ssum = 0;
  int active = 0;
  for (int i = 0; i < g; ++i) {
    ps += t.p[std::size_t(i)] * t.s[std::size_t(i)];
    ssum += t.s[std::size_t(i)];
    if (t.n[std::size_t(i)] > 0) active++;
  }
  double contrast = 0;
  if (active > 1) {
    double acc = 0;
    for (int i = 1; i <= g; ++i)
      for (int j = 1; j <= g; ++j)
        if (t.p[std::size_t(i - 1)] > 0 && t.p[std::size_t(j - 1)] > 0)
          acc += t.p[std::size_t(i - 1)] * t.p[std::size_t(j - 1)] * (i - j) * (i - j);
    contrast = acc / (double(active) * (active - 1)) * (ssum / n);
  }
  double busy_den = 0, complexity = 0, strength = 0;
  for (int i = 1; i <= g; ++i)
    for (int j = 1; j <= g; ++j) {
      if (i == j) continue;
      const double pi = t.p[std::size_t(i - 1)], pj = t.p[std::size_t(j - 1)];
      if (pi <= 0 || pj <= 0) continue;
      busy_den += std::abs(i * pi - j * pj);
      complexity += std::abs(i - j) *
                    (pi * t.s[std::size_t(i - 1)] + pj * t.s[std::size_t(j - 1)]) /
                    (n * (pi + pj));
      strength += (pi + pj) * (i - j) * (i - j);
    }
  return {{"coarseness", std::min(1e6, 1.0 / (eps + ps))},
          {"contrast", contrast},
          {"busyness", ps / (eps + busy_den)},
          {"complexity", complexity},
          {"strength", strength / (eps + ssum)}};
}

}  // namespace

TEST_CASE("glcm on tiny fixtures") {
  SUBCASE("2x1x1 levels (1,2)") {
    const Glcm g = build_glcm(line_roi({1, 2}, 2));
    CHECK(g.at(1, 2) == 0.5);
    CHECK(g.at(2, 1) == 0.5);
    CHECK(g.at(1, 1) == 0.0);
    CHECK(g.at(2, 2) == 0.0);
  }
  SUBCASE("constant connected roi concentrates on the diagonal") {
    const Glcm g = build_glcm(line_roi({3, 3, 3}, 4));
    CHECK(g.at(3, 3) == 1.0);
  }
  SUBCASE("3x1x1 levels (1,2,3)") {
    const Glcm g = build_glcm(line_roi({1, 2, 3}, 3));
    CHECK(g.at(1, 2) == 0.25);
    CHECK(g.at(2, 1) == 0.25);
    CHECK(g.at(2, 3) == 0.25);
    CHECK(g.at(3, 2) == 0.25);
    CHECK(g.at(1, 3) == 0.0);
  }
  SUBCASE("single voxel has no pairs") {
    CHECK_THROWS_AS(build_glcm(line_roi({1}, 2)), Error);
  }
}

TEST_CASE("glcm features on known matrices") {
  SUBCASE("single diagonal entry") {
    const auto f = glcm_features(build_glcm(line_roi({2, 2}, 3))).values;
    CHECK(f.at("entropy") == 0.0);
    CHECK(f.at("asm") == 1.0);
    CHECK(f.at("contrast") == 0.0);
    CHECK(f.at("dissimilarity") == 0.0);
    CHECK(f.at("idm") == 1.0);
    CHECK(f.at("id") == 1.0);
  }
  SUBCASE("two-level pair matrix") {
    const auto r = glcm_features(build_glcm(line_roi({1, 2}, 2)));
    const auto& f = r.values;
    CHECK(f.at("dissimilarity") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.at("contrast") == doctest::Approx(1.0).epsilon(1e-12));
    // p(1,2)=p(2,1)=0.5: mu=1.5, var=0.25, E[ij]=2 -> correlation -1
    CHECK(f.at("correlation") == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(f.at("entropy") == doctest::Approx(1.0).epsilon(1e-12));
    // p_{x+y}(3)=1 -> save=3, svar=0, sent=0
    CHECK(f.at("save") == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(f.at("svar") == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(f.at("sent") == doctest::Approx(0.0).epsilon(1e-12));
    // p_{|x-y|}(1)=1 -> dvar=0, dent=0
    CHECK(f.at("dvar") == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(f.at("dent") == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_FALSE(r.degenerate_correlation);
  }
  SUBCASE("uniform 2x2 matrix") {
    // 4-voxel line 1,2,1,2 gives p = 1/6 off-diagonal... build directly instead
    Glcm g;
    g.levels = 2;
    g.total_pairs = 4;
    g.p = {0.25, 0.25, 0.25, 0.25};
    const auto f = glcm_features(g).values;
    CHECK(f.at("entropy") == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f.at("asm") == doctest::Approx(0.25).epsilon(1e-12));
    // independent marginals: ic = 0, correlation = 0
    CHECK(f.at("ic") == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(f.at("correlation") == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("degenerate correlation flag") {
    const auto r = glcm_features(build_glcm(line_roi({2, 2, 2}, 2)));
    CHECK(r.degenerate_correlation);
    CHECK(r.values.at("correlation") == 0.0);
  }
}

TEST_CASE("ngtdm on tiny fixtures") {
  SUBCASE("constant roi has zero deviations") {
    const Ngtdm t = build_ngtdm(line_roi({2, 2, 2}, 3));
    for (double s : t.s) CHECK(s == 0.0);
    CHECK(t.valid_voxels == 3);
  }
  SUBCASE("two-voxel two-level roi") {
    const Ngtdm t = build_ngtdm(line_roi({1, 2}, 2));
    CHECK(t.s[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t.s[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t.p[0] == 0.5);
    CHECK(t.p[1] == 0.5);
  }
  SUBCASE("single voxel roi is an error") {
    CHECK_THROWS_AS(build_ngtdm(line_roi({1}, 2)), Error);
  }
}

TEST_CASE("ngtdm features") {
  SUBCASE("constant roi: zero contrast, capped coarseness") {
    const auto f = ngtdm_features(build_ngtdm(line_roi({2, 2, 2, 2}, 2)));
    CHECK(f.at("contrast") == 0.0);
    CHECK(f.at("coarseness") == 1e6);
  }
  SUBCASE("two-level example against hand-computed values") {
    const auto f = ngtdm_features(build_ngtdm(line_roi({1, 2}, 2)));
    CHECK(f.at("coarseness") == doctest::Approx(1.0 / (1.0 + 1e-6)).epsilon(1e-12));
    CHECK(f.at("contrast") == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(f.at("busyness") == doctest::Approx(1.0 / (1.0 + 1e-6)).epsilon(1e-12));
    CHECK(f.at("complexity") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.at("strength") == doctest::Approx(2.0 / (2.0 + 1e-6)).epsilon(1e-12));
  }
  SUBCASE("single active level has zero contrast") {
    const auto f = ngtdm_features(build_ngtdm(line_roi({3, 3}, 5)));
    CHECK(f.at("contrast") == 0.0);
  }
  SUBCASE("matches the reference evaluator on random rois") {
    std::mt19937_64 rng(57);
    for (int rep = 0; rep < 25; ++rep) {
      const QuantizedRoi roi = oracles::random_roi(rng);
      Ngtdm t;
      try {
        t = build_ngtdm(roi);
      } catch (const Error&) {
        continue;
      }
      const auto got = ngtdm_features(t);
      const auto want = reference_ngtdm(t);
      for (const auto& [k, v] : want)
        CHECK(got.at(k) == doctest::Approx(v).epsilon(1e-9));
    }
  }
}

TEST_CASE("glzsm on tiny fixtures") {
  SUBCASE("constant connected roi is a single zone") {
    const Glzsm z = build_glzsm(line_roi({2, 2, 2, 2, 2}, 3));
    CHECK(z.total_zones == 1);
    CHECK(z.zones[1].at(5) == 1);
  }
  SUBCASE("all-distinct levels make size-1 zones") {
    const Glzsm z = build_glzsm(line_roi({1, 2, 3, 4}, 4));
    CHECK(z.total_zones == 4);
    for (int lev = 1; lev <= 4; ++lev) CHECK(z.zones[std::size_t(lev - 1)].at(1) == 1);
  }
  SUBCASE("diagonal-only contact is one zone under 26-connectivity") {
    QuantizedRoi roi;
    roi.spacing = {1, 1, 1};
    roi.level_count = 2;
    roi.coords = {Coord{0, 0, 0}, Coord{1, 1, 1}};
    roi.levels = {2, 2};
    const Glzsm z = build_glzsm(roi);
    CHECK(z.total_zones == 1);
    CHECK(z.zones[1].at(2) == 1);
  }
}

TEST_CASE("glzsm features on known matrices") {
  SUBCASE("single zone of size N") {
    const int n = 6;
    const auto f = glzsm_features(build_glzsm(line_roi(std::vector<int>(n, 2), 3)));
    CHECK(f.at("szse") == doctest::Approx(1.0 / (n * n)).epsilon(1e-12));
    CHECK(f.at("lzse") == doctest::Approx(double(n) * n).epsilon(1e-12));
    CHECK(f.at("zsp") == doctest::Approx(1.0 / n).epsilon(1e-12));
    CHECK(f.at("glnu") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.at("zsnu") == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("all-distinct levels") {
    const int n = 5;
    const auto f = glzsm_features(build_glzsm(line_roi({1, 2, 3, 4, 5}, 5)));
    CHECK(f.at("szse") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.at("zsp") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.at("glnu") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.at("zsnu") == doctest::Approx(double(n)).epsilon(1e-12));
  }
  SUBCASE("two zones: level 1 size 1 and level 2 size 3") {
    // levels (1,2,2,2) on a line: zone {1}x1 and zone {2}x3
    const auto f = glzsm_features(build_glzsm(line_roi({1, 2, 2, 2}, 2)));
    CHECK(f.at("szse") == doctest::Approx(5.0 / 9.0).epsilon(1e-12));
  }
}

TEST_CASE("builders match brute-force oracles exactly") {
  std::mt19937_64 rng(97);
  int glcm_checked = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const QuantizedRoi roi = oracles::random_roi(rng);
    CHECK(oracles::glzsm_equal(build_glzsm(roi), oracles::brute_glzsm(roi)));
    CHECK(oracles::ngtdm_equal(build_ngtdm(roi), oracles::brute_ngtdm(roi)));
    CHECK(oracles::glcm_equal(build_glcm(roi), oracles::brute_glcm(roi)));
    ++glcm_checked;
  }
  CHECK(glcm_checked == 200);
}

TEST_CASE("glcm symmetry and normalization hold") {
  std::mt19937_64 rng(101);
  for (int rep = 0; rep < 30; ++rep) {
    const QuantizedRoi roi = oracles::random_roi(rng);
    const Glcm g = build_glcm(roi);
    double sum = 0.0;
    for (int i = 1; i <= g.levels; ++i)
      for (int j = 1; j <= g.levels; ++j) {
        CHECK(g.at(i, j) == g.at(j, i));
        sum += g.at(i, j);
      }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("glzsm mass identities") {
  std::mt19937_64 rng(103);
  for (int rep = 0; rep < 30; ++rep) {
    const QuantizedRoi roi = oracles::random_roi(rng);
    const Glzsm z = build_glzsm(roi);
    long long zones = 0, voxels = 0;
    for (const auto& row : z.zones)
      for (const auto& [size, count] : row) {
        zones += count;
        voxels += size * count;
      }
    CHECK(zones == z.total_zones);
    CHECK(voxels == z.roi_voxels);
    CHECK(voxels == (long long)roi.size());
  }
}

TEST_CASE("level permutation permutes the glcm and fixes asm/entropy") {
  std::mt19937_64 rng(107);
  for (int rep = 0; rep < 10; ++rep) {
    const QuantizedRoi roi = oracles::random_roi(rng, 5, 6);
    std::vector<int> perm = {1, 2, 3, 4, 5, 6};
    std::shuffle(perm.begin(), perm.end(), rng);
    QuantizedRoi permuted = roi;
    for (auto& lev : permuted.levels) lev = perm[std::size_t(lev - 1)];

    const Glcm a = build_glcm(roi);
    const Glcm b = build_glcm(permuted);
    for (int i = 1; i <= 6; ++i)
      for (int j = 1; j <= 6; ++j)
        CHECK(b.at(perm[std::size_t(i - 1)], perm[std::size_t(j - 1)]) == a.at(i, j));

    const auto fa = glcm_features(a).values;
    const auto fb = glcm_features(b).values;
    CHECK(fa.at("asm") == doctest::Approx(fb.at("asm")).epsilon(1e-12));
    CHECK(fa.at("entropy") == doctest::Approx(fb.at("entropy")).epsilon(1e-12));
  }
}

TEST_CASE("fixed-bin texture features are affine invariant") {
  std::mt19937_64 rng(109);
  std::uniform_real_distribution<double> val(0.0, 30.0);
  std::uniform_real_distribution<double> ad(0.1, 10.0);
  std::uniform_real_distribution<double> bd(-100.0, 100.0);
  const int bins = 8;

  int tested = 0;
  while (tested < 20) {
    RoiSample roi;
    roi.spacing = {1, 1, 1};
    for (int z = 0; z < 3; ++z)
      for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x) {
          roi.coords.push_back(Coord{x, y, z});
          roi.intensities.push_back(val(rng));
        }
    const double lo = roi.min_intensity(), hi = roi.max_intensity();
    bool near_tie = false;
    for (double v : roi.intensities) {
      const double t = bins * (v - lo) / (hi - lo);
      if (std::abs(t - std::round(t)) < 1e-6 && v != lo && v != hi) near_tie = true;
    }
    if (near_tie) continue;

    RoiSample mapped = roi;
    const double a = ad(rng), b = bd(rng);
    for (double& v : mapped.intensities) v = a * v + b;

    const QuantizedRoi q0 = quantize_fixed_bins(roi, bins);
    const QuantizedRoi q1 = quantize_fixed_bins(mapped, bins);
    REQUIRE(q0.levels == q1.levels);

    const auto f0 = glcm_features(build_glcm(q0)).values;
    const auto f1 = glcm_features(build_glcm(q1)).values;
    for (const auto& [k, v] : f0) CHECK(f1.at(k) == doctest::Approx(v).epsilon(1e-9));
    const auto n0 = ngtdm_features(build_ngtdm(q0));
    const auto n1 = ngtdm_features(build_ngtdm(q1));
    for (const auto& [k, v] : n0) CHECK(n1.at(k) == doctest::Approx(v).epsilon(1e-9));
    const auto z0 = glzsm_features(build_glzsm(q0));
    const auto z1 = glzsm_features(build_glzsm(q1));
    for (const auto& [k, v] : z0) CHECK(z1.at(k) == doctest::Approx(v).epsilon(1e-9));
    ++tested;
  }
}
