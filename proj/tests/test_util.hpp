// test_util.hpp : shared fixtures for the test suites
#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "radiomics/grid.hpp"

namespace testutil {

namespace fs = std::filesystem;

// Scratch directory removed on destruction.
class TempDir {
public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    dir_ = fs::temp_directory_path() /
           ("radiomics_" + tag + "_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter.fetch_add(1)));
    fs::create_directories(dir_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  fs::path path(const std::string& name) const { return dir_ / name; }
  const fs::path& dir() const { return dir_; }

private:
  fs::path dir_;
};

inline void write_bytes(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), std::streamsize(bytes.size()));
}

inline std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline radiomics::Mask make_mask(radiomics::Dims dims) {
  radiomics::Mask m;
  m.dims = dims;
  m.voxels.assign(std::size_t(dims.count()), 0);
  return m;
}

inline radiomics::Mask ball_mask(int n, double radius) {
  radiomics::Mask m = make_mask({n, n, n});
  const double c = (n - 1) / 2.0;
  for (int z = 0; z < n; ++z)
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        const double dx = x - c, dy = y - c, dz = z - c;
        if (dx * dx + dy * dy + dz * dz <= radius * radius) m.set(x, y, z, true);
      }
  return m;
}

inline radiomics::Mask box_mask(int n, int side) {
  radiomics::Mask m = make_mask({n, n, n});
  const int o = (n - side) / 2;
  for (int z = o; z < o + side; ++z)
    for (int y = o; y < o + side; ++y)
      for (int x = o; x < o + side; ++x) m.set(x, y, z, true);
  return m;
}

// Random compact blob: thresholded smoothed noise restricted to a ball.
inline radiomics::Mask blob_mask(std::mt19937_64& rng, int n = 24) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> field(std::size_t(n) * n * n);
  for (auto& v : field) v = gauss(rng);
  // crude 3-pass box smoothing
  auto idx = [&](int x, int y, int z) {
    return std::size_t(x) + std::size_t(n) * (std::size_t(y) + std::size_t(n) * z);
  };
  for (int pass = 0; pass < 3; ++pass) {
    std::vector<double> next = field;
    for (int z = 1; z + 1 < n; ++z)
      for (int y = 1; y + 1 < n; ++y)
        for (int x = 1; x + 1 < n; ++x)
          next[idx(x, y, z)] =
              (field[idx(x - 1, y, z)] + field[idx(x + 1, y, z)] +
               field[idx(x, y - 1, z)] + field[idx(x, y + 1, z)] +
               field[idx(x, y, z - 1)] + field[idx(x, y, z + 1)] +
               2.0 * field[idx(x, y, z)]) /
              8.0;
    field = std::move(next);
  }
  const double c = (n - 1) / 2.0;
  const double r = n / 2.0 - 2.0;
  radiomics::Mask m = make_mask({n, n, n});
  for (int z = 0; z < n; ++z)
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        const double dx = x - c, dy = y - c, dz = z - c;
        const double dist2 = dx * dx + dy * dy + dz * dz;
        if (dist2 <= r * r && field[idx(x, y, z)] > -0.35) m.set(x, y, z, true);
      }
  if (m.voxel_count < 150) {
    // fall back to a solid ball so downstream size assumptions hold
    return ball_mask(n, r);
  }
  return m;
}

inline radiomics::RoiSample roi_from(const std::vector<double>& intensities) {
  radiomics::RoiSample roi;
  roi.spacing = {1.0, 1.0, 1.0};
  for (std::size_t i = 0; i < intensities.size(); ++i) {
    roi.coords.push_back(radiomics::Coord{int(i), 0, 0});
    roi.intensities.push_back(intensities[i]);
  }
  return roi;
}

}  // namespace testutil
