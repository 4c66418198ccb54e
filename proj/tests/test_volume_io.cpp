// test_volume_io.cpp : readers, writers, and roi extraction
#include <doctest.h>

#include <cstring>
#include <random>

#include "radiomics/volume_io.hpp"
#include "test_util.hpp"

using namespace radiomics;
using testutil::TempDir;

namespace {

std::string le_doubles(const std::vector<double>& v) {
  std::string bytes(v.size() * 8, '\0');
  std::memcpy(bytes.data(), v.data(), bytes.size());
  return bytes;
}

std::string le_int16(const std::vector<std::int16_t>& v) {
  std::string bytes(v.size() * 2, '\0');
  std::memcpy(bytes.data(), v.data(), bytes.size());
  return bytes;
}

}  // namespace

TEST_CASE("raw_json identity fixture loads") {
  TempDir tmp("vio");
  testutil::write_bytes(tmp.path("zeros.json"),
                        R"({"dims":[3,3,3],"spacing_mm":[1,1,1],"dtype":"f64","unit":"SUV"})");
  testutil::write_bytes(tmp.path("zeros.raw"), le_doubles(std::vector<double>(27, 0.0)));

  const Volume v = load_volume(tmp.path("zeros.json"), VolumeFormat::raw_json);
  CHECK(v.dims == Dims{3, 3, 3});
  CHECK(v.unit == IntensityUnit::suv);
  CHECK(v.voxels.size() == 27);
  for (double x : v.voxels) CHECK(x == 0.0);
}

TEST_CASE("hand-written NRRD reads in x-fastest order") {
  TempDir tmp("vio");
  std::string header =
      "NRRD0004\n"
      "type: short\n"
      "dimension: 3\n"
      "sizes: 2 2 2\n"
      "space directions: (4.07,0,0) (0,4.07,0) (0,0,5.0)\n"
      "endian: little\n"
      "encoding: raw\n"
      "\n";
  testutil::write_bytes(tmp.path("asc.nrrd"),
                        header + le_int16({0, 1, 2, 3, 4, 5, 6, 7}));

  const Volume v = load_volume(tmp.path("asc.nrrd"));
  CHECK(v.spacing.sx == doctest::Approx(4.07));
  CHECK(v.spacing.sz == doctest::Approx(5.0));
  CHECK(v.at(1, 0, 0) == 1.0);
  CHECK(v.at(0, 1, 0) == 2.0);
  CHECK(v.at(0, 0, 1) == 4.0);
  CHECK(v.at(1, 1, 1) == 7.0);
}

TEST_CASE("payload size mismatch is rejected") {
  TempDir tmp("vio");
  testutil::write_bytes(tmp.path("bad.json"),
                        R"({"dims":[3,3,3],"spacing_mm":[1,1,1],"dtype":"f64"})");
  testutil::write_bytes(tmp.path("bad.raw"), le_doubles(std::vector<double>(26, 0.0)));
  CHECK_THROWS_AS(load_volume(tmp.path("bad.json")), Error);
}

TEST_CASE("NaN payload is rejected with its position") {
  TempDir tmp("vio");
  std::vector<double> payload(8, 1.0);
  payload[5] = std::numeric_limits<double>::quiet_NaN();
  testutil::write_bytes(tmp.path("nan.json"),
                        R"({"dims":[2,2,2],"spacing_mm":[1,1,1],"dtype":"f64"})");
  testutil::write_bytes(tmp.path("nan.raw"), le_doubles(payload));
  try {
    load_volume(tmp.path("nan.json"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("5") != std::string::npos);
  }
}

TEST_CASE("malformed NRRD headers are rejected") {
  TempDir tmp("vio");
  testutil::write_bytes(tmp.path("bad.nrrd"), "NOTNRRD\nfoo\n\n");
  CHECK_THROWS_AS(load_volume(tmp.path("bad.nrrd")), Error);

  testutil::write_bytes(tmp.path("gz.nrrd"),
                        "NRRD0004\ntype: short\ndimension: 3\nsizes: 1 1 1\n"
                        "space directions: (1,0,0) (0,1,0) (0,0,1)\n"
                        "endian: little\nencoding: gzip\n\n..");
  CHECK_THROWS_AS(load_volume(tmp.path("gz.nrrd")), Error);
}

TEST_CASE("mask loading") {
  TempDir tmp("vio");

  SUBCASE("five nonzero voxels") {
    std::vector<double> payload(27, 0.0);
    for (int i : {0, 3, 9, 13, 26}) payload[std::size_t(i)] = double(i % 7 + 1);
    testutil::write_bytes(tmp.path("m.json"),
                          R"({"dims":[3,3,3],"spacing_mm":[1,1,1],"dtype":"f64"})");
    testutil::write_bytes(tmp.path("m.raw"), le_doubles(payload));
    CHECK(load_mask(tmp.path("m.json")).voxel_count == 5);
  }
  SUBCASE("all-zero mask is an error") {
    testutil::write_bytes(tmp.path("z.json"),
                          R"({"dims":[2,2,2],"spacing_mm":[1,1,1],"dtype":"f64"})");
    testutil::write_bytes(tmp.path("z.raw"), le_doubles(std::vector<double>(8, 0.0)));
    CHECK_THROWS_AS(load_mask(tmp.path("z.json")), Error);
  }
  SUBCASE("any nonzero value counts") {
    std::vector<double> payload = {0, 2, 255, 0, 0, 0, 0, 0};
    testutil::write_bytes(tmp.path("v.json"),
                          R"({"dims":[2,2,2],"spacing_mm":[1,1,1],"dtype":"f64"})");
    testutil::write_bytes(tmp.path("v.raw"), le_doubles(payload));
    const Mask m = load_mask(tmp.path("v.json"));
    CHECK(m.voxel_count == 2);
    CHECK(m.at(1, 0, 0));
    CHECK(m.at(0, 1, 0));
  }
}

TEST_CASE("extract_roi") {
  Volume v;
  v.dims = {2, 2, 2};
  v.spacing = {1, 1, 1};
  v.voxels = {0, 1, 2, 3, 4, 5, 6, 7};

  SUBCASE("full mask") {
    Mask m = testutil::make_mask(v.dims);
    for (int z = 0; z < 2; ++z)
      for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 2; ++x) m.set(x, y, z, true);
    const RoiSample roi = extract_roi(v, m);
    CHECK(roi.size() == 8);
    CHECK(roi.intensities == v.voxels);  // x-fastest order preserved
  }
  SUBCASE("single voxel") {
    Volume w = v;
    w.voxels[0] = 7.5;
    Mask m = testutil::make_mask(v.dims);
    m.set(0, 0, 0, true);
    const RoiSample roi = extract_roi(w, m);
    REQUIRE(roi.size() == 1);
    CHECK(roi.coords[0] == Coord{0, 0, 0});
    CHECK(roi.intensities[0] == 7.5);
  }
  SUBCASE("dims mismatch") {
    Mask m = testutil::make_mask({3, 2, 2});
    m.set(0, 0, 0, true);
    CHECK_THROWS_AS(extract_roi(v, m), Error);
  }
}

TEST_CASE("round-trip is bit-identical in both formats") {
  TempDir tmp("vio");
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> val(-500.0, 500.0);

  for (int rep = 0; rep < 5; ++rep) {
    Volume v;
    v.dims = {4, 3, 5};
    v.spacing = {0.97, 1.5, 3.25};
    v.unit = IntensityUnit::hu;
    v.voxels.resize(std::size_t(v.dims.count()));
    for (auto& x : v.voxels) x = val(rng);

    for (auto format : {VolumeFormat::nrrd, VolumeFormat::raw_json}) {
      const auto path =
          tmp.path("rt" + std::to_string(rep) +
                   (format == VolumeFormat::nrrd ? ".nrrd" : ".json"));
      save_volume(v, path, format, RawDtype::f64);
      const Volume back = load_volume(path);
      CHECK(back.dims == v.dims);
      CHECK(back.spacing == v.spacing);
      CHECK(back.voxels == v.voxels);  // bitwise
    }
  }
}

TEST_CASE("detached NRRD round trip") {
  TempDir tmp("vio");
  Volume v;
  v.dims = {3, 2, 2};
  v.spacing = {2, 2, 2};
  v.voxels = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  save_volume(v, tmp.path("d.nhdr"), VolumeFormat::nrrd, RawDtype::f64);
  CHECK(std::filesystem::exists(tmp.path("d.raw")));
  const Volume back = load_volume(tmp.path("d.nhdr"));
  CHECK(back.voxels == v.voxels);
}

TEST_CASE("unknown NRRD fields are ignored") {
  TempDir tmp("vio");
  std::string header =
      "NRRD0004\n"
      "# some comment\n"
      "type: unsigned char\n"
      "dimension: 3\n"
      "space: left-posterior-superior\n"
      "sizes: 2 1 1\n"
      "space directions: (1,0,0) (0,1,0) (0,0,1)\n"
      "kinds: domain domain domain\n"
      "endian: little\n"
      "encoding: raw\n"
      "\n";
  testutil::write_bytes(tmp.path("extra.nrrd"), header + std::string("\x02\x07", 2));
  const Volume v = load_volume(tmp.path("extra.nrrd"));
  CHECK(v.at(0, 0, 0) == 2.0);
  CHECK(v.at(1, 0, 0) == 7.0);
}

TEST_CASE("u8/i16/f32 payloads decode and integer saves round") {
  TempDir tmp("vio");
  Volume v;
  v.dims = {2, 2, 1};
  v.spacing = {1, 1, 1};
  v.voxels = {0.2, 1.7, 250.0, 3.0};

  save_volume(v, tmp.path("u8.json"), VolumeFormat::raw_json, RawDtype::u8);
  const Volume u8 = load_volume(tmp.path("u8.json"));
  CHECK(u8.voxels == std::vector<double>{0, 2, 250, 3});  // rounded

  v.voxels = {-7.0, 1.5, 32000.0, -32000.0};
  save_volume(v, tmp.path("i16.json"), VolumeFormat::raw_json, RawDtype::i16);
  const Volume i16 = load_volume(tmp.path("i16.json"));
  CHECK(i16.voxels == std::vector<double>{-7, 2, 32000, -32000});

  v.voxels = {0.5, -1.25, 3.75, 100.0};  // exactly representable in binary32
  save_volume(v, tmp.path("f32.json"), VolumeFormat::raw_json, RawDtype::f32);
  const Volume f32 = load_volume(tmp.path("f32.json"));
  CHECK(f32.voxels == v.voxels);
}

TEST_CASE("loading through the .raw path finds the sidecar") {
  TempDir tmp("vio");
  Volume v;
  v.dims = {2, 1, 1};
  v.spacing = {1, 2, 3};
  v.voxels = {4.5, 6.5};
  save_volume(v, tmp.path("pair.json"), VolumeFormat::raw_json);
  const Volume back = load_volume(tmp.path("pair.raw"));
  CHECK(back.voxels == v.voxels);
  CHECK(back.spacing == v.spacing);
}

TEST_CASE("nonpositive spacing is rejected") {
  TempDir tmp("vio");
  testutil::write_bytes(tmp.path("zsp.json"),
                        R"({"dims":[1,1,1],"spacing_mm":[1,0,1],"dtype":"f64"})");
  testutil::write_bytes(tmp.path("zsp.raw"), le_doubles({1.0}));
  CHECK_THROWS_AS(load_volume(tmp.path("zsp.json")), Error);
}

TEST_CASE("non-finite intensities inside the mask are rejected") {
  Volume v;
  v.dims = {2, 2, 2};
  v.spacing = {1, 1, 1};
  v.voxels = {1, 2, 3, std::numeric_limits<double>::infinity(), 5, 6, 7, 8};
  Mask m = testutil::make_mask(v.dims);
  m.set(1, 1, 0, true);  // the infinite voxel
  CHECK_THROWS_AS(extract_roi(v, m), Error);
  Mask ok = testutil::make_mask(v.dims);
  ok.set(0, 0, 0, true);
  CHECK(extract_roi(v, ok).intensities[0] == 1.0);
}

TEST_CASE("mask save/load round trip preserves the voxel set") {
  TempDir tmp("vio");
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Mask m = testutil::make_mask({6, 5, 4});
  for (int z = 0; z < 4; ++z)
    for (int y = 0; y < 5; ++y)
      for (int x = 0; x < 6; ++x)
        if (unit(rng) < 0.35) m.set(x, y, z, true);
  if (m.voxel_count == 0) m.set(0, 0, 0, true);
  for (auto format : {VolumeFormat::nrrd, VolumeFormat::raw_json}) {
    const auto path = tmp.path(format == VolumeFormat::nrrd ? "m.nrrd" : "m.json");
    save_mask(m, {1, 1, 1}, path, format);
    const Mask back = load_mask(path);
    CHECK(back.dims == m.dims);
    CHECK(back.voxels == m.voxels);
    CHECK(back.voxel_count == m.voxel_count);
  }
}

TEST_CASE("roi size equals mask voxel count for random masks") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    Volume v;
    v.dims = {5, 4, 6};
    v.spacing = {1, 1, 1};
    v.voxels.resize(std::size_t(v.dims.count()));
    for (auto& x : v.voxels) x = unit(rng);
    Mask m = testutil::make_mask(v.dims);
    for (int z = 0; z < v.dims.nz; ++z)
      for (int y = 0; y < v.dims.ny; ++y)
        for (int x = 0; x < v.dims.nx; ++x)
          if (unit(rng) < 0.4) m.set(x, y, z, true);
    if (m.voxel_count == 0) m.set(0, 0, 0, true);
    CHECK(extract_roi(v, m).size() == std::size_t(m.voxel_count));
  }
}
