// bench_main.cpp : throughput of the hot paths on a realistic phantom lesion
#include <benchmark/benchmark.h>

#include "radiomics/features.hpp"
#include "radiomics/first_order.hpp"
#include "radiomics/phantom.hpp"
#include "radiomics/quantization.hpp"
#include "radiomics/shape.hpp"
#include "radiomics/texture.hpp"
#include "radiomics/volume_io.hpp"

using namespace radiomics;

namespace {

PhantomSpec bench_spec() {
  PhantomSpec spec;
  spec.dims = {48, 48, 48};
  spec.spacing = {2, 2, 2};
  spec.shape = PhantomShape::blob;
  spec.radius_vox = 14.0;
  spec.base_intensity = 100.0;
  spec.texture_scale = 2.0;
  spec.noise_sd = 5.0;
  spec.seed = 12;
  return spec;
}

const PhantomPair& pair() {
  static const PhantomPair p = generate_pair(bench_spec());
  return p;
}

const RoiSample& roi() {
  static const RoiSample r = extract_roi(pair().test, pair().mask);
  return r;
}

const QuantizedRoi& quantized() {
  static const QuantizedRoi q = quantize_fixed_bins(roi(), 64);
  return q;
}

}  // namespace

static void BM_GeneratePhantom(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(generate_pair(bench_spec()));
}
BENCHMARK(BM_GeneratePhantom);

static void BM_QuantizeFixedBins(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(quantize_fixed_bins(roi(), 64));
}
BENCHMARK(BM_QuantizeFixedBins);

static void BM_BuildGlcm(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_glcm(quantized()));
}
BENCHMARK(BM_BuildGlcm);

static void BM_BuildNgtdm(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_ngtdm(quantized()));
}
BENCHMARK(BM_BuildNgtdm);

static void BM_BuildGlzsm(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_glzsm(quantized()));
}
BENCHMARK(BM_BuildGlzsm);

static void BM_GlcmFeatures(benchmark::State& state) {
  const Glcm g = build_glcm(quantized());
  for (auto _ : state) benchmark::DoNotOptimize(glcm_features(g));
}
BENCHMARK(BM_GlcmFeatures);

static void BM_SurfaceArea(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(mesh_surface_area_mm2(pair().mask, pair().test.spacing));
}
BENCHMARK(BM_SurfaceArea);

static void BM_FirstOrder(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(first_order_features(roi()));
}
BENCHMARK(BM_FirstOrder);

static void BM_ExtractAllFeatures(benchmark::State& state) {
  const std::vector<QuantizationSpec> specs = {QuantizationSpec::fixed_bins(64),
                                               QuantizationSpec::fixed_width(0.5)};
  for (auto _ : state)
    benchmark::DoNotOptimize(extract_features(pair().test, pair().mask, specs));
}
BENCHMARK(BM_ExtractAllFeatures);

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  benchmark::RunSpecifiedBenchmarks();
  return 0;
}
