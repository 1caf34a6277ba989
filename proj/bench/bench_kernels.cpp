// Serial reference against the OpenMP kernels. Arg 0 = serial, 1 = OpenMP.

#include <benchmark/benchmark.h>

#include "tpms/assembly.hpp"
#include "tpms/period.hpp"

using namespace tpms;

namespace {

std::shared_ptr<const GaussMap> schwarz_p() {
  static const auto g = std::make_shared<const GaussMap>(
      expand(family_divisor(basic_family(2, 4, 4), TorusParams(1.0), {0.25})));
  return g;
}

struct Assembled {
  SurfacePatch aligned;
  TriangleGroup group;
  TriplyPeriodicMesh mesh;
};

const Assembled& assembled() {
  static const Assembled a = [] {
    const SurfacePatch p = make_patch(schwarz_p(), 48, 48);
    const TriangleGroup g = group_for_patch(p, {2, 4, 4});
    SurfacePatch al = align_patch(p, g);
    TriplyPeriodicMesh m = replicate(al, g, 3);
    return Assembled{std::move(al), g, std::move(m)};
  }();
  return a;
}

void BM_make_patch(benchmark::State& st) {
  PatchOptions opt;
  opt.parallel = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(make_patch(schwarz_p(), 48, 48, opt));
}
BENCHMARK(BM_make_patch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_replicate(benchmark::State& st) {
  ReplicateOptions opt;
  opt.parallel = st.range(0) != 0;
  const Assembled& a = assembled();
  for (auto _ : st) benchmark::DoNotOptimize(replicate(a.aligned, a.group, 3, false, opt));
}
BENCHMARK(BM_replicate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_spot_check(benchmark::State& st) {
  const Assembled& a = assembled();
  for (auto _ : st) benchmark::DoNotOptimize(self_intersection_spot_check(a.mesh, 20000, 1, st.range(0) != 0));
}
BENCHMARK(BM_spot_check)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_scan_1d(benchmark::State& st) {
  const FamilySpec f = equal_sign_family(2, 3);
  for (auto _ : st) benchmark::DoNotOptimize(scan_1d(f, TorusParams(1.0), 32));
}
BENCHMARK(BM_scan_1d)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
