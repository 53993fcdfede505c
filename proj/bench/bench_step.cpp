#include <benchmark/benchmark.h>

#include "kfks/problems.hpp"
#include "kfks/reference.hpp"
#include "kfks/schemes.hpp"

namespace {

using namespace kfks;

// One split step on the oscillating problem; range(0) = scheme, range(1) = cells.
template <bool Reference>
void BM_Step(benchmark::State& bs) {
  const auto scheme = static_cast<SchemeKind>(bs.range(0));
  const auto m = static_cast<std::size_t>(bs.range(1));
  const VelocityGrid vgrid(50, 15.0);
  const SpatialGrid grid(m, 1.0, BoundaryKind::periodic);
  SchemeState state = init_oscillating(scheme, grid, vgrid, 0.02);
  const double dt = compute_dt(vgrid, grid, 1.0);
  for (auto _ : bs) {
    if constexpr (Reference) reference::step(state, 1e2, dt);
    else step(state, 1e2, dt);
    benchmark::ClobberMemory();
  }
  bs.SetLabel(std::string(to_string(scheme)));
  bs.counters["cells"] = benchmark::Counter(static_cast<double>(bs.iterations() * m),
                                            benchmark::Counter::kIsRate);
}

void Args(benchmark::internal::Benchmark* b) {
  for (int s = 0; s < 4; ++s)
    for (int m : {600, 2400}) b->Args({s, m});
}

}  // namespace

BENCHMARK(BM_Step<false>)->Name("kernel")->Apply(Args)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Step<true>)->Name("reference")->Apply(Args)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
