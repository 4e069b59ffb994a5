#include <benchmark/benchmark.h>

#include "tjl/hecke.hpp"

using namespace tjl;

namespace {

HomologyCache& cache() {
  static HomologyCache C(std::make_shared<const GroupPresentation>(bundled_presentation(-2)));
  return C;
}

const char* kLevels[] = {"5+6t", "1-9t", "3-11t", "13+9t"};

Exec exec_of(const benchmark::State& st) { return st.range(1) ? Exec::parallel : Exec::serial; }

void set_label(benchmark::State& st) {
  st.SetLabel(std::string(kLevels[st.range(0)]) + (st.range(1) ? " parallel" : " serial"));
}

void BM_HeckeT(benchmark::State& st) {
  auto H = cache().get(kLevels[st.range(0)]);
  QuadInt q = parse_quad("3+2t");
  for (auto _ : st) benchmark::DoNotOptimize(hecke_T(*H, q, exec_of(st)));
  set_label(st);
}

void BM_AtkinLehner(benchmark::State& st) {
  auto H = cache().get(kLevels[st.range(0)]);
  QuadInt q = H->level().gen;
  for (auto _ : st) benchmark::DoNotOptimize(atkin_lehner(*H, q, exec_of(st)));
  set_label(st);
}

void BM_Degeneracy(benchmark::State& st) {
  auto Hm = cache().get(kLevels[st.range(0)]);
  auto Hn = cache().get(std::string("1-1t*") + kLevels[st.range(0)]);
  QuadInt q = parse_quad("1-1t");
  for (auto _ : st) benchmark::DoNotOptimize(degeneracy(*Hn, *Hm, q, exec_of(st)));
  set_label(st);
}

void args(benchmark::internal::Benchmark* b) {
  for (int lv = 0; lv < 4; ++lv)
    for (int par : {0, 1}) b->Args({lv, par});
  b->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(BM_HeckeT)->Apply(args);
BENCHMARK(BM_AtkinLehner)->Apply(args);
BENCHMARK(BM_Degeneracy)->Apply([](benchmark::internal::Benchmark* b) {
  for (int lv = 0; lv < 2; ++lv)
    for (int par : {0, 1}) b->Args({lv, par});
  b->Unit(benchmark::kMillisecond);
});

BENCHMARK_MAIN();
