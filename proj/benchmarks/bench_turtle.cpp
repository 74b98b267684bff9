#include <benchmark/benchmark.h>

#include "aurcap/models.hpp"
#include "aurcap/ontology/turtle.hpp"

using namespace aurcap;

namespace {

void BM_ParseFleet(benchmark::State& state) {
  const auto merged = serialize_turtle(models::load_seed_with_fleet());
  for (auto _ : state) benchmark::DoNotOptimize(parse_turtle(merged));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * merged.size()));
}
BENCHMARK(BM_ParseFleet);

void BM_SerializeFleet(benchmark::State& state) {
  const auto kb = models::load_seed_with_fleet();
  for (auto _ : state) benchmark::DoNotOptimize(serialize_turtle(kb));
}
BENCHMARK(BM_SerializeFleet);

}  // namespace
