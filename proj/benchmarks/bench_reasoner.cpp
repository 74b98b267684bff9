#include <benchmark/benchmark.h>

#include <random>

#include "aurcap/models.hpp"
#include "aurcap/ontology/namespaces.hpp"
#include "aurcap/ontology/reasoner.hpp"

using namespace aurcap;

namespace {

Iri c(int i) { return Iri("https://example.org/bench#C" + std::to_string(i)); }

// A random DAG with `n` classes and about 2n subclass edges, a few cycles
// closed by equivalences.
KnowledgeBase taxonomy(int n) {
  std::mt19937 rng(n);
  KnowledgeBase kb;
  for (int i = 0; i < n; ++i) kb.declare(c(i), TermKind::Class);
  for (int i = 1; i < n; ++i)
    for (int k = 0; k < 2; ++k) kb.add(Axiom::sub_class(c(i), c(static_cast<int>(rng() % i))));
  for (int k = 0; k < n / 20; ++k) kb.add(Axiom::equivalent(c(static_cast<int>(rng() % n)), c(static_cast<int>(rng() % n))));
  return kb;
}

void BM_Closure(benchmark::State& state) {
  const auto kb = taxonomy(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    Reasoner r(kb);
    benchmark::DoNotOptimize(r.is_subclass_of(c(1), c(0)));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Closure)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_SeedLoad(benchmark::State& state) {
  for (auto _ : state) {
    auto kb = models::load_seed();
    benchmark::DoNotOptimize(kb.reasoner()->is_subclass_of(vocab::AutonomousRobot, vocab::Device));
  }
}
BENCHMARK(BM_SeedLoad);

void BM_InstancesOfDevice(benchmark::State& state) {
  const auto kb = models::load_seed_with_fleet();
  const auto r = kb.reasoner();
  for (auto _ : state) benchmark::DoNotOptimize(r->instances_of(vocab::Device));
}
BENCHMARK(BM_InstancesOfDevice);

}  // namespace
