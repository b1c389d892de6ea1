#include <benchmark/benchmark.h>

#include <random>

#include "ocqa/gen.hpp"
#include "ocqa/programs.hpp"
#include "ocqa/randgen.hpp"

using namespace ocqa;

namespace {

const Guards kGuards{16, 1000000, 500000};

struct Fixture {
  Database db;
  KeySpec keys;
  Query query;
  GHD ghd;
};

// The running four-atom example: 13 facts, six blocks, 432 repairs. The
// query is cyclic, so the automaton engine needs the width-2 decomposition.
Fixture worked_example() {
  Fixture f;
  f.db = parse_database(
      "P(a1,b).\nP(a1,c).\nP(a2,b).\nP(a2,c).\nP(a2,d).\n"
      "S(c,d).\nS(c,e).\nT(d,a1).\nU(c,f).\nU(c,g).\n"
      "U(h,i).\nU(h,j).\nU(h,k).\n");
  f.keys = parse_keys("key P = 1;\nkey S = 1;\nkey T = 1;\nkey U = 1;\n");
  f.query = parse_query("Ans() :- P(x,y), S(y,z), T(z,x), U(y,w).");
  f.ghd.root = 0;
  f.ghd.nodes.resize(3);
  f.ghd.nodes[0].parent = -1;
  f.ghd.nodes[0].children = {1, 2};
  f.ghd.nodes[0].chi = {"x", "y", "z"};
  f.ghd.nodes[0].lambda = {0, 1};
  f.ghd.nodes[1].parent = 0;
  f.ghd.nodes[1].chi = {"z", "x"};
  f.ghd.nodes[1].lambda = {2};
  f.ghd.nodes[2].parent = 0;
  f.ghd.nodes[2].chi = {"y", "w"};
  f.ghd.nodes[2].lambda = {3};
  return f;
}

void BM_rf_brute(benchmark::State& state) {
  Fixture f = worked_example();
  RfOptions opt;
  opt.engine = Engine::brute;
  opt.guards = kGuards;
  for (auto _ : state)
    benchmark::DoNotOptimize(rf(f.db, f.keys, f.query, {}, opt));
}
BENCHMARK(BM_rf_brute);

void BM_rf_nfta(benchmark::State& state) {
  Fixture f = worked_example();
  RfOptions opt;
  opt.engine = Engine::nfta;
  opt.ghd = &f.ghd;
  opt.guards = kGuards;
  for (auto _ : state)
    benchmark::DoNotOptimize(rf(f.db, f.keys, f.query, {}, opt));
}
BENCHMARK(BM_rf_nfta);

void BM_pipeline_random(benchmark::State& state) {
  std::mt19937_64 rng(20);
  std::vector<RandomInstance> instances;
  for (int i = 0; i < 16; ++i) {
    RandomInstanceOptions opt;
    opt.merged_ghd = i % 2 == 0;
    instances.push_back(random_instance(rng, opt));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& in = instances[i++ % instances.size()];
    const GHD* ghd = in.ghd ? &*in.ghd : nullptr;
    benchmark::DoNotOptimize(pipeline_numerator(in.db, in.keys, in.query,
                                                in.tuple, ghd,
                                                Semantics::repairs, false,
                                                kGuards));
  }
}
BENCHMARK(BM_pipeline_random);

void BM_sequence_pipeline(benchmark::State& state) {
  std::mt19937_64 rng(21);
  RandomInstanceOptions opt;
  opt.max_facts = 6;
  RandomInstance in = random_instance(rng, opt);
  for (auto _ : state)
    benchmark::DoNotOptimize(pipeline_numerator(in.db, in.keys, in.query,
                                                in.tuple, nullptr,
                                                Semantics::sequences,
                                                state.range(0) != 0, kGuards));
}
BENCHMARK(BM_sequence_pipeline)->Arg(0)->Arg(1);

void BM_hom_count(benchmark::State& state) {
  Graph g;
  g.order = static_cast<std::size_t>(state.range(0));
  for (std::size_t i = 0; i + 1 < g.order; ++i) g.add_edge(i, i + 1);
  Guards guards{64, 2000000, 1000000};
  for (auto _ : state)
    benchmark::DoNotOptimize(hom_count_via_rf(g, 1, Engine::nfta, guards));
}
BENCHMARK(BM_hom_count)->Arg(2)->Arg(4)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
