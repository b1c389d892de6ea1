#include <benchmark/benchmark.h>

#include <random>

#include "ocqa/nfta.hpp"

using namespace ocqa;

namespace {

// A family of random automata with a fixed seed so timings stay comparable
// across runs.
NFTA random_automaton(std::mt19937_64& rng, int nstates, int ntrans) {
  NFTA a;
  for (int s = 0; s < nstates; ++s) a.states.insert("s" + std::to_string(s));
  a.alphabet = {"a", "b", "c"};
  a.initial = "s0";
  std::uniform_int_distribution<int> st(0, nstates - 1), sym(0, 2), ar(0, 2);
  for (int t = 0; t < ntrans; ++t) {
    Transition tr;
    tr.from = "s" + std::to_string(st(rng));
    tr.symbol = std::string(1, static_cast<char>('a' + sym(rng)));
    for (int i = ar(rng); i > 0; --i)
      tr.to.push_back("s" + std::to_string(st(rng)));
    a.transitions.insert(std::move(tr));
  }
  return a;
}

void BM_determinize(benchmark::State& state) {
  std::mt19937_64 rng(1);
  NFTA a = random_automaton(rng, static_cast<int>(state.range(0)),
                            static_cast<int>(state.range(0)) * 3);
  for (auto _ : state)
    benchmark::DoNotOptimize(determinize_bottom_up(a));
}
BENCHMARK(BM_determinize)->Arg(4)->Arg(8)->Arg(16);

void BM_count_by_size(benchmark::State& state) {
  std::mt19937_64 rng(2);
  NFTA a = random_automaton(rng, 8, 24);
  BottomUpDFTA d = determinize_bottom_up(a);
  for (auto _ : state)
    benchmark::DoNotOptimize(count_by_size(d, state.range(0)));
}
BENCHMARK(BM_count_by_size)->Arg(8)->Arg(16)->Arg(32);

void BM_count_language_up_to(benchmark::State& state) {
  std::mt19937_64 rng(3);
  NFTA a = random_automaton(rng, 8, 24);
  for (auto _ : state)
    benchmark::DoNotOptimize(count_language_up_to(a, state.range(0)));
}
BENCHMARK(BM_count_language_up_to)->Arg(4)->Arg(8)->Arg(16);

void BM_enumerate_accepted(benchmark::State& state) {
  std::mt19937_64 rng(4);
  NFTA a = random_automaton(rng, 6, 14);
  Guards guards{16, 1000000, 5000000};
  for (auto _ : state)
    benchmark::DoNotOptimize(enumerate_accepted(a, state.range(0), guards));
}
BENCHMARK(BM_enumerate_accepted)->Arg(3)->Arg(5);

}  // namespace
