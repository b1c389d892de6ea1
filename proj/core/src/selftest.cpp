#include "ocqa/selftest.hpp"

#include <random>
#include <sstream>

#include "ocqa/gen.hpp"
#include "ocqa/programs.hpp"
#include "ocqa/randgen.hpp"

namespace ocqa {

namespace {

const Guards kGuards{16, 1000000, 500000};

// Runs one suite of `instances` oracle-vs-pipeline comparisons for the given
// semantics; the sequence suite additionally cross-checks the bit-path label
// encoding.
std::size_t mismatches(std::mt19937_64& rng, std::size_t instances,
                       Semantics semantics, bool include_bitpath) {
  std::size_t bad = 0;
  for (std::size_t i = 0; i < instances; ++i) {
    RandomInstanceOptions opt;
    opt.merged_ghd = i % 2 == 0;
    if (semantics == Semantics::sequences) opt.max_facts = 6;
    RandomInstance in = random_instance(rng, opt);
    const GHD* ghd = in.ghd ? &*in.ghd : nullptr;
    Count oracle = brute_numerator(in.db, in.keys, in.query, in.tuple,
                                   semantics, kGuards);
    Count piped = pipeline_numerator(in.db, in.keys, in.query, in.tuple, ghd,
                                     semantics, false, kGuards);
    if (piped != oracle) ++bad;
    if (include_bitpath &&
        pipeline_numerator(in.db, in.keys, in.query, in.tuple, ghd, semantics,
                           true, kGuards) != oracle)
      ++bad;
  }
  return bad;
}

}  // namespace

SelftestReport run_selftest(std::uint64_t seed, std::size_t instances) {
  SelftestReport report;
  report.ok = true;
  std::mt19937_64 rng(seed);

  auto record = [&](const std::string& what, bool ok,
                    const std::string& detail) {
    report.ok = report.ok && ok;
    report.lines.push_back((ok ? "pass: " : "FAIL: ") + what +
                           (detail.empty() ? "" : " (" + detail + ")"));
  };
  auto suite = [&](const std::string& what, Semantics semantics,
                   std::size_t n, bool bitpath) {
    std::size_t bad = 0;
    std::string detail = std::to_string(n) + " instances";
    try {
      bad = mismatches(rng, n, semantics, bitpath);
      if (bad > 0) detail = std::to_string(bad) + " mismatches of " + detail;
    } catch (const std::exception& e) {
      bad = 1;
      detail = e.what();
    }
    record(what, bad == 0, detail);
  };

  suite("repair pipeline matches the exhaustive oracle", Semantics::repairs,
        instances, false);
  suite("sequence pipeline matches the oracle (compact and bit-path)",
        Semantics::sequences, std::max<std::size_t>(1, instances / 2), true);
  suite("answer-span pipeline matches |Q(D)|", Semantics::answers, instances,
        false);
  suite("uniform-subset pipeline matches the subset oracle", Semantics::ur,
        std::max<std::size_t>(1, instances / 2), false);

  try {
    Graph edge;
    edge.order = 2;
    edge.add_edge(0, 1);
    bool ok = hom_count_via_rf(edge, 1, Engine::nfta) == 16 &&
              hom_count_via_rf(edge, 1, Engine::brute) == 16;
    record("single-edge homomorphism count is 16", ok, "");
  } catch (const std::exception& e) {
    record("single-edge homomorphism count is 16", false, e.what());
  }

  try {
    Cnf2 phi;
    phi.variables = 2;
    phi.clauses = {{0, 1}};
    GenInstance inst = gen_mon2sat(phi, 1);
    RfOptions opt;
    opt.semantics = Semantics::repairs;
    opt.guards = Guards{64, 1000000, 1000000};
    RfResult r = rf(inst.db, inst.keys, inst.query, {}, opt);
    record("single-clause formula has frequency 3/9",
           r.value == Ratio(1, 3), "");
  } catch (const std::exception& e) {
    record("single-clause formula has frequency 3/9", false, e.what());
  }

  return report;
}

}  // namespace ocqa
