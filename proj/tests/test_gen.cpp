#include <doctest.h>

#include <random>

#include "ocqa/gen.hpp"
#include "ocqa/programs.hpp"
#include "ocqa/randgen.hpp"

using namespace ocqa;

namespace {

Graph path(std::size_t n) {
  Graph g;
  g.order = n;
  for (std::size_t i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

Graph cycle(std::size_t n) {
  Graph g = path(n);
  g.add_edge(n - 1, 0);
  return g;
}

}  // namespace

TEST_CASE("graph helpers") {
  Graph g = path(4);
  CHECK(is_connected(g));
  std::vector<int> side;
  CHECK(bipartition(g, side));
  CHECK(side[0] != side[1]);
  CHECK(side[1] != side[2]);

  CHECK_FALSE(bipartition(cycle(3), side));
  CHECK(bipartition(cycle(4), side));

  Graph two;
  two.order = 2;
  CHECK_FALSE(is_connected(two));
  CHECK_THROWS_AS(two.add_edge(0, 0), ValidationError);
  CHECK_THROWS_AS(two.add_edge(0, 5), ValidationError);
}

TEST_CASE("counting-family instance for a single edge") {
  GenInstance inst = gen_hcoloring(path(2), 1);
  CHECK(inst.db.size() == 8);  // 4 vertex facts, E, T, Tp, one clique fact
  CHECK(is_sjf(inst.query));
  CHECK(inst.query.atoms.size() == 6);
  REQUIRE(inst.ghd.has_value());
  auto report = validate(*inst.ghd, inst.query);
  CHECK(report.ok);
  CHECK(report.width == 1);

  // Wider padding raises the width but not beyond k.
  for (std::size_t k = 2; k <= 4; ++k) {
    GenInstance wide = gen_hcoloring(path(2), k);
    auto r = validate(*wide.ghd, wide.query);
    CHECK(r.ok);
    CHECK(r.width <= k);
    CHECK(r.width == (k + 2) / 2);
  }
}

TEST_CASE("homomorphism counts via relative frequency") {
  SUBCASE("base cases") {
    Graph one;
    one.order = 1;
    CHECK(hom_count_via_rf(one, 1, Engine::brute) == 6);
    CHECK(brute_hom_count(one) == 6);
    CHECK(hom_count_via_rf(cycle(3), 1, Engine::brute) == 0);
    CHECK(brute_hom_count(cycle(3)) == 0);
  }
  SUBCASE("single edge gives 16 on both engines") {
    CHECK(brute_hom_count(path(2)) == 16);
    CHECK(hom_count_via_rf(path(2), 1, Engine::brute) == 16);
    CHECK(hom_count_via_rf(path(2), 1, Engine::nfta) == 16);
  }
  SUBCASE("small graphs against the reference count") {
    for (std::size_t n = 2; n <= 4; ++n) {
      CAPTURE(n);
      CHECK(hom_count_via_rf(path(n), 1, Engine::brute) ==
            brute_hom_count(path(n)));
    }
    CHECK(hom_count_via_rf(cycle(4), 1, Engine::nfta) ==
          brute_hom_count(cycle(4)));
    Graph star;  // center 0
    star.order = 4;
    for (std::size_t i = 1; i < 4; ++i) star.add_edge(0, i);
    CHECK(hom_count_via_rf(star, 1, Engine::nfta) == brute_hom_count(star));
  }
  SUBCASE("width padding does not change the count") {
    CHECK(hom_count_via_rf(path(3), 2, Engine::brute) ==
          brute_hom_count(path(3)));
  }
  SUBCASE("disconnected input is rejected") {
    Graph g;
    g.order = 3;
    g.add_edge(0, 1);
    CHECK_THROWS_AS(hom_count_via_rf(g, 1, Engine::brute), ValidationError);
  }
}

TEST_CASE("monotone 2-CNF family") {
  Cnf2 phi;  // (v0 or v1) and (v1 or v2)
  phi.variables = 3;
  phi.clauses = {{0, 1}, {1, 2}};
  CHECK(count_satisfying(phi) == 5);

  GenInstance inst = gen_mon2sat(phi, 1);
  CHECK_FALSE(is_sjf(inst.query));  // V repeats; brute engine only
  REQUIRE(inst.ghd.has_value());
  CHECK(validate(*inst.ghd, inst.query).ok);

  RfOptions opt;
  opt.semantics = Semantics::repairs;
  opt.guards = Guards{64, 1000000, 1000000};
  auto r = rf(inst.db, inst.keys, inst.query, {}, opt);
  CHECK(r.numerator == 5);
  CHECK(r.denominator == 27);

  SUBCASE("random formulas satisfy rf = #phi / 3^n") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 8; ++trial) {
      Cnf2 f;
      f.variables = 2 + rng() % 4;
      std::size_t m = 1 + rng() % 4;
      for (std::size_t i = 0; i < m; ++i) {
        std::size_t a = rng() % f.variables;
        std::size_t b = rng() % f.variables;
        if (a == b) b = (b + 1) % f.variables;
        f.clauses.push_back({a, b});
      }
      GenInstance gi = gen_mon2sat(f, 1);
      auto rr = rf(gi.db, gi.keys, gi.query, {}, opt);
      CAPTURE(f.variables);
      CHECK(rr.numerator == count_satisfying(f));
      Count power;
      mpz_ui_pow_ui(power.get_mpz_t(), 3,
                    static_cast<unsigned long>(f.variables));
      CHECK(rr.denominator == power);
    }
  }
}

TEST_CASE("3-colorability family") {
  RfOptions opt;
  opt.semantics = Semantics::repairs;
  opt.guards = Guards{128, 1000000, 1000000};

  SUBCASE("triangle is 3-colorable") {
    GenInstance inst = gen_3col(cycle(3));
    CHECK_FALSE(inst.ghd.has_value());
    CHECK(is_sjf(inst.query));
    auto r = rf(inst.db, inst.keys, inst.query, {}, opt);
    CHECK(r.value == 1);
    CHECK(brute_3colorable(cycle(3)));
  }
  SUBCASE("the 4-clique is not") {
    Graph k4 = cycle(4);
    k4.add_edge(0, 2);
    k4.add_edge(1, 3);
    auto r = rf(gen_3col(k4).db, KeySpec{}, gen_3col(k4).query, {}, opt);
    CHECK(r.value == 0);
    CHECK_FALSE(brute_3colorable(k4));
  }
  SUBCASE("random graphs agree with the brute check") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 6; ++trial) {
      Graph g;
      g.order = 3 + rng() % 3;
      for (std::size_t u = 0; u < g.order; ++u)
        for (std::size_t v = u + 1; v < g.order; ++v)
          if (rng() % 2) g.add_edge(u, v);
      if (g.edges.empty()) continue;
      GenInstance inst = gen_3col(g);
      auto r = rf(inst.db, inst.keys, inst.query, {}, opt);
      CAPTURE(g.order);
      CHECK((r.value == 1) == brute_3colorable(g));
    }
  }
}

TEST_CASE("random instances are well-formed and engine-agnostic") {
  std::mt19937_64 rng(99);
  Guards guards{16, 1000000, 500000};
  int merged_seen = 0;
  for (int trial = 0; trial < 40; ++trial) {
    RandomInstanceOptions opt;
    opt.merged_ghd = trial % 2 == 0;
    RandomInstance in = random_instance(rng, opt);
    CAPTURE(print_database(in.db));
    CAPTURE(print_query(in.query));

    CHECK(is_sjf(in.query));
    CHECK(is_acyclic(in.query));
    CHECK(in.db.size() <= 12);
    CHECK(in.query.atoms.size() <= 4);
    CHECK(in.tuple.size() == in.query.answer_terms.size());
    if (in.ghd) {
      ++merged_seen;
      auto report = validate(*in.ghd, in.query);
      CHECK(report.ok);
      CHECK(report.width <= 2);
    }

    const GHD* ghd = in.ghd ? &*in.ghd : nullptr;
    Count brute = brute_numerator(in.db, in.keys, in.query, in.tuple,
                                  Semantics::repairs, guards);
    Count piped = pipeline_numerator(in.db, in.keys, in.query, in.tuple, ghd,
                                     Semantics::repairs, false, guards);
    CHECK(piped == brute);
  }
  CHECK(merged_seen > 0);
}
