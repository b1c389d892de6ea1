#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "ocqa/nfta.hpp"
#include "ocqa/programs.hpp"

using namespace ocqa;

TEST_CASE("tensor follows the set-product rules") {
  using Tuples = std::set<std::vector<std::string>>;
  Tuples p1 = {{}, {"s1", "s2"}, {"s3"}};
  Tuples p2 = {{"s5"}, {"s6", "s7"}};
  Tuples expected = {{"s5"},       {"s6", "s7"},       {"s1", "s2", "s5"},
                     {"s1", "s2", "s6", "s7"}, {"s3", "s5"}, {"s3", "s6", "s7"}};
  CHECK(tensor(p1, p2) == expected);
  CHECK(tensor(p1, {{}}) == p1);   // identity
  CHECK(tensor(p1, {}).empty());   // annihilator
  CHECK(tensor({}, p2).empty());
}

namespace {

class SingleLabel final : public BranchingProgram {
 public:
  Configuration initial() override {
    return {"init", Quantifier::existential, true, "", Terminal::none};
  }
  std::vector<Configuration> expand(const Configuration& c) override {
    if (c.payload == "init")
      return {{"leaf", Quantifier::existential, true, "a", Terminal::accept}};
    throw ValidationError("unexpected payload");
  }
};

NFTA rep_nfta_for(const Database& db, const KeySpec& keys, const Query& q) {
  auto in = prepare_instance(db, keys, q, {});
  auto program = rep_program(in);
  return build_nfta(build_dag(*program));
}

}  // namespace

TEST_CASE("build_nfta on a one-label program") {
  SingleLabel p;
  NFTA a = build_nfta(build_dag(p));
  auto trees = enumerate_accepted(a, 4);
  REQUIRE(trees.size() == 1);
  CHECK(trees[0].label.empty());
  REQUIRE(trees[0].children.size() == 1);
  CHECK(trees[0].children[0].label == "a");
  CHECK(accepts(a, trees[0]));
  CHECK_FALSE(accepts(a, LabeledTree{"", {LabeledTree{"b", {}}}}));
  CHECK_FALSE(accepts(a, LabeledTree{"a", {}}));
}

TEST_CASE("repair automaton language equals the ato-level outputs") {
  Database db = parse_database("R(1,a).\nR(1,b).\n");
  KeySpec keys = parse_keys("key R = 1;\n");
  Query q = parse_query("Ans() :- R(x,y).");
  auto in = prepare_instance(db, keys, q, {});
  auto program = rep_program(in);
  ComputationDAG dag = build_dag(*program);
  NFTA a = build_nfta(dag);

  auto outputs = valid_outputs(dag);
  auto accepted = enumerate_accepted(a, size_bound(ProgramKind::rep, in));
  CHECK(outputs.size() == 2);
  CHECK(std::set<LabeledTree>(outputs.begin(), outputs.end()) ==
        std::set<LabeledTree>(accepted.begin(), accepted.end()));
  for (const auto& t : outputs) CHECK(accepts(a, t));
  CHECK(count_language_up_to(a, size_bound(ProgramKind::rep, in)) == 2);
}

TEST_CASE("determinization preserves membership and enables exact counting") {
  auto w = fixtures::worked_example();
  auto in = prepare_instance(w.db, w.keys, w.query, {}, &w.ghd);
  auto program = rep_program(in);
  NFTA a = build_nfta(build_dag(*program, Guards{16, 1000000, 100000}));
  std::size_t bound = size_bound(ProgramKind::rep, in);

  Count expected = brute_numerator(w.db, w.keys, w.query, {},
                                   Semantics::repairs, Guards{16, 1000000, 100000});
  CHECK(count_language_up_to(a, bound) == expected);

  // Every accepted tree has exactly one node per block plus the root.
  auto accepted =
      enumerate_accepted(a, bound, Guards{16, 1000000, 100000});
  CHECK(Count(static_cast<unsigned long>(accepted.size())) == expected);
  std::size_t nblocks = blocks(in.db, in.keys).size();
  for (const auto& t : accepted) CHECK(t.size() == 1 + nblocks);

  // Transition arity stays within the binary tree shape.
  for (const auto& tr : a.transitions) CHECK(tr.to.size() <= 2);
}

TEST_CASE("random ambiguous automata: determinize and count per size") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    // Random NFTA over ≤8 states, arity ≤2, alphabet {a,b,c}.
    std::uniform_int_distribution<int> nstates(1, 8), ntrans(1, 14),
        arity(0, 2), sym(0, 2);
    int ns = nstates(rng);
    NFTA a;
    for (int s = 0; s < ns; ++s) a.states.insert("s" + std::to_string(s));
    a.alphabet = {"a", "b", "c"};
    a.initial = "s0";
    std::uniform_int_distribution<int> st(0, ns - 1);
    int nt = ntrans(rng);
    for (int t = 0; t < nt; ++t) {
      Transition tr;
      tr.from = "s" + std::to_string(st(rng));
      tr.symbol = std::string(1, static_cast<char>('a' + sym(rng)));
      int ar = arity(rng);
      for (int i = 0; i < ar; ++i)
        tr.to.push_back("s" + std::to_string(st(rng)));
      a.transitions.insert(std::move(tr));
    }
    CAPTURE(nfta_to_json(a));

    const std::size_t bound = 5;
    Guards guards{16, 1000000, 2000000};
    auto accepted = enumerate_accepted(a, bound, guards);
    BottomUpDFTA d = determinize_bottom_up(a);

    // Membership preserved on every accepted tree and per-size counts match
    // the enumeration.
    std::map<std::size_t, std::size_t> by_size;
    for (const auto& t : accepted) {
      CHECK(accepts(a, t));
      ++by_size[t.size()];
    }
    Count total = 0;
    for (std::size_t s = 1; s <= bound; ++s) {
      Count c = count_by_size(d, s);
      total += c;
      CHECK(c == Count(static_cast<unsigned long>(by_size[s])));
    }
    CHECK(total == Count(static_cast<unsigned long>(accepted.size())));
    CHECK(count_language_up_to(a, bound) == total);
  }
}

TEST_CASE("count_up_to drives the per-size counter per the composition") {
  SingleLabel p;
  NFTA a = build_nfta(build_dag(p));

  std::size_t calls = 0;
  std::vector<double> deltas;
  std::vector<std::size_t> sizes;
  SizeCounter spy = [&](const NFTA& inner, std::size_t size, double epsilon,
                        double delta) -> Count {
    ++calls;
    deltas.push_back(delta);
    sizes.push_back(size);
    CHECK(epsilon == doctest::Approx(0.25));
    return exact_size_counter()(inner, size, epsilon, delta);
  };

  const std::size_t n = 4;
  Count total = count_up_to(a, n, 0.25, 0.1, spy);
  CHECK(total == 1);
  CHECK(calls == n + 1);
  CHECK(sizes == std::vector<std::size_t>{0, 1, 2, 3, 4});
  for (double d : deltas) CHECK(d == doctest::Approx(0.1 / (2.0 * (n + 1))));

  // Empty language: zero for every n.
  NFTA empty;
  empty.states = {"s0"};
  empty.alphabet = {"a"};
  empty.initial = "s0";
  CHECK(count_up_to(empty, 3, 0.1, 0.1, exact_size_counter()) == 0);
}

TEST_CASE("NFTA JSON round-trip is canonical") {
  Database db = parse_database("R(1,a).\nR(1,b).\n");
  NFTA a = rep_nfta_for(db, parse_keys("key R = 1;\n"),
                        parse_query("Ans() :- R(x,y)."));
  std::string text = nfta_to_json(a);
  NFTA parsed = nfta_from_json(text);
  CHECK(parsed.states == a.states);
  CHECK(parsed.initial == a.initial);
  CHECK(parsed.transitions == a.transitions);
  CHECK(nfta_to_json(parsed) == text);

  CHECK_THROWS_AS(nfta_from_json("{}"), ValidationError);
  CHECK_THROWS_AS(
      nfta_from_json(
          R"({"states":["x"],"alphabet":[],"initial":"y","transitions":[]})"),
      ValidationError);
}

TEST_CASE("tree JSON and DOT") {
  LabeledTree t{"", {LabeledTree{"a", {LabeledTree{"b", {}}}}}};
  std::string text = tree_to_json(t);
  CHECK(tree_from_json(text) == t);
  CHECK(tree_to_json(tree_from_json(text)) == text);
  CHECK(t.size() == 3);
  CHECK(tree_to_dot(t).find("digraph") == 0);
}

TEST_CASE("size bounds are never exceeded by accepted trees") {
  KeySpec keys = parse_keys("key R = 1;\n");
  Query q = parse_query("Ans() :- R(x,y).");
  Database db = parse_database("R(1,a).\nR(1,b).\nR(2,a).\nR(2,b).\nR(3,c).\n");
  auto in = prepare_instance(db, keys, q, {});

  struct Case {
    ProgramKind kind;
    std::unique_ptr<BranchingProgram> program;
  };
  std::vector<Case> cases;
  cases.push_back({ProgramKind::rep, rep_program(in)});
  cases.push_back({ProgramKind::seq_compact, seq_program(in, false)});
  cases.push_back({ProgramKind::seq_bitpath, seq_program(in, true)});
  cases.push_back({ProgramKind::ur, ur_program(in)});
  for (auto& c : cases) {
    NFTA a = build_nfta(build_dag(*c.program, Guards{16, 1000000, 100000}));
    std::size_t bound = size_bound(c.kind, in);
    auto accepted =
        enumerate_accepted(a, bound + 3, Guards{16, 1000000, 1000000});
    CHECK(!accepted.empty());
    for (const auto& t : accepted) CHECK(t.size() <= bound);
  }
}
