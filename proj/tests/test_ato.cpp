#include <doctest.h>

#include "fixtures.hpp"
#include "ocqa/programs.hpp"

using namespace ocqa;

namespace {

// Tiny hand-rolled programs for framework-level checks.
class TwoChoices final : public BranchingProgram {
 public:
  Configuration initial() override {
    return {"init", Quantifier::existential, true, "", Terminal::none};
  }
  std::vector<Configuration> expand(const Configuration& c) override {
    if (c.payload == "init")
      return {{"choice", Quantifier::existential, false, "", Terminal::none}};
    if (c.payload == "choice")
      return {{"la", Quantifier::existential, true, "a", Terminal::accept},
              {"lb", Quantifier::existential, true, "b", Terminal::accept}};
    throw ValidationError("unexpected payload");
  }
};

class DoubleUniversal final : public BranchingProgram {
 public:
  Configuration initial() override {
    return {"init", Quantifier::existential, true, "", Terminal::none};
  }
  std::vector<Configuration> expand(const Configuration& c) override {
    if (c.payload == "init")
      return {{"u1", Quantifier::universal, false, "", Terminal::none}};
    if (c.payload == "u1")
      return {{"u2", Quantifier::universal, false, "", Terminal::none}};
    if (c.payload == "u2")
      return {{"acc", Quantifier::existential, false, "", Terminal::accept}};
    throw ValidationError("unexpected payload");
  }
};

}  // namespace

TEST_CASE("build_dag merges shared configurations and spans count outputs") {
  TwoChoices p;
  ComputationDAG dag = build_dag(p);
  CHECK(dag.nodes.size() == 4);
  auto outputs = valid_outputs(dag);
  REQUIRE(outputs.size() == 2);
  CHECK(outputs[0].label.empty());
  CHECK(outputs[0].children.size() == 1);
  CHECK(span(dag) == 2);
}

TEST_CASE("well-behavedness flags stacked universal configurations") {
  DoubleUniversal p;
  ComputationDAG dag = build_dag(p);
  auto bad = check_well_behaved(dag, 1, 1000);
  CHECK_FALSE(bad.ok);
  CHECK(bad.max_universal_run == 2);
  CHECK(check_well_behaved(dag, 2, 1000).ok);
}

TEST_CASE("repair program on one violating block") {
  Database db = parse_database("R(1,a).\nR(1,b).\n");
  KeySpec keys = parse_keys("key R = 1;\n");
  Query q = parse_query("Ans() :- R(x,y).");
  auto in = prepare_instance(db, keys, q, {});
  auto program = rep_program(in);
  ComputationDAG dag = build_dag(*program);
  CHECK(span(dag) == 2);  // {R(1,a)} and {R(1,b)}; ∅ does not entail Q
  CHECK(check_well_behaved(dag, 1, 100000).ok);
}

TEST_CASE("repair program span equals the oracle on the worked example") {
  auto w = fixtures::worked_example();
  auto in = prepare_instance(w.db, w.keys, w.query, {}, &w.ghd);
  auto program = rep_program(in);
  ComputationDAG dag = build_dag(*program, Guards{16, 1000000, 100000});
  Count expected =
      brute_numerator(w.db, w.keys, w.query, {}, Semantics::repairs,
                      Guards{16, 1000000, 100000});
  CHECK(span(dag, Guards{16, 1000000, 100000}) == expected);
  CHECK(check_well_behaved(dag, 1, 1000000).ok);
}

TEST_CASE("subset mode counts classical repairs") {
  Database db = parse_database("R(1,a).\nR(1,b).\n");
  KeySpec keys = parse_keys("key R = 1;\n");
  Query q = parse_query("Ans() :- R(x,y).");
  auto in = prepare_instance(db, keys, q, {});
  auto program = rep_program(in, /*subset_mode=*/true);
  CHECK(span(build_dag(*program)) == 2);

  // A query only one fact satisfies: the subset span drops to 1.
  Query q2 = parse_query("Ans() :- R(x,\"a\").");
  auto in2 = prepare_instance(db, keys, q2, {});
  auto program2 = rep_program(in2, true);
  CHECK(span(build_dag(*program2)) == 1);
}

TEST_CASE("sequence program spans match the sequence oracle") {
  KeySpec keys = parse_keys("key R = 1;\n");
  Query q = parse_query("Ans() :- R(x,y).");

  SUBCASE("one violating block") {
    Database db = parse_database("R(1,a).\nR(1,b).\n");
    auto in = prepare_instance(db, keys, q, {});
    auto program = seq_program(in);
    // 2 of the 3 complete sequences keep a fact.
    CHECK(span(build_dag(*program)) == 2);
  }
  SUBCASE("consistent database: one empty-bodied output") {
    Database db = parse_database("R(1,a).\n");
    auto in = prepare_instance(db, keys, q, {});
    auto program = seq_program(in);
    ComputationDAG dag = build_dag(*program);
    auto outputs = valid_outputs(dag);
    CHECK(outputs.size() == 1);
    CHECK(check_well_behaved(dag, 1, 100000).ok);
  }
  SUBCASE("bitpath mode yields the same span") {
    Database db = parse_database("R(1,a).\nR(1,b).\nR(2,a).\nR(2,b).\n");
    auto in = prepare_instance(db, keys, q, {});
    Count compact = span(build_dag(*seq_program(in, false)));
    Count bitpath = span(build_dag(*seq_program(in, true)));
    Count expected = brute_numerator(db, keys, q, {}, Semantics::sequences);
    CHECK(compact == expected);
    CHECK(bitpath == expected);
  }
}

TEST_CASE("answer-span program") {
  Database db = parse_database("R(a,b).\nR(a,c).\nR(d,e).\n");
  Query q = parse_query("Ans(x) :- R(x,y).");
  auto in = prepare_instance(db, KeySpec{}, q, {"unused"}, nullptr,
                             /*require_answer_cover=*/true);
  auto program = ghwcq_program(in);
  ComputationDAG dag = build_dag(*program);
  CHECK(span(dag) == 2);  // answers a and d
  CHECK(check_well_behaved(dag, 1, 100000).ok);
}

TEST_CASE("uniform-subset program spans equal subset counts") {
  Database db = parse_database("R(a).\nS(b).\n");
  Query q = parse_query("Ans() :- R(x).");
  auto in = prepare_instance(db, KeySpec{}, q, {});
  auto program = ur_program(in);
  ComputationDAG dag = build_dag(*program);
  CHECK(span(dag) == 2);  // {R(a)} and {R(a),S(b)}
  CHECK(check_well_behaved(dag, 1, 100000).ok);
}
