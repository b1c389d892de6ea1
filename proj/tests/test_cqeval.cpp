#include <doctest.h>

#include "ocqa/cqeval.hpp"

using namespace ocqa;

TEST_CASE("query parse / print round-trip") {
  Query q = parse_query("Ans(x,z) :- R(x,y), S(y,z,\"c\").");
  REQUIRE(q.answer_terms.size() == 2);
  CHECK(q.answer_terms[0] == make_var("x"));
  REQUIRE(q.atoms.size() == 2);
  CHECK(q.atoms[1].predicate == "S");
  CHECK(q.atoms[1].terms[2] == make_const("c"));
  CHECK(parse_query(print_query(q)) == q);

  Query boolean = parse_query("Ans() :- R(x).");
  CHECK(boolean.answer_terms.empty());
  CHECK(parse_query(print_query(boolean)) == boolean);

  CHECK_THROWS_AS(parse_query("Foo(x) :- R(x)."), ValidationError);
  CHECK_THROWS_AS(parse_query("Ans(x) :- R(y)."), ValidationError);  // unsafe
  CHECK_THROWS_AS(parse_query("Ans(x) :- R(x)"), ValidationError);
}

TEST_CASE("variable classification") {
  Query q = parse_query("Ans(x) :- R(x,y), S(y,\"c\").");
  CHECK(variables(q) == std::set<std::string>{"x", "y"});
  CHECK(answer_variables(q) == std::set<std::string>{"x"});
  CHECK(is_sjf(q));
  CHECK_FALSE(is_sjf(parse_query("Ans() :- R(x,y), R(y,z).")));

  CHECK(quantified_variables(q.atoms[0], q) == std::set<std::string>{"y"});
  CHECK(quantified_variables(q.atoms[1], q) == std::set<std::string>{"y"});
}

TEST_CASE("answers and entailment") {
  Database db = parse_database(
      "R(a,b).\n"
      "R(b,c).\n"
      "S(b,c).\n"
      "S(c,c).\n");
  Query q = parse_query("Ans(x,z) :- R(x,y), S(y,z).");
  auto result = answers(db, q);
  CHECK(result == std::set<std::vector<Constant>>{{"a", "c"}, {"b", "c"}});
  CHECK(entails(db, q, {"a", "c"}));
  CHECK_FALSE(entails(db, q, {"c", "a"}));
  CHECK_THROWS_AS(entails(db, q, {"a"}), ValidationError);

  SUBCASE("boolean query") {
    Query b = parse_query("Ans() :- R(x,y), S(y,\"c\").");
    CHECK(answers(db, b) == std::set<std::vector<Constant>>{{}});
    CHECK(entails(db, b, {}));
    Query miss = parse_query("Ans() :- R(x,y), S(y,\"z\").");
    CHECK(answers(db, miss).empty());
  }

  SUBCASE("repeated variables force equal columns") {
    Query diag = parse_query("Ans(x) :- S(x,x).");
    CHECK(answers(db, diag) == std::set<std::vector<Constant>>{{"c"}});
  }

  SUBCASE("constant in the head") {
    Query q2 = parse_query("Ans(\"k\",x) :- R(x,y).");
    CHECK(answers(db, q2) ==
          std::set<std::vector<Constant>>{{"k", "a"}, {"k", "b"}});
    CHECK(entails(db, q2, {"k", "a"}));
    CHECK_FALSE(entails(db, q2, {"w", "a"}));
  }

  SUBCASE("ground_atom") {
    Atom atom = q.atoms[0];
    CHECK(ground_atom(atom, {{"x", "a"}, {"y", "b"}}) ==
          Fact{"R", {"a", "b"}});
    CHECK_THROWS_AS(ground_atom(atom, {{"x", "a"}}), ValidationError);
  }
}
