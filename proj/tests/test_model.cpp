#include <doctest.h>

#include "ocqa/model.hpp"

using namespace ocqa;

namespace {

Database db_from(const char* text) { return parse_database(text); }

}  // namespace

TEST_CASE("database parse / print round-trip") {
  const char* text =
      "# small example\n"
      "R(a,b).\n"
      "R(a,c).   # second fact of the block\n"
      "S(b).\n"
      "\n";
  Database db = db_from(text);
  CHECK(db.size() == 3);
  CHECK(db.schema.at("R") == 2);
  CHECK(db.schema.at("S") == 1);
  CHECK(db.contains({"R", {"a", "c"}}));

  Database again = parse_database(print_database(db));
  CHECK(again == db);
}

TEST_CASE("database parse rejects malformed input") {
  CHECK_THROWS_AS(db_from("R(a,b)\n"), ValidationError);     // missing dot
  CHECK_THROWS_AS(db_from("R(a,b). x\n"), ValidationError);  // trailing junk
  CHECK_THROWS_AS(db_from("R(a,).\n"), ValidationError);
  CHECK_THROWS_AS(db_from("R(a).\nR(a,b).\n"), ValidationError);  // arity
}

TEST_CASE("key spec parse / print round-trip") {
  KeySpec keys = parse_keys("key R = 1,2;\nkey S = 1;\n# comment\n");
  CHECK(keys.positions.at("R") == std::vector<std::size_t>{1, 2});
  CHECK(keys.positions.at("S") == std::vector<std::size_t>{1});
  CHECK(parse_keys(print_keys(keys)).positions == keys.positions);

  CHECK_THROWS_AS(parse_keys("key R = 0;\n"), ValidationError);
  CHECK_THROWS_AS(parse_keys("key R = 1,1;\n"), ValidationError);
  CHECK_THROWS_AS(parse_keys("key R = 1\n"), ValidationError);
  CHECK_THROWS_AS(parse_keys("key R = 1;\nkey R = 2;\n"), ValidationError);
}

TEST_CASE("key values and blocks") {
  Database db = db_from("R(a,b).\nR(a,c).\nR(b,b).\nS(a,b).\nS(c,d).\n");
  KeySpec keys = parse_keys("key R = 1;\n");

  CHECK(key_value({"R", {"a", "b"}}, keys) == KeyValue{"R", {"a"}});
  // No key declared for S: the key value is the full tuple.
  CHECK(key_value({"S", {"a", "b"}}, keys) == KeyValue{"S", {"a", "b"}});

  auto bs = blocks(db, keys);
  REQUIRE(bs.size() == 4);
  CHECK(bs[0].key == KeyValue{"R", {"a"}});
  CHECK(bs[0].facts.size() == 2);
  CHECK(bs[1].key == KeyValue{"R", {"b"}});
  CHECK(bs[2].key == KeyValue{"S", {"a", "b"}});
  CHECK(bs[3].key == KeyValue{"S", {"c", "d"}});

  CHECK_FALSE(is_consistent(db, keys));
  CHECK(is_consistent(db, parse_keys("")));  // keyless relations never clash
  CHECK(is_consistent(db_from("R(a,b).\nR(b,c).\n"), keys));
}

TEST_CASE("justified operations") {
  KeySpec keys = parse_keys("key R = 1;\n");

  SUBCASE("consistent database has none") {
    CHECK(justified_operations(db_from("R(a,b).\nR(b,c).\n"), keys).empty());
  }

  SUBCASE("one violating pair yields three operations") {
    Database db = db_from("R(a,b).\nR(a,c).\n");
    auto ops = justified_operations(db, keys);
    REQUIRE(ops.size() == 3);
    Fact f{"R", {"a", "b"}}, g{"R", {"a", "c"}};
    CHECK(ops[0] == Operation{f});
    CHECK(ops[1] == Operation{f, g});
    CHECK(ops[2] == Operation{g});
    CHECK(apply_operation(db, ops[1]).size() == 0);
    CHECK(apply_operation(db, ops[0]).contains(g));
  }

  SUBCASE("a block of three yields all pairs and singletons") {
    Database db = db_from("R(a,b).\nR(a,c).\nR(a,d).\n");
    // 3 singletons + 3 pairs.
    CHECK(justified_operations(db, keys).size() == 6);
  }
}

TEST_CASE("coherence of mapping sets") {
  auto v = [](const char* n) { return make_var(n); };
  auto c = [](const char* n) { return make_const(n); };

  // {(x,y) -> (a,b)} alone is coherent.
  MappingSet ms{{{v("x"), v("y")}, {"a", "b"}}};
  CHECK(coherent(ms));

  // Shared variable mapped consistently.
  ms.push_back({{v("y"), v("z")}, {"b", "c"}});
  CHECK(coherent(ms));
  CHECK(mapping_assignment(ms).at("z") == "c");

  // Shared variable mapped inconsistently.
  ms.push_back({{v("x")}, {"q"}});
  CHECK_FALSE(coherent(ms));

  // A constant in the pattern must map to itself.
  CHECK(coherent({{{c("a"), v("x")}, {"a", "b"}}}));
  CHECK_FALSE(coherent({{{c("a"), v("x")}, {"b", "b"}}}));

  // Repeated variable inside a single pattern.
  CHECK_FALSE(coherent({{{v("x"), v("x")}, {"a", "b"}}}));
  CHECK(coherent({{{v("x"), v("x")}, {"a", "a"}}}));
}
