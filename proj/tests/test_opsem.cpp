#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "ocqa/opsem.hpp"

using namespace ocqa;

namespace {

const KeySpec kKeyR1 = parse_keys("key R = 1;\n");

}  // namespace

TEST_CASE("enumerate_repairs on a single violating block") {
  Database db = parse_database("R(1,a).\nR(1,b).\n");
  auto repairs = enumerate_repairs(db, kKeyR1);
  REQUIRE(repairs.size() == 3);  // keep a, keep b, or drop both
  std::set<std::size_t> sizes;
  for (const auto& r : repairs) {
    CHECK(is_consistent(r, kKeyR1));
    sizes.insert(r.size());
  }
  CHECK(sizes == std::set<std::size_t>{0, 1});
}

TEST_CASE("enumerate_repairs: consistent database repairs to itself") {
  Database db = parse_database("R(1,a).\nR(2,b).\nS(x).\n");
  auto repairs = enumerate_repairs(db, kKeyR1);
  REQUIRE(repairs.size() == 1);
  CHECK(repairs[0].facts == db.facts);
}

TEST_CASE("count_repairs matches the oracle and the worked example") {
  auto w = fixtures::worked_example();
  CHECK(count_repairs(w.db, w.keys) == 432);
  CHECK(enumerate_repairs(w.db, w.keys, Guards{16, 1000000, 1000}).size() ==
        432);
  CHECK(count_repairs(parse_database("R(1,a).\nR(1,b).\n"), kKeyR1) == 3);
}

TEST_CASE("sequence enumeration and the closed-form count") {
  SUBCASE("one block of size 2") {
    Database db = parse_database("R(1,a).\nR(1,b).\n");
    auto seqs = enumerate_sequences(db, kKeyR1);
    CHECK(seqs.size() == 3);
    for (const auto& s : seqs) {
      CHECK(s.size() == 1);
      CHECK(is_consistent(apply_sequence(db, s), kKeyR1));
    }
    CHECK(count_sequences(db, kKeyR1) == 3);
  }
  SUBCASE("two blocks of size 2 interleave") {
    Database db = parse_database("R(1,a).\nR(1,b).\nR(2,a).\nR(2,b).\n");
    CHECK(enumerate_sequences(db, kKeyR1).size() == 18);
    CHECK(count_sequences(db, kKeyR1) == 18);
  }
  SUBCASE("single block of size 3") {
    Database db = parse_database("R(1,a).\nR(1,b).\nR(1,c).\n");
    CHECK(enumerate_sequences(db, kKeyR1).size() == 12);
    CHECK(count_sequences(db, kKeyR1) == 12);
  }
  SUBCASE("consistent database has the empty sequence only") {
    Database db = parse_database("R(1,a).\n");
    auto seqs = enumerate_sequences(db, kKeyR1);
    REQUIRE(seqs.size() == 1);
    CHECK(seqs[0].empty());
    CHECK(count_sequences(db, kKeyR1) == 1);
  }
  SUBCASE("every intermediate operation is justified") {
    Database db = parse_database("R(1,a).\nR(1,b).\nR(1,c).\nR(2,a).\nR(2,b).\n");
    for (const auto& s : enumerate_sequences(db, kKeyR1)) {
      Database current = db;
      for (const auto& op : s) {
        auto justified = justified_operations(current, kKeyR1);
        CHECK(std::find(justified.begin(), justified.end(), op) !=
              justified.end());
        current = apply_operation(current, op);
      }
      CHECK(is_consistent(current, kKeyR1));
    }
  }
}

TEST_CASE("closed-form counts agree with oracles on random instances") {
  std::mt19937_64 rng(20260823);
  for (int trial = 0; trial < 60; ++trial) {
    Database db;
    std::uniform_int_distribution<int> nfacts(1, 8), key(1, 3), val(1, 3);
    int n = nfacts(rng);
    for (int i = 0; i < n; ++i)
      db.add({"R", {std::to_string(key(rng)), std::to_string(val(rng))}});
    CAPTURE(print_database(db));
    CHECK(count_repairs(db, kKeyR1) ==
          Count(static_cast<unsigned long>(enumerate_repairs(db, kKeyR1).size())));
    CHECK(count_sequences(db, kKeyR1) ==
          Count(static_cast<unsigned long>(
              enumerate_sequences(db, kKeyR1, Guards{16, 1000000, 200000})
                  .size())));
    CHECK(count_subset_repairs(db, kKeyR1) ==
          Count(static_cast<unsigned long>(
              enumerate_subset_repairs(db, kKeyR1).size())));
  }
}

TEST_CASE("subset repairs and uniform subsets") {
  Database db = parse_database("R(1,a).\nR(1,b).\n");
  CHECK(enumerate_subset_repairs(db, kKeyR1).size() == 2);
  CHECK(count_subset_repairs(db, kKeyR1) == 2);
  CHECK(enumerate_subsets(db).size() == 4);
  CHECK(count_subsets(db) == 4);
}

TEST_CASE("guards trip on oversized inputs") {
  Database big;
  for (int i = 0; i < 20; ++i) big.add({"R", {std::to_string(i), "x"}});
  CHECK_THROWS_AS(enumerate_repairs(big, kKeyR1), GuardError);
  CHECK_THROWS_AS(enumerate_subsets(big), GuardError);
  // Closed forms are unguarded.
  CHECK(count_repairs(big, kKeyR1) == 1);
}

TEST_CASE("brute-force relative frequencies") {
  Database db = parse_database("R(1,a).\nR(1,b).\n");
  Query q = parse_query("Ans() :- R(x,y).");

  SUBCASE("repairs and sequences give 2/3") {
    for (Semantics sem : {Semantics::repairs, Semantics::sequences}) {
      RfOptions opt;
      opt.semantics = sem;
      auto r = rf(db, kKeyR1, q, {}, opt);
      CHECK(r.numerator == 2);
      CHECK(r.denominator == 3);
      CHECK(r.value == Ratio(2, 3));
    }
  }
  SUBCASE("subset semantics gives 2/2") {
    RfOptions opt;
    opt.semantics = Semantics::subset;
    CHECK(rf(db, kKeyR1, q, {}, opt).value == 1);
  }
  SUBCASE("uniform subsets over two independent facts") {
    Database d2 = parse_database("R(a).\nS(b).\n");
    Query q2 = parse_query("Ans() :- R(x).");
    RfOptions opt;
    opt.semantics = Semantics::ur;
    auto r = rf(d2, KeySpec{}, q2, {}, opt);
    CHECK(r.numerator == 2);  // {R(a)} and {R(a),S(b)}
    CHECK(r.denominator == 4);
  }
  SUBCASE("consistent database entailing the tuple") {
    Database d3 = parse_database("R(1,a).\n");
    auto r = rf(d3, kKeyR1, q, {}, RfOptions{});
    CHECK(r.value == 1);
  }
  SUBCASE("answer-span pseudo-semantics") {
    Query qa = parse_query("Ans(x) :- R(x,y).");
    RfOptions opt;
    opt.semantics = Semantics::answers;
    auto r = rf(db, kKeyR1, qa, {"ignored"}, opt);
    CHECK(r.numerator == 1);  // the single key value 1
    CHECK(r.denominator == 1);
  }
}

TEST_CASE("semantics and engine names parse") {
  CHECK(parse_semantics("repairs") == Semantics::repairs);
  CHECK(parse_semantics("ur") == Semantics::ur);
  CHECK(parse_engine("nfta") == Engine::nfta);
  CHECK_THROWS_AS(parse_semantics("bogus"), ValidationError);
  CHECK_THROWS_AS(parse_engine("bogus"), ValidationError);
}
