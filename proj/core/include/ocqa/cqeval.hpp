#pragma once

#include <set>
#include <string>
#include <vector>

#include "ocqa/model.hpp"

namespace ocqa {

struct Atom {
  std::string predicate;
  std::vector<Term> terms;

  auto operator<=>(const Atom&) const = default;
};

std::string to_string(const Atom& atom);

// A conjunctive query Ans(xbar) :- R1(y1), ..., Rl(yl). The body keeps the
// atom order of the source text; the alternating procedures iterate atoms in
// this order.
struct Query {
  std::vector<Term> answer_terms;
  std::vector<Atom> atoms;

  auto operator<=>(const Query&) const = default;
};

std::set<std::string> variables(const Query& query);
std::set<std::string> answer_variables(const Query& query);

// Self-join-free: no relation name occurs in two body atoms.
bool is_sjf(const Query& query);

// Terms of `atom` that are neither answer variables of `query` nor constants;
// these are the terms a covering vertex must expose.
std::set<std::string> quantified_variables(const Atom& atom,
                                           const Query& query);

// Applies a variable assignment to an atom; throws if a variable is unmapped.
Fact ground_atom(const Atom& atom,
                 const std::map<std::string, Constant>& assignment);

// All answers of the query over db (set semantics). For a Boolean query this
// is {()} or {}.
std::set<std::vector<Constant>> answers(const Database& db, const Query& query);

// Whether db |= Q(cbar).
bool entails(const Database& db, const Query& query,
             const std::vector<Constant>& answer_tuple);

// Text format: `Ans(x,z) :- R(x,y), S(y,z,"c").`; quoted tokens are
// constants, bare tokens are variables. `#` starts a comment.
Query parse_query(const std::string& text);
std::string print_query(const Query& query);

}  // namespace ocqa
