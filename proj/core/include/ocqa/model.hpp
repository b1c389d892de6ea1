#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ocqa/common.hpp"

namespace ocqa {

using Constant = std::string;

struct Fact {
  std::string predicate;
  std::vector<Constant> args;

  auto operator<=>(const Fact&) const = default;
};

std::string to_string(const Fact& fact);

// A database with primary keys: facts are a set, the schema records one arity
// per relation name.
struct Database {
  std::map<std::string, std::size_t> schema;  // relation -> arity
  std::set<Fact> facts;

  void add(Fact fact);
  bool contains(const Fact& fact) const;
  std::size_t size() const { return facts.size(); }
  std::set<Constant> active_domain() const;
  std::vector<Fact> facts_of(const std::string& predicate) const;

  auto operator<=>(const Database&) const = default;
};

// Primary keys, one per relation at most; positions are 1-based and sorted.
struct KeySpec {
  std::map<std::string, std::vector<std::size_t>> positions;

  bool has_key(const std::string& relation) const {
    return positions.count(relation) != 0;
  }
};

// The key value of a fact: projection of the tuple onto the key positions if
// the relation has a key in the key spec, the full tuple otherwise.
struct KeyValue {
  std::string predicate;
  std::vector<Constant> projection;

  auto operator<=>(const KeyValue&) const = default;
};

KeyValue key_value(const Fact& fact, const KeySpec& keys);

struct Block {
  KeyValue key;
  std::vector<Fact> facts;  // sorted
};

// Partition of the database into blocks of key-equal facts, in canonical
// (predicate, key projection) order.
std::vector<Block> blocks(const Database& db, const KeySpec& keys);

bool is_consistent(const Database& db, const KeySpec& keys);

// A removal operation -F with F a set of one or two facts (kept sorted).
using Operation = std::vector<Fact>;

// All operations justified in db: -F with F a subset of some key-violating
// pair {f, g} of db.
std::vector<Operation> justified_operations(const Database& db,
                                            const KeySpec& keys);

Database apply_operation(const Database& db, const Operation& op);

// Terms of a query atom: variables or constants.
struct Term {
  bool is_variable = false;
  std::string name;

  auto operator<=>(const Term&) const = default;
};

Term make_var(std::string name);
Term make_const(std::string name);
std::string to_string(const Term& term);

// One guessed assignment (ybar -> cbar): a term pattern and a constant image
// of equal length.
struct MappingPair {
  std::vector<Term> pattern;
  std::vector<Constant> image;

  auto operator<=>(const MappingPair&) const = default;
};

using MappingSet = std::vector<MappingPair>;

// Coherence of a mapping set: each constant in a pattern maps to itself and
// every occurrence of a variable (across all pairs) maps to the same constant.
bool coherent(const MappingSet& mappings);

// The substitution induced by a coherent mapping set (variable -> constant).
std::map<std::string, Constant> mapping_assignment(const MappingSet& mappings);

// Text formats.
//
// Database: one fact per line, `R(a,b,c).`; `#` starts a comment.
// Keys: one declaration per line, `key R = 1,2;`.
Database parse_database(const std::string& text);
std::string print_database(const Database& db);
KeySpec parse_keys(const std::string& text);
std::string print_keys(const KeySpec& keys);

}  // namespace ocqa
