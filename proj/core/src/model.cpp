#include "ocqa/model.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace ocqa {

std::string to_string(const Fact& fact) {
  return fact.predicate + "(" + join(fact.args, ",") + ")";
}

void Database::add(Fact fact) {
  if (fact.predicate.empty())
    throw ValidationError("fact with empty relation name");
  auto [it, inserted] = schema.emplace(fact.predicate, fact.args.size());
  if (!inserted && it->second != fact.args.size())
    throw ValidationError("arity mismatch for relation " + fact.predicate +
                          ": " + std::to_string(it->second) + " vs " +
                          std::to_string(fact.args.size()));
  facts.insert(std::move(fact));
}

bool Database::contains(const Fact& fact) const {
  return facts.count(fact) != 0;
}

std::set<Constant> Database::active_domain() const {
  std::set<Constant> dom;
  for (const auto& f : facts) dom.insert(f.args.begin(), f.args.end());
  return dom;
}

std::vector<Fact> Database::facts_of(const std::string& predicate) const {
  std::vector<Fact> out;
  for (const auto& f : facts)
    if (f.predicate == predicate) out.push_back(f);
  return out;
}

KeyValue key_value(const Fact& fact, const KeySpec& keys) {
  auto it = keys.positions.find(fact.predicate);
  if (it == keys.positions.end()) return {fact.predicate, fact.args};
  KeyValue kv{fact.predicate, {}};
  kv.projection.reserve(it->second.size());
  for (std::size_t pos : it->second) {
    if (pos == 0 || pos > fact.args.size())
      throw ValidationError("key position " + std::to_string(pos) +
                            " out of range for " + to_string(fact));
    kv.projection.push_back(fact.args[pos - 1]);
  }
  return kv;
}

std::vector<Block> blocks(const Database& db, const KeySpec& keys) {
  std::map<KeyValue, std::vector<Fact>> grouped;
  for (const auto& f : db.facts) grouped[key_value(f, keys)].push_back(f);
  std::vector<Block> out;
  out.reserve(grouped.size());
  for (auto& [kv, fs] : grouped) out.push_back({kv, std::move(fs)});
  return out;
}

bool is_consistent(const Database& db, const KeySpec& keys) {
  for (const auto& block : blocks(db, keys))
    if (block.facts.size() > 1) return false;
  return true;
}

std::vector<Operation> justified_operations(const Database& db,
                                            const KeySpec& keys) {
  std::set<Operation> ops;
  for (const auto& block : blocks(db, keys)) {
    const auto& fs = block.facts;
    for (std::size_t i = 0; i < fs.size(); ++i)
      for (std::size_t j = i + 1; j < fs.size(); ++j) {
        ops.insert({fs[i]});
        ops.insert({fs[j]});
        ops.insert({fs[i], fs[j]});  // block facts are sorted
      }
  }
  return {ops.begin(), ops.end()};
}

Database apply_operation(const Database& db, const Operation& op) {
  Database out = db;
  for (const auto& f : op) out.facts.erase(f);
  return out;
}

Term make_var(std::string name) { return {true, std::move(name)}; }
Term make_const(std::string name) { return {false, std::move(name)}; }

std::string to_string(const Term& term) {
  return term.is_variable ? term.name : "\"" + term.name + "\"";
}

bool coherent(const MappingSet& mappings) {
  std::map<std::string, Constant> assignment;
  for (const auto& pair : mappings) {
    if (pair.pattern.size() != pair.image.size()) return false;
    for (std::size_t i = 0; i < pair.pattern.size(); ++i) {
      const Term& t = pair.pattern[i];
      if (!t.is_variable) {
        if (t.name != pair.image[i]) return false;
      } else {
        auto [it, inserted] = assignment.emplace(t.name, pair.image[i]);
        if (!inserted && it->second != pair.image[i]) return false;
      }
    }
  }
  return true;
}

std::map<std::string, Constant> mapping_assignment(const MappingSet& mappings) {
  if (!coherent(mappings))
    throw ValidationError("mapping_assignment on an incoherent mapping set");
  std::map<std::string, Constant> assignment;
  for (const auto& pair : mappings)
    for (std::size_t i = 0; i < pair.pattern.size(); ++i)
      if (pair.pattern[i].is_variable)
        assignment.emplace(pair.pattern[i].name, pair.image[i]);
  return assignment;
}

namespace {

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::string strip(const std::string& line) {
  std::string s = line;
  if (auto hash = s.find('#'); hash != std::string::npos) s.erase(hash);
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

// Parses `R(a,b,c)` starting at pos; advances pos past the closing paren.
Fact parse_fact_at(const std::string& s, std::size_t& pos,
                   const std::string& context) {
  auto fail = [&](const std::string& what) -> ValidationError {
    return ValidationError(what + " in \"" + context + "\"");
  };
  std::size_t start = pos;
  while (pos < s.size() && is_ident_char(s[pos])) ++pos;
  if (pos == start) throw fail("expected relation name");
  Fact fact;
  fact.predicate = s.substr(start, pos - start);
  if (pos >= s.size() || s[pos] != '(') throw fail("expected '('");
  ++pos;
  while (true) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
    std::size_t arg_start = pos;
    while (pos < s.size() && is_ident_char(s[pos])) ++pos;
    if (pos == arg_start) throw fail("expected constant");
    fact.args.push_back(s.substr(arg_start, pos - arg_start));
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
    if (pos < s.size() && s[pos] == ',') {
      ++pos;
      continue;
    }
    break;
  }
  if (pos >= s.size() || s[pos] != ')') throw fail("expected ')'");
  ++pos;
  return fact;
}

}  // namespace

Database parse_database(const std::string& text) {
  Database db;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    std::string line = strip(raw);
    if (line.empty()) continue;
    std::size_t pos = 0;
    Fact fact = parse_fact_at(line, pos, line);
    if (pos >= line.size() || line[pos] != '.')
      throw ValidationError("expected '.' after fact in \"" + line + "\"");
    if (strip(line.substr(pos + 1)) != "")
      throw ValidationError("trailing input after fact in \"" + line + "\"");
    db.add(std::move(fact));
  }
  return db;
}

std::string print_database(const Database& db) {
  std::string out;
  for (const auto& f : db.facts) out += to_string(f) + ".\n";
  return out;
}

KeySpec parse_keys(const std::string& text) {
  KeySpec keys;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    std::string line = strip(raw);
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kw, rel, eq;
    ls >> kw >> rel >> eq;
    if (kw != "key" || eq != "=" || !ls)
      throw ValidationError("expected `key R = 1,2;` in \"" + line + "\"");
    std::string rest;
    std::getline(ls, rest);
    rest = strip(rest);
    if (rest.empty() || rest.back() != ';')
      throw ValidationError("expected ';' in \"" + line + "\"");
    rest.pop_back();
    std::vector<std::size_t> positions;
    for (const auto& tok : split(rest, ',')) {
      std::string t = strip(tok);
      if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
        throw ValidationError("bad key position \"" + t + "\" in \"" + line +
                              "\"");
      positions.push_back(static_cast<std::size_t>(std::stoul(t)));
    }
    std::sort(positions.begin(), positions.end());
    if (std::adjacent_find(positions.begin(), positions.end()) !=
        positions.end())
      throw ValidationError("duplicate key position in \"" + line + "\"");
    if (positions.empty() || positions.front() == 0)
      throw ValidationError("key positions are 1-based in \"" + line + "\"");
    if (!keys.positions.emplace(rel, std::move(positions)).second)
      throw ValidationError("duplicate key declaration for " + rel);
  }
  return keys;
}

std::string print_keys(const KeySpec& keys) {
  std::string out;
  for (const auto& [rel, positions] : keys.positions) {
    std::vector<std::string> parts;
    for (std::size_t p : positions) parts.push_back(std::to_string(p));
    out += "key " + rel + " = " + join(parts, ",") + ";\n";
  }
  return out;
}

}  // namespace ocqa
