#include "ocqa/cqeval.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace ocqa {

std::string to_string(const Atom& atom) {
  std::vector<std::string> parts;
  parts.reserve(atom.terms.size());
  for (const auto& t : atom.terms) parts.push_back(to_string(t));
  return atom.predicate + "(" + join(parts, ",") + ")";
}

std::set<std::string> variables(const Query& query) {
  std::set<std::string> vars;
  for (const auto& t : query.answer_terms)
    if (t.is_variable) vars.insert(t.name);
  for (const auto& atom : query.atoms)
    for (const auto& t : atom.terms)
      if (t.is_variable) vars.insert(t.name);
  return vars;
}

std::set<std::string> answer_variables(const Query& query) {
  std::set<std::string> vars;
  for (const auto& t : query.answer_terms)
    if (t.is_variable) vars.insert(t.name);
  return vars;
}

bool is_sjf(const Query& query) {
  std::set<std::string> seen;
  for (const auto& atom : query.atoms)
    if (!seen.insert(atom.predicate).second) return false;
  return true;
}

std::set<std::string> quantified_variables(const Atom& atom,
                                           const Query& query) {
  std::set<std::string> ans = answer_variables(query);
  std::set<std::string> out;
  for (const auto& t : atom.terms)
    if (t.is_variable && !ans.count(t.name)) out.insert(t.name);
  return out;
}

Fact ground_atom(const Atom& atom,
                 const std::map<std::string, Constant>& assignment) {
  Fact fact;
  fact.predicate = atom.predicate;
  fact.args.reserve(atom.terms.size());
  for (const auto& t : atom.terms) {
    if (!t.is_variable) {
      fact.args.push_back(t.name);
    } else {
      auto it = assignment.find(t.name);
      if (it == assignment.end())
        throw ValidationError("unmapped variable " + t.name +
                              " in ground_atom");
      fact.args.push_back(it->second);
    }
  }
  return fact;
}

namespace {

// Backtracking homomorphism search, one body atom at a time. Calls `emit` for
// every complete assignment; a false return stops the search.
bool search(const Database& db, const Query& query, std::size_t index,
            std::map<std::string, Constant>& assignment,
            const std::function<bool(const std::map<std::string, Constant>&)>&
                emit) {
  if (index == query.atoms.size()) return emit(assignment);
  const Atom& atom = query.atoms[index];
  for (const Fact& fact : db.facts) {
    if (fact.predicate != atom.predicate ||
        fact.args.size() != atom.terms.size())
      continue;
    std::vector<std::string> bound;
    bool ok = true;
    for (std::size_t i = 0; i < atom.terms.size() && ok; ++i) {
      const Term& t = atom.terms[i];
      if (!t.is_variable) {
        ok = t.name == fact.args[i];
      } else if (auto it = assignment.find(t.name); it != assignment.end()) {
        ok = it->second == fact.args[i];
      } else {
        assignment.emplace(t.name, fact.args[i]);
        bound.push_back(t.name);
      }
    }
    if (ok && !search(db, query, index + 1, assignment, emit)) return false;
    for (const auto& v : bound) assignment.erase(v);
  }
  return true;
}

}  // namespace

std::set<std::vector<Constant>> answers(const Database& db,
                                        const Query& query) {
  std::set<std::vector<Constant>> result;
  std::map<std::string, Constant> assignment;
  search(db, query, 0, assignment,
         [&](const std::map<std::string, Constant>& a) {
           std::vector<Constant> tuple;
           tuple.reserve(query.answer_terms.size());
           for (const auto& t : query.answer_terms)
             tuple.push_back(t.is_variable ? a.at(t.name) : t.name);
           result.insert(std::move(tuple));
           return true;
         });
  return result;
}

bool entails(const Database& db, const Query& query,
             const std::vector<Constant>& answer_tuple) {
  if (answer_tuple.size() != query.answer_terms.size())
    throw ValidationError("answer tuple arity " +
                          std::to_string(answer_tuple.size()) +
                          " does not match the query head arity " +
                          std::to_string(query.answer_terms.size()));
  std::map<std::string, Constant> assignment;
  for (std::size_t i = 0; i < answer_tuple.size(); ++i) {
    const Term& t = query.answer_terms[i];
    if (!t.is_variable) {
      if (t.name != answer_tuple[i]) return false;
    } else {
      auto [it, inserted] = assignment.emplace(t.name, answer_tuple[i]);
      if (!inserted && it->second != answer_tuple[i]) return false;
    }
  }
  bool found = false;
  search(db, query, 0, assignment,
         [&](const std::map<std::string, Constant>&) {
           found = true;
           return false;  // one witness is enough
         });
  return found;
}

namespace {

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

struct QueryParser {
  const std::string& s;
  std::size_t pos = 0;

  explicit QueryParser(const std::string& text) : s(text) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError(what + " at offset " + std::to_string(pos) +
                          " in query");
  }

  void skip_space() {
    while (pos < s.size()) {
      if (std::isspace(static_cast<unsigned char>(s[pos]))) {
        ++pos;
      } else if (s[pos] == '#') {
        while (pos < s.size() && s[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
  }

  std::string ident() {
    std::size_t start = pos;
    while (pos < s.size() && is_ident_char(s[pos])) ++pos;
    if (pos == start) fail("expected identifier");
    return s.substr(start, pos - start);
  }

  void expect(const std::string& token) {
    skip_space();
    if (s.compare(pos, token.size(), token) != 0)
      fail("expected \"" + token + "\"");
    pos += token.size();
  }

  Term term() {
    skip_space();
    if (pos < s.size() && s[pos] == '"') {
      ++pos;
      std::size_t start = pos;
      while (pos < s.size() && s[pos] != '"') ++pos;
      if (pos >= s.size()) fail("unterminated constant");
      std::string value = s.substr(start, pos - start);
      ++pos;
      return make_const(value);
    }
    return make_var(ident());
  }

  std::vector<Term> term_list() {
    expect("(");
    std::vector<Term> terms;
    skip_space();
    if (pos < s.size() && s[pos] == ')') {
      ++pos;
      return terms;
    }
    while (true) {
      terms.push_back(term());
      skip_space();
      if (pos < s.size() && s[pos] == ',') {
        ++pos;
        continue;
      }
      expect(")");
      return terms;
    }
  }
};

}  // namespace

Query parse_query(const std::string& text) {
  QueryParser p(text);
  p.skip_space();
  std::string head = p.ident();
  if (head != "Ans")
    throw ValidationError("query head must be Ans, got " + head);
  Query query;
  query.answer_terms = p.term_list();
  p.expect(":-");
  while (true) {
    p.skip_space();
    Atom atom;
    atom.predicate = p.ident();
    atom.terms = p.term_list();
    query.atoms.push_back(std::move(atom));
    p.skip_space();
    if (p.pos < p.s.size() && p.s[p.pos] == ',') {
      ++p.pos;
      continue;
    }
    p.expect(".");
    break;
  }
  p.skip_space();
  if (p.pos != p.s.size()) p.fail("trailing input after query");
  // Safety of the head: answer variables must occur in the body.
  std::set<std::string> body_vars;
  for (const auto& atom : query.atoms)
    for (const auto& t : atom.terms)
      if (t.is_variable) body_vars.insert(t.name);
  for (const auto& t : query.answer_terms)
    if (t.is_variable && !body_vars.count(t.name))
      throw ValidationError("answer variable " + t.name +
                            " does not occur in the query body");
  return query;
}

std::string print_query(const Query& query) {
  std::vector<std::string> head;
  for (const auto& t : query.answer_terms) head.push_back(to_string(t));
  std::vector<std::string> body;
  for (const auto& atom : query.atoms) body.push_back(to_string(atom));
  return "Ans(" + join(head, ",") + ") :- " + join(body, ", ") + ".";
}

}  // namespace ocqa
