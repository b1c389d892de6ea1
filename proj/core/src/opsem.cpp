#include "ocqa/opsem.hpp"

#include <algorithm>
#include <functional>

#include "ocqa/programs.hpp"

namespace ocqa {

Semantics parse_semantics(const std::string& name) {
  if (name == "repairs") return Semantics::repairs;
  if (name == "sequences") return Semantics::sequences;
  if (name == "subset") return Semantics::subset;
  if (name == "ur") return Semantics::ur;
  if (name == "answers") return Semantics::answers;
  throw ValidationError("unknown semantics: " + name);
}

Engine parse_engine(const std::string& name) {
  if (name == "brute") return Engine::brute;
  if (name == "nfta") return Engine::nfta;
  throw ValidationError("unknown engine: " + name);
}

namespace {

void check_oracle_scale(const Database& d, const Guards& guards) {
  if (d.size() > guards.max_oracle_facts)
    throw GuardError("database has " + std::to_string(d.size()) +
                     " facts; the enumeration guard allows " +
                     std::to_string(guards.max_oracle_facts));
}

}  // namespace

std::vector<Database> enumerate_repairs(const Database& d, const KeySpec& keys,
                                        const Guards& guards) {
  check_oracle_scale(d, guards);
  auto bs = blocks(d, keys);
  std::vector<Database> out;
  Database base;
  base.schema = d.schema;
  out.push_back(base);
  for (const auto& block : bs) {
    std::vector<Database> next;
    for (const auto& partial : out) {
      if (block.facts.size() == 1) {
        Database ext = partial;
        ext.add(block.facts[0]);
        next.push_back(std::move(ext));
      } else {
        next.push_back(partial);  // drop the whole block
        for (const auto& f : block.facts) {
          Database ext = partial;
          ext.add(f);
          next.push_back(std::move(ext));
        }
      }
      if (next.size() > guards.max_trees)
        throw GuardError("repair enumeration exceeds the guard of " +
                         std::to_string(guards.max_trees));
    }
    out = std::move(next);
  }
  return out;
}

Database apply_sequence(const Database& d, const RepairingSequence& s) {
  Database current = d;
  for (const auto& op : s) current = apply_operation(current, op);
  return current;
}

std::vector<RepairingSequence> enumerate_sequences(const Database& d,
                                                   const KeySpec& keys,
                                                   const Guards& guards) {
  check_oracle_scale(d, guards);
  if (count_sequences(d, keys) > Count(static_cast<unsigned long>(guards.max_trees)))
    throw GuardError("sequence enumeration exceeds the guard of " +
                     std::to_string(guards.max_trees));
  std::vector<RepairingSequence> out;
  RepairingSequence current;
  std::function<void(const Database&)> walk = [&](const Database& db) {
    auto ops = justified_operations(db, keys);
    if (ops.empty()) {  // consistent: one complete sequence
      out.push_back(current);
      return;
    }
    for (const auto& op : ops) {
      current.push_back(op);
      walk(apply_operation(db, op));
      current.pop_back();
    }
  };
  walk(d);
  return out;
}

std::vector<Database> enumerate_subset_repairs(const Database& d,
                                               const KeySpec& keys,
                                               const Guards& guards) {
  check_oracle_scale(d, guards);
  std::vector<Database> out;
  Database base;
  base.schema = d.schema;
  out.push_back(base);
  for (const auto& block : blocks(d, keys)) {
    std::vector<Database> next;
    for (const auto& partial : out)
      for (const auto& f : block.facts) {  // exactly one fact per block
        Database ext = partial;
        ext.add(f);
        next.push_back(std::move(ext));
      }
    if (next.size() > guards.max_trees)
      throw GuardError("subset-repair enumeration exceeds the guard of " +
                       std::to_string(guards.max_trees));
    out = std::move(next);
  }
  return out;
}

std::vector<Database> enumerate_subsets(const Database& d,
                                        const Guards& guards) {
  check_oracle_scale(d, guards);
  std::vector<Fact> facts(d.facts.begin(), d.facts.end());
  if (facts.size() >= 8 * sizeof(std::size_t))
    throw GuardError("too many facts for subset enumeration");
  std::vector<Database> out;
  const std::size_t total = std::size_t{1} << facts.size();
  if (total > guards.max_trees)
    throw GuardError("subset enumeration exceeds the guard of " +
                     std::to_string(guards.max_trees));
  for (std::size_t mask = 0; mask < total; ++mask) {
    Database sub;
    sub.schema = d.schema;
    for (std::size_t i = 0; i < facts.size(); ++i)
      if (mask & (std::size_t{1} << i)) sub.add(facts[i]);
    out.push_back(std::move(sub));
  }
  return out;
}

Count count_repairs(const Database& d, const KeySpec& keys) {
  Count total = 1;
  for (const auto& block : blocks(d, keys))
    if (block.facts.size() > 1)
      total *= Count(static_cast<unsigned long>(block.facts.size() + 1));
  return total;
}

namespace {

// Per-block sequence counts split by sequence length: a block of size n can
// shrink by one fact (n ways) or by a pair (n choose 2 ways) per step, and a
// block of size <= 1 admits only the empty sequence.
std::vector<Count> block_length_counts(std::size_t n) {
  std::vector<std::vector<Count>> g(n + 1);
  g[0] = {1};
  if (n >= 1) g[1] = {1};
  for (std::size_t m = 2; m <= n; ++m) {
    g[m].assign(m, 0);  // longest sequence: m-1 operations
    Count singles = static_cast<unsigned long>(m);
    Count pairs = binomial(m, 2);
    for (std::size_t len = 0; len + 1 < g[m].size() + 1; ++len) {
      Count total = 0;
      if (len >= 1 && len - 1 < g[m - 1].size())
        total += singles * g[m - 1][len - 1];
      if (len >= 1 && len - 1 < g[m - 2].size())
        total += pairs * g[m - 2][len - 1];
      g[m][len] = total;
    }
  }
  return g[n];
}

}  // namespace

Count count_sequences(const Database& d, const KeySpec& keys) {
  // Interleave the per-block, length-indexed counts: operations of distinct
  // blocks commute freely, so lengths combine by binomial convolution.
  std::vector<Count> combined = {1};
  for (const auto& block : blocks(d, keys)) {
    std::vector<Count> local = block_length_counts(block.facts.size());
    std::vector<Count> next(combined.size() + local.size() - 1, 0);
    for (std::size_t i = 0; i < combined.size(); ++i)
      for (std::size_t j = 0; j < local.size(); ++j)
        next[i + j] += combined[i] * local[j] * binomial(i + j, i);
    combined = std::move(next);
  }
  Count total = 0;
  for (const auto& c : combined) total += c;
  return total;
}

Count count_subset_repairs(const Database& d, const KeySpec& keys) {
  Count total = 1;
  for (const auto& block : blocks(d, keys))
    total *= Count(static_cast<unsigned long>(block.facts.size()));
  return total;
}

Count count_subsets(const Database& d) {
  Count total;
  mpz_ui_pow_ui(total.get_mpz_t(), 2,
                static_cast<unsigned long>(d.size()));
  return total;
}

Count denominator(const Database& d, const KeySpec& keys,
                  Semantics semantics) {
  switch (semantics) {
    case Semantics::repairs:
      return count_repairs(d, keys);
    case Semantics::sequences:
      return count_sequences(d, keys);
    case Semantics::subset:
      return count_subset_repairs(d, keys);
    case Semantics::ur:
      return count_subsets(d);
    case Semantics::answers:
      return 1;
  }
  throw ValidationError("unreachable semantics");
}

Count brute_numerator(const Database& d, const KeySpec& keys, const Query& q,
                      const std::vector<Constant>& tuple, Semantics semantics,
                      const Guards& guards) {
  Count hits = 0;
  switch (semantics) {
    case Semantics::repairs:
      for (const auto& r : enumerate_repairs(d, keys, guards))
        if (entails(r, q, tuple)) ++hits;
      return hits;
    case Semantics::sequences:
      for (const auto& s : enumerate_sequences(d, keys, guards))
        if (entails(apply_sequence(d, s), q, tuple)) ++hits;
      return hits;
    case Semantics::subset:
      for (const auto& r : enumerate_subset_repairs(d, keys, guards))
        if (entails(r, q, tuple)) ++hits;
      return hits;
    case Semantics::ur:
      for (const auto& sub : enumerate_subsets(d, guards))
        if (entails(sub, q, tuple)) ++hits;
      return hits;
    case Semantics::answers:
      return Count(static_cast<unsigned long>(answers(d, q).size()));
  }
  throw ValidationError("unreachable semantics");
}

RfResult rf(const Database& d, const KeySpec& keys, const Query& q,
            const std::vector<Constant>& tuple, const RfOptions& options) {
  if (tuple.size() != q.answer_terms.size())
    throw ValidationError("answer tuple arity does not match the query head");
  RfResult result;
  result.denominator = denominator(d, keys, options.semantics);
  if (options.engine == Engine::brute) {
    result.numerator =
        brute_numerator(d, keys, q, tuple, options.semantics, options.guards);
  } else {
    result.numerator = pipeline_numerator(d, keys, q, tuple, options.ghd,
                                          options.semantics, options.bitpath,
                                          options.guards);
  }
  result.value = Ratio(result.numerator, result.denominator);
  result.value.canonicalize();
  return result;
}

}  // namespace ocqa
