#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ocqa/ato.hpp"
#include "ocqa/tree.hpp"

namespace ocqa {

struct Transition {
  std::string from;
  std::string symbol;
  std::vector<std::string> to;

  auto operator<=>(const Transition&) const = default;
};

// Top-down nondeterministic finite tree automaton.
struct NFTA {
  std::set<std::string> states;
  std::set<std::string> alphabet;
  std::string initial;
  std::set<Transition> transitions;
};

// Set-of-state-tuples product: concatenates each pair in order; empty operand
// annihilates, {()} is the identity.
std::set<std::vector<std::string>> tensor(
    const std::set<std::vector<std::string>>& p1,
    const std::set<std::vector<std::string>>& p2);

// Compiles a computation DAG into an automaton whose accepted trees are
// exactly the valid outputs (memoized post-order over the DAG). State names
// are stable content hashes of the source configuration payloads.
NFTA build_nfta(const ComputationDAG& dag);

bool accepts(const NFTA& a, const LabeledTree& tree);

// All distinct accepted trees of size <= max_size.
std::vector<LabeledTree> enumerate_accepted(const NFTA& a,
                                            std::size_t max_size,
                                            const Guards& guards = {});

// Bottom-up deterministic automaton via subset construction; trees evaluate
// to at most one state, which makes distinct-tree counting a plain DP.
struct BottomUpDFTA {
  std::vector<std::set<std::string>> states;  // subset contents, by id
  std::set<std::string> alphabet;
  // (symbol, child state ids) -> state id; partial (missing = dead).
  std::map<std::pair<std::string, std::vector<int>>, int> transitions;
  std::set<int> accepting;  // subsets containing the initial NFTA state
};

BottomUpDFTA determinize_bottom_up(const NFTA& a, const Guards& guards = {});

// Number of distinct accepted trees of exactly the given size.
Count count_by_size(const BottomUpDFTA& d, std::size_t size);

// Per-size counter contract: counter(a, size, epsilon, delta). The shipped
// exact counter ignores the accuracy parameters; a randomized counter would
// honor them.
using SizeCounter = std::function<Count(const NFTA&, std::size_t, double, double)>;

SizeCounter exact_size_counter();

// Union over sizes 0..n: makes exactly n+1 counter calls, each with failure
// budget delta/(2(n+1)). With the exact counter this equals |⋃_{i<=n} L_i|.
Count count_up_to(const NFTA& a, std::size_t n, double epsilon, double delta,
                  const SizeCounter& counter);

// Convenience: exact language count up to n.
Count count_language_up_to(const NFTA& a, std::size_t n);

// Canonical serialization; round-trips bit-exactly.
std::string nfta_to_json(const NFTA& a);
NFTA nfta_from_json(const std::string& text);
std::string nfta_to_dot(const NFTA& a);

}  // namespace ocqa
