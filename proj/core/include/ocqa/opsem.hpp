#pragma once

#include <vector>

#include "ocqa/cqeval.hpp"
#include "ocqa/ghw.hpp"
#include "ocqa/model.hpp"

namespace ocqa {

// A repairing sequence: ordered list of justified removal operations whose
// application ends in a consistent database. Two sequences are equal iff
// their operation lists agree element-wise.
using RepairingSequence = std::vector<Operation>;

enum class Semantics { repairs, sequences, subset, ur, answers };
enum class Engine { brute, nfta };

Semantics parse_semantics(const std::string& name);
Engine parse_engine(const std::string& name);

// Exhaustive oracles; each throws GuardError beyond desk scale.
std::vector<Database> enumerate_repairs(const Database& d, const KeySpec& keys,
                                        const Guards& guards = {});
std::vector<RepairingSequence> enumerate_sequences(const Database& d,
                                                   const KeySpec& keys,
                                                   const Guards& guards = {});
std::vector<Database> enumerate_subset_repairs(const Database& d,
                                               const KeySpec& keys,
                                               const Guards& guards = {});
std::vector<Database> enumerate_subsets(const Database& d,
                                        const Guards& guards = {});

Database apply_sequence(const Database& d, const RepairingSequence& s);

// Closed-form cardinalities (polynomial; no enumeration).
Count count_repairs(const Database& d, const KeySpec& keys);
Count count_sequences(const Database& d, const KeySpec& keys);
Count count_subset_repairs(const Database& d, const KeySpec& keys);
Count count_subsets(const Database& d);

// Denominator of the relative frequency under the chosen semantics
// (1 for the answer-span pseudo-semantics).
Count denominator(const Database& d, const KeySpec& keys, Semantics semantics);

// Numerator by exhaustive enumeration: outcomes entailing Q(c̄) — or |Q(d)|
// under the answer-span pseudo-semantics.
Count brute_numerator(const Database& d, const KeySpec& keys, const Query& q,
                      const std::vector<Constant>& tuple, Semantics semantics,
                      const Guards& guards = {});

struct RfOptions {
  Semantics semantics = Semantics::repairs;
  Engine engine = Engine::brute;
  const GHD* ghd = nullptr;  // nfta engine; defaults to a join tree when null
  bool bitpath = false;      // sequence labels as bit paths (nfta engine)
  Guards guards;
};

struct RfResult {
  Count numerator;
  Count denominator;
  Ratio value;
};

// Exact relative frequency of Q(c̄) under the chosen semantics and engine.
RfResult rf(const Database& d, const KeySpec& keys, const Query& q,
            const std::vector<Constant>& tuple, const RfOptions& options = {});

}  // namespace ocqa
