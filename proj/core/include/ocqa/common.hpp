#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace ocqa {

// Arbitrary-precision natural / exact rational used for every count and
// relative frequency. Machine integers overflow already for the binomial
// amplification factors of the sequence semantics.
using Count = mpz_class;
using Ratio = mpq_class;

// Input or structural validation failure (CLI exit code 2).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A resource guard (fact count, DAG nodes, enumerated trees) was exceeded
// (CLI exit code 3).
struct GuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Resource limits for the enumeration oracles and the automaton pipeline.
// Defaults per the CLI contract; overridable via flags or OCQA_GUARDS.
struct Guards {
  std::size_t max_oracle_facts = 16;    // facts considered by brute-force oracles
  std::size_t max_dag_nodes = 1000000;  // computation DAG nodes
  std::size_t max_trees = 100000;       // enumerated trees / outputs
};

Count binomial(std::size_t n, std::size_t k);

// Number of bits in the binary representation of a positive count (>= 1).
std::size_t bit_length(const Count& value);

// Stable 64-bit FNV-1a content hash; used for reproducible NFTA state names.
std::uint64_t fnv1a64(const std::string& data);
std::string hex64(std::uint64_t value);

std::vector<std::string> split(const std::string& text, char sep);
std::string join(const std::vector<std::string>& parts, const std::string& sep);

// Exact decimal rendering of a ratio with the given number of fraction digits
// (truncated), e.g. 2/3 -> "0.666666666666".
std::string decimal_string(const Ratio& value, std::size_t digits);

}  // namespace ocqa
