#pragma once

#include <optional>
#include <random>

#include "ocqa/ghw.hpp"
#include "ocqa/opsem.hpp"

namespace ocqa {

// Knobs for seeded random instances used by the property suites. Queries are
// always self-join-free and acyclic; decompositions, when requested, are
// width <= 2.
struct RandomInstanceOptions {
  std::size_t max_facts = 12;
  std::size_t max_atoms = 4;
  std::size_t max_arity = 3;
  std::size_t domain = 3;        // constant pool size
  bool boolean_only = false;     // suppress answer variables
  bool merged_ghd = false;       // contract one join-tree edge (width 2)
};

struct RandomInstance {
  Database db;
  KeySpec keys;
  Query query;
  std::optional<GHD> ghd;  // absent: the pipeline derives a join tree
  std::vector<Constant> tuple;
};

RandomInstance random_instance(std::mt19937_64& rng,
                               const RandomInstanceOptions& options = {});

}  // namespace ocqa
