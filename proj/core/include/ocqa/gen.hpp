#pragma once

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "ocqa/opsem.hpp"

namespace ocqa {

// Undirected graph on vertices 0..order-1; edges stored with the smaller
// endpoint first.
struct Graph {
  std::size_t order = 0;
  std::set<std::pair<std::size_t, std::size_t>> edges;

  void add_edge(std::size_t u, std::size_t v);
};

bool is_connected(const Graph& g);

// Two-colors the graph; fills `side` (one entry per vertex, 0 or 1) and
// returns true iff g is bipartite.
bool bipartition(const Graph& g, std::vector<int>& side);

// A generated benchmark instance. The decomposition is absent for the
// 3-colorability family, whose query has no small decomposition in general.
struct GenInstance {
  Database db;
  KeySpec keys;
  Query query;
  std::optional<GHD> ghd;
};

// Counting family: encodes a connected bipartite graph so that the repair
// relative frequency of the query determines the number of homomorphisms
// into a fixed six-vertex bipartite target. The clique of binary C-relations
// only pads the query width up to k.
GenInstance gen_hcoloring(const Graph& g, std::size_t k);

// Homomorphism count into the fixed target via a relative-frequency call:
// 6 for a single isolated vertex, 0 for a non-bipartite graph, and
// 2 * 3^|V| * (1 - rf) otherwise.
Count hom_count_via_rf(const Graph& g, std::size_t k, Engine engine,
                       const Guards& guards = {});

// Reference count: all mappings of the vertices into the fixed target,
// checked edge by edge.
Count brute_hom_count(const Graph& g, const Guards& guards = {});

// A monotone 2-CNF: clauses are unordered pairs of variable indices below
// `variables`.
struct Cnf2 {
  std::size_t variables = 0;
  std::vector<std::pair<std::size_t, std::size_t>> clauses;
};

Count count_satisfying(const Cnf2& phi);

// Approximation-hardness family: the query is entailed by exactly the repairs
// that encode satisfying assignments, so rf = #phi / 3^n. The query repeats
// the V relation, so only the brute engine applies.
GenInstance gen_mon2sat(const Cnf2& phi, std::size_t k);

// Decision family: the empty key set makes the database its own unique
// repair, and rf is 1 or 0 according to 3-colorability.
GenInstance gen_3col(const Graph& g);

bool brute_3colorable(const Graph& g);

}  // namespace ocqa
