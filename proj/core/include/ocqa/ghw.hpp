#pragma once

#include <set>
#include <string>
#include <vector>

#include "ocqa/cqeval.hpp"

namespace ocqa {

// One vertex of a generalized hypertree decomposition. Node ids are indices
// into GHD::nodes; sibling order (the order inside `children`) is canonical
// and part of the structure.
struct GHDNode {
  int parent = -1;
  std::vector<int> children;
  std::set<std::string> chi;        // variable bag
  std::set<std::size_t> lambda;     // atom indices into the query body

  auto operator<=>(const GHDNode&) const = default;
};

struct GHD {
  std::vector<GHDNode> nodes;
  int root = -1;
  // When true the decomposition must cover answer variables too (the variant
  // used by the answer-span procedure).
  bool covers_answer_vars = false;

  auto operator<=>(const GHD&) const = default;
};

struct WidthReport {
  bool ok = false;
  std::size_t width = 0;
  std::vector<std::string> errors;
};

// Checks tree shape, connectedness, coverage and guardedness; reports the
// width and every violated invariant.
WidthReport validate(const GHD& h, const Query& q);
void validate_or_throw(const GHD& h, const Query& q);

// Depth-major, sibling-path-lexicographic-minor total order (equivalently:
// breadth-first order respecting sibling order). Returns node ids, least
// first.
std::vector<int> node_order(const GHD& h);

// Whether node v is a covering vertex for the atom: the atom is in lambda(v)
// and its variables (minus answer variables unless covers_answer_vars) lie
// in chi(v).
bool is_covering_vertex(const GHD& h, const Query& q, int v,
                        std::size_t atom_index);

// The ≺_T-least covering vertex; throws an incompleteness error if none.
int min_covering_vertex(const GHD& h, const Query& q, std::size_t atom_index);

bool is_complete(const GHD& h, const Query& q);
bool is_strongly_complete(const GHD& h, const Query& q);
bool is_two_uniform(const GHD& h);

// Adds a fresh child per uncovered atom under some node whose bag contains
// the atom's relevant terms (or a fresh leaf under the root when the atom has
// no relevant terms). Width never decreases below the original. Idempotent.
GHD make_complete(const GHD& h, const Query& q);

// Reserved constant used by all facts introduced by normal_form.
inline const std::string kNormalFormConstant = "_nf";

struct NormalFormResult {
  Database db;
  Query query;
  GHD ghd;
  // Facts added by the construction (sentinel, completion and placeholder
  // facts); the uniform-repair procedure must keep these pinned.
  std::set<Fact> artifact_facts;
};

// The normal-form transformation: returns (D-hat, Q-hat, H-hat) such that
// every relation of D-hat occurs in Q-hat, the decomposition is strongly
// complete and 2-uniform of width <= width(h)+1, and repair / sequence counts
// are preserved. Requires h complete and q self-join-free; the key spec is
// unchanged (all added facts form fresh singleton blocks).
NormalFormResult normal_form(const Database& d, const Query& q, const GHD& h);

// Width-1 decomposition of an acyclic query via GYO ear removal; throws a
// not-acyclic error otherwise. The result covers all terms, so it can serve
// both decomposition variants.
GHD gyo_join_tree(const Query& q);

bool is_acyclic(const Query& q);

// Canonical JSON serialization (sorted keys, nodes in id order).
std::string ghd_to_json(const GHD& h);
GHD ghd_from_json(const std::string& text);

}  // namespace ocqa
