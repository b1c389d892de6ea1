#include "ocqa/randgen.hpp"

#include <algorithm>

#include "ocqa/cqeval.hpp"

namespace ocqa {

namespace {

const char* kConstants[] = {"a", "b", "c", "d", "e", "f"};

Query random_query(std::mt19937_64& rng, const RandomInstanceOptions& opt) {
  std::uniform_int_distribution<std::size_t> natoms(1, opt.max_atoms);
  std::uniform_int_distribution<std::size_t> arity(1, opt.max_arity);
  std::vector<std::string> vars = {"x", "y", "z", "v", "w"};

  // Rejection sampling: most small random queries over a handful of shared
  // variables are acyclic already.
  for (int attempt = 0; attempt < 200; ++attempt) {
    Query q;
    std::size_t n = natoms(rng);
    for (std::size_t i = 0; i < n; ++i) {
      Atom atom;
      atom.predicate = "R" + std::to_string(i);
      std::size_t a = arity(rng);
      for (std::size_t p = 0; p < a; ++p) {
        if (rng() % 8 == 0)
          atom.terms.push_back(make_const(kConstants[rng() % opt.domain]));
        else
          atom.terms.push_back(make_var(vars[rng() % vars.size()]));
      }
      q.atoms.push_back(std::move(atom));
    }
    if (!opt.boolean_only && rng() % 2 == 0) {
      auto body_vars = variables(q);
      if (!body_vars.empty()) {
        std::vector<std::string> pool(body_vars.begin(), body_vars.end());
        q.answer_terms.push_back(make_var(pool[rng() % pool.size()]));
      }
    }
    if (is_acyclic(q)) return q;
  }
  // Fallback: a single-atom query is always acyclic.
  Query q;
  q.atoms.push_back({"R0", {make_var("x"), make_var("y")}});
  return q;
}

// Contracts a random non-root vertex into its parent. Adjacent bags share
// the connectedness property, so the merged tree stays a valid
// decomposition; the width grows to at most 2.
GHD merge_edge(const GHD& tree, std::mt19937_64& rng) {
  std::vector<int> candidates;
  for (std::size_t v = 0; v < tree.nodes.size(); ++v)
    if (tree.nodes[v].parent >= 0) candidates.push_back(static_cast<int>(v));
  if (candidates.empty()) return tree;
  int victim = candidates[rng() % candidates.size()];
  int parent = tree.nodes[static_cast<std::size_t>(victim)].parent;

  GHD out;
  out.covers_answer_vars = tree.covers_answer_vars;
  std::vector<int> remap(tree.nodes.size(), -1);
  for (std::size_t v = 0; v < tree.nodes.size(); ++v) {
    if (static_cast<int>(v) == victim) continue;
    remap[v] = static_cast<int>(out.nodes.size());
    GHDNode node;
    node.chi = tree.nodes[v].chi;
    node.lambda = tree.nodes[v].lambda;
    out.nodes.push_back(std::move(node));
  }
  remap[static_cast<std::size_t>(victim)] =
      remap[static_cast<std::size_t>(parent)];
  auto& merged = out.nodes[static_cast<std::size_t>(
      remap[static_cast<std::size_t>(parent)])];
  merged.chi.insert(tree.nodes[static_cast<std::size_t>(victim)].chi.begin(),
                    tree.nodes[static_cast<std::size_t>(victim)].chi.end());
  merged.lambda.insert(
      tree.nodes[static_cast<std::size_t>(victim)].lambda.begin(),
      tree.nodes[static_cast<std::size_t>(victim)].lambda.end());

  for (std::size_t v = 0; v < tree.nodes.size(); ++v) {
    if (static_cast<int>(v) == victim) continue;
    int id = remap[v];
    int p = tree.nodes[v].parent;
    if (p == victim) p = parent;
    if (p >= 0) {
      out.nodes[static_cast<std::size_t>(id)].parent =
          remap[static_cast<std::size_t>(p)];
      out.nodes[static_cast<std::size_t>(remap[static_cast<std::size_t>(p)])]
          .children.push_back(id);
    } else {
      out.nodes[static_cast<std::size_t>(id)].parent = -1;
      out.root = id;
    }
  }
  return out;
}

}  // namespace

RandomInstance random_instance(std::mt19937_64& rng,
                               const RandomInstanceOptions& opt) {
  RandomInstance out;
  out.query = random_query(rng, opt);

  for (const auto& atom : out.query.atoms)
    if (rng() % 3 != 0) out.keys.positions[atom.predicate] = {1};

  std::uniform_int_distribution<std::size_t> nfacts(out.query.atoms.size(),
                                                    opt.max_facts);
  std::size_t budget = nfacts(rng);
  for (std::size_t i = 0; i < budget; ++i) {
    const Atom& atom = out.query.atoms[rng() % out.query.atoms.size()];
    Fact f;
    f.predicate = atom.predicate;
    for (std::size_t p = 0; p < atom.terms.size(); ++p)
      f.args.push_back(kConstants[rng() % opt.domain]);
    out.db.add(std::move(f));
  }

  std::size_t width = out.query.answer_terms.size();
  if (width > 0) {
    // Bias toward entailed tuples so numerators are non-trivial.
    auto all = answers(out.db, out.query);
    if (!all.empty() && rng() % 4 != 0) {
      std::size_t pick = rng() % all.size();
      out.tuple = *std::next(all.begin(), static_cast<long>(pick));
    } else {
      for (std::size_t i = 0; i < width; ++i)
        out.tuple.push_back(kConstants[rng() % opt.domain]);
    }
  }

  if (opt.merged_ghd) {
    GHD merged = merge_edge(gyo_join_tree(out.query), rng);
    if (validate(merged, out.query).ok) out.ghd = std::move(merged);
  }
  return out;
}

}  // namespace ocqa
