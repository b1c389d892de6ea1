#include "ocqa/ghw.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>

#include <json.hpp>

namespace ocqa {

namespace {

using nlohmann::json;

// Tree-shape sanity shared by every traversal; throws on malformed links.
void check_tree(const GHD& h) {
  const int n = static_cast<int>(h.nodes.size());
  if (n == 0) throw ValidationError("decomposition has no nodes");
  if (h.root < 0 || h.root >= n)
    throw ValidationError("decomposition root out of range");
  if (h.nodes[h.root].parent != -1)
    throw ValidationError("root has a parent");
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  std::deque<int> queue{h.root};
  seen[static_cast<std::size_t>(h.root)] = 1;
  std::size_t visited = 0;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    ++visited;
    for (int c : h.nodes[static_cast<std::size_t>(v)].children) {
      if (c < 0 || c >= n)
        throw ValidationError("child id out of range at node " +
                              std::to_string(v));
      if (h.nodes[static_cast<std::size_t>(c)].parent != v)
        throw ValidationError("parent/child mismatch at node " +
                              std::to_string(c));
      if (seen[static_cast<std::size_t>(c)]++)
        throw ValidationError("node " + std::to_string(c) +
                              " reached twice; not a tree");
      queue.push_back(c);
    }
  }
  if (visited != static_cast<std::size_t>(n))
    throw ValidationError("decomposition is not connected as a tree");
}

std::set<std::string> relevant_terms(const Query& q, std::size_t atom_index,
                                     bool covers_answer_vars) {
  const Atom& atom = q.atoms[atom_index];
  std::set<std::string> ans = answer_variables(q);
  std::set<std::string> out;
  for (const Term& t : atom.terms) {
    if (!t.is_variable) continue;
    if (!covers_answer_vars && ans.count(t.name)) continue;
    out.insert(t.name);
  }
  return out;
}

bool subset_of(const std::set<std::string>& a, const std::set<std::string>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

WidthReport validate(const GHD& h, const Query& q) {
  WidthReport report;
  try {
    check_tree(h);
  } catch (const ValidationError& e) {
    report.errors.push_back(e.what());
    return report;
  }
  for (std::size_t v = 0; v < h.nodes.size(); ++v) {
    report.width = std::max(report.width, h.nodes[v].lambda.size());
    for (std::size_t a : h.nodes[v].lambda)
      if (a >= q.atoms.size())
        report.errors.push_back("node " + std::to_string(v) +
                                ": atom index " + std::to_string(a) +
                                " out of range");
  }
  if (!report.errors.empty()) return report;

  // Connectedness: the occurrence set of each bag variable must induce a
  // connected subtree.
  std::map<std::string, std::vector<int>> occurrences;
  for (std::size_t v = 0; v < h.nodes.size(); ++v)
    for (const auto& var : h.nodes[v].chi)
      occurrences[var].push_back(static_cast<int>(v));
  for (const auto& [var, nodes] : occurrences) {
    // Walking up from each occurrence must stay inside the occurrence set
    // until the shallowest occurrence is reached; count reachable nodes.
    std::set<int> members(nodes.begin(), nodes.end());
    std::set<int> component;
    std::function<void(int)> grow = [&](int v) {
      if (!component.insert(v).second) return;
      for (int c : h.nodes[static_cast<std::size_t>(v)].children)
        if (members.count(c)) grow(c);
    };
    // The highest member (closest to the root) roots the component.
    int top = nodes.front();
    for (int v : nodes) {
      int p = h.nodes[static_cast<std::size_t>(v)].parent;
      while (p != -1 && members.count(p)) {
        v = p;
        p = h.nodes[static_cast<std::size_t>(v)].parent;
      }
      top = v;
    }
    grow(top);
    if (component.size() != members.size())
      report.errors.push_back("connectedness violated for variable " + var);
  }

  // Coverage of each atom's relevant terms by some bag.
  for (std::size_t a = 0; a < q.atoms.size(); ++a) {
    auto need = relevant_terms(q, a, h.covers_answer_vars);
    bool covered = false;
    for (const auto& node : h.nodes)
      if (subset_of(need, node.chi)) {
        covered = true;
        break;
      }
    if (!covered)
      report.errors.push_back("coverage violated for atom " +
                              to_string(q.atoms[a]));
  }

  // Guardedness: chi(v) within the variables of lambda(v).
  for (std::size_t v = 0; v < h.nodes.size(); ++v) {
    std::set<std::string> guard_vars;
    for (std::size_t a : h.nodes[v].lambda)
      for (const Term& t : q.atoms[a].terms)
        if (t.is_variable) guard_vars.insert(t.name);
    if (!subset_of(h.nodes[v].chi, guard_vars))
      report.errors.push_back("guardedness violated at node " +
                              std::to_string(v));
  }

  report.ok = report.errors.empty();
  return report;
}

void validate_or_throw(const GHD& h, const Query& q) {
  WidthReport report = validate(h, q);
  if (!report.ok)
    throw ValidationError("invalid decomposition: " +
                          join(report.errors, "; "));
}

std::vector<int> node_order(const GHD& h) {
  check_tree(h);
  std::vector<int> order;
  order.reserve(h.nodes.size());
  std::deque<int> queue{h.root};
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    order.push_back(v);
    for (int c : h.nodes[static_cast<std::size_t>(v)].children)
      queue.push_back(c);
  }
  return order;
}

bool is_covering_vertex(const GHD& h, const Query& q, int v,
                        std::size_t atom_index) {
  const GHDNode& node = h.nodes[static_cast<std::size_t>(v)];
  if (!node.lambda.count(atom_index)) return false;
  return subset_of(relevant_terms(q, atom_index, h.covers_answer_vars),
                   node.chi);
}

int min_covering_vertex(const GHD& h, const Query& q, std::size_t atom_index) {
  for (int v : node_order(h))
    if (is_covering_vertex(h, q, v, atom_index)) return v;
  throw ValidationError("no covering vertex for atom " +
                        to_string(q.atoms[atom_index]) +
                        "; decomposition is not complete");
}

bool is_complete(const GHD& h, const Query& q) {
  for (std::size_t a = 0; a < q.atoms.size(); ++a) {
    bool found = false;
    for (std::size_t v = 0; v < h.nodes.size() && !found; ++v)
      found = is_covering_vertex(h, q, static_cast<int>(v), a);
    if (!found) return false;
  }
  return true;
}

bool is_strongly_complete(const GHD& h, const Query& q) {
  if (!is_complete(h, q)) return false;
  std::set<int> minimal;
  for (std::size_t a = 0; a < q.atoms.size(); ++a)
    minimal.insert(min_covering_vertex(h, q, a));
  return minimal.size() == h.nodes.size();
}

bool is_two_uniform(const GHD& h) {
  check_tree(h);
  for (const auto& node : h.nodes)
    if (!node.children.empty() && node.children.size() != 2) return false;
  return true;
}

GHD make_complete(const GHD& h, const Query& q) {
  validate_or_throw(h, q);
  GHD out = h;
  for (std::size_t a = 0; a < q.atoms.size(); ++a) {
    bool found = false;
    for (std::size_t v = 0; v < out.nodes.size() && !found; ++v)
      found = is_covering_vertex(out, q, static_cast<int>(v), a);
    if (found) continue;
    auto need = relevant_terms(q, a, out.covers_answer_vars);
    int host = -1;
    for (int v : node_order(out))
      if (subset_of(need, out.nodes[static_cast<std::size_t>(v)].chi)) {
        host = v;
        break;
      }
    if (host == -1) {
      // validate() guarantees coverage, so this is only reachable for atoms
      // with no relevant terms at all; hang those off the root.
      if (!need.empty())
        throw ValidationError("no bag covers atom " + to_string(q.atoms[a]));
      host = out.root;
    }
    GHDNode leaf;
    leaf.parent = host;
    leaf.chi = need;
    leaf.lambda = {a};
    out.nodes.push_back(leaf);
    out.nodes[static_cast<std::size_t>(host)].children.push_back(
        static_cast<int>(out.nodes.size() - 1));
  }
  return out;
}

namespace {

std::string fresh_relation(std::string base,
                           const std::set<std::string>& taken) {
  while (taken.count(base)) base += "_";
  return base;
}

std::string fresh_variable(std::string base, const std::set<std::string>& taken) {
  while (taken.count(base)) base += "_";
  return base;
}

}  // namespace

NormalFormResult normal_form(const Database& d, const Query& q, const GHD& h) {
  validate_or_throw(h, q);
  if (!is_sjf(q))
    throw ValidationError("normal_form requires a self-join-free query");
  if (!is_complete(h, q))
    throw ValidationError("normal_form requires a complete decomposition");
  if (d.active_domain().count(kNormalFormConstant))
    throw ValidationError("constant " + kNormalFormConstant +
                          " is reserved for the normal form");

  NormalFormResult result;
  result.db = d;
  result.query = q;

  std::set<std::string> taken_relations;
  for (const auto& [rel, arity] : d.schema) taken_relations.insert(rel);
  for (const auto& atom : q.atoms) taken_relations.insert(atom.predicate);
  std::set<std::string> taken_vars = variables(q);

  auto add_artifact = [&](Fact fact) {
    result.artifact_facts.insert(fact);
    result.db.add(std::move(fact));
  };

  // Relations occurring in D but not in Q, in name order. Each one gets a
  // completion atom P(z...) plus a unary marker P'(z'), and a placeholder
  // fact keeping the completion atom satisfiable in every repair.
  std::set<std::string> query_relations;
  for (const auto& atom : q.atoms) query_relations.insert(atom.predicate);
  struct ExtraRelation {
    std::size_t completion_atom;  // index of P(z...) in the new query
    std::size_t marker_atom;      // index of P'(z') in the new query
  };
  std::vector<ExtraRelation> extras;
  for (const auto& [rel, arity] : d.schema) {
    if (query_relations.count(rel)) continue;
    ExtraRelation extra;
    Atom completion;
    completion.predicate = rel;
    for (std::size_t i = 0; i < arity; ++i) {
      std::string z = fresh_variable(
          "__z_" + rel + "_" + std::to_string(i + 1), taken_vars);
      taken_vars.insert(z);
      completion.terms.push_back(make_var(z));
    }
    extra.completion_atom = result.query.atoms.size();
    result.query.atoms.push_back(std::move(completion));

    std::string marker = fresh_relation(rel + "__c", taken_relations);
    taken_relations.insert(marker);
    std::string zp = fresh_variable("__zc_" + rel, taken_vars);
    taken_vars.insert(zp);
    extra.marker_atom = result.query.atoms.size();
    result.query.atoms.push_back(Atom{marker, {make_var(zp)}});

    add_artifact(Fact{marker, {kNormalFormConstant}});
    add_artifact(
        Fact{rel, std::vector<Constant>(arity, kNormalFormConstant)});
    extras.push_back(extra);
  }

  // Rebuild the tree: each original vertex v with children u_1..u_t becomes
  // a path v^(1)..v^(t+1); v^(i) guards a fresh sentinel atom S_v^(i)(w) and
  // branches to u_i's path head, so every non-leaf ends up binary and every
  // vertex is the unique covering vertex of its sentinel atom.
  GHD out;
  out.covers_answer_vars = h.covers_answer_vars;
  std::vector<int> heads(h.nodes.size(), -1);  // original node -> v^(1)

  std::function<int(int)> build = [&](int v) -> int {
    const GHDNode& node = h.nodes[static_cast<std::size_t>(v)];
    const std::size_t t = node.children.size();
    int head = -1, prev = -1;
    for (std::size_t i = 0; i <= t; ++i) {
      std::string sentinel = fresh_relation(
          "__nf_s" + std::to_string(v) + "_" + std::to_string(i + 1),
          taken_relations);
      taken_relations.insert(sentinel);
      std::string w = fresh_variable(
          "__w" + std::to_string(v) + "_" + std::to_string(i + 1), taken_vars);
      taken_vars.insert(w);
      std::size_t sentinel_atom = result.query.atoms.size();
      result.query.atoms.push_back(Atom{sentinel, {make_var(w)}});
      add_artifact(Fact{sentinel, {kNormalFormConstant}});

      GHDNode fresh;
      fresh.chi = node.chi;
      fresh.chi.insert(w);
      fresh.lambda = node.lambda;
      fresh.lambda.insert(sentinel_atom);
      fresh.parent = prev;
      int id = static_cast<int>(out.nodes.size());
      out.nodes.push_back(std::move(fresh));
      if (prev != -1)
        out.nodes[static_cast<std::size_t>(prev)].children.push_back(id);
      if (i == 0) head = id;
      prev = id;
    }
    heads[static_cast<std::size_t>(v)] = head;
    // Attach child paths: v^(i) gets u_i's head as its first child, the path
    // continuation is already its second.
    for (std::size_t i = 0; i < t; ++i) {
      int child_head = build(node.children[i]);
      int vi = head + static_cast<int>(i);
      out.nodes[static_cast<std::size_t>(child_head)].parent = vi;
      auto& kids = out.nodes[static_cast<std::size_t>(vi)].children;
      kids.insert(kids.begin(), child_head);
    }
    return head;
  };
  int core_root = build(h.root);

  // Chain of guards for the completion atoms, ending at the core root.
  int attach = core_root;
  for (auto it = extras.rbegin(); it != extras.rend(); ++it) {
    GHDNode marker_leaf;
    for (const Term& t : result.query.atoms[it->marker_atom].terms)
      marker_leaf.chi.insert(t.name);
    marker_leaf.lambda = {it->marker_atom};
    int marker_id = static_cast<int>(out.nodes.size());
    out.nodes.push_back(std::move(marker_leaf));

    GHDNode guard;
    for (const Term& t : result.query.atoms[it->completion_atom].terms)
      guard.chi.insert(t.name);
    guard.lambda = {it->completion_atom};
    guard.children = {marker_id, attach};
    int guard_id = static_cast<int>(out.nodes.size());
    out.nodes.push_back(std::move(guard));
    out.nodes[static_cast<std::size_t>(marker_id)].parent = guard_id;
    out.nodes[static_cast<std::size_t>(attach)].parent = guard_id;
    attach = guard_id;
  }
  out.root = attach;
  out.nodes[static_cast<std::size_t>(out.root)].parent = -1;

  result.ghd = std::move(out);
  return result;
}

bool is_acyclic(const Query& q) {
  try {
    gyo_join_tree(q);
    return true;
  } catch (const ValidationError&) {
    return false;
  }
}

GHD gyo_join_tree(const Query& q) {
  if (q.atoms.empty()) throw ValidationError("query has no atoms");
  const std::size_t n = q.atoms.size();
  std::vector<std::set<std::string>> vars(n);
  for (std::size_t a = 0; a < n; ++a)
    for (const Term& t : q.atoms[a].terms)
      if (t.is_variable) vars[a].insert(t.name);

  std::vector<bool> removed(n, false);
  std::vector<int> witness(n, -1);  // ear -> node it was attached to
  std::size_t alive = n;
  bool progress = true;
  while (alive > 1 && progress) {
    progress = false;
    for (std::size_t a = 0; a < n && alive > 1; ++a) {
      if (removed[a]) continue;
      // Variables of a shared with any other live atom.
      std::set<std::string> shared;
      for (std::size_t b = 0; b < n; ++b) {
        if (b == a || removed[b]) continue;
        for (const auto& v : vars[a])
          if (vars[b].count(v)) shared.insert(v);
      }
      for (std::size_t b = 0; b < n; ++b) {
        if (b == a || removed[b]) continue;
        if (subset_of(shared, vars[b])) {
          removed[a] = true;
          witness[a] = static_cast<int>(b);
          --alive;
          progress = true;
          break;
        }
      }
    }
  }
  if (alive > 1) throw ValidationError("query is not acyclic");

  int root_atom = -1;
  for (std::size_t a = 0; a < n; ++a)
    if (!removed[a]) root_atom = static_cast<int>(a);

  GHD h;
  h.covers_answer_vars = true;  // bags keep all variables, so both variants hold
  h.nodes.resize(n);
  h.root = root_atom;
  for (std::size_t a = 0; a < n; ++a) {
    h.nodes[a].chi = vars[a];
    h.nodes[a].lambda = {a};
    h.nodes[a].parent = witness[a];
  }
  // Witness chains can point at removed atoms; contract them to live parents
  // along the removal order. Simpler: witnesses always point at atoms removed
  // later or the survivor, so the parent links already form a tree.
  for (std::size_t a = 0; a < n; ++a)
    if (h.nodes[a].parent != -1)
      h.nodes[static_cast<std::size_t>(h.nodes[a].parent)]
          .children.push_back(static_cast<int>(a));
  for (auto& node : h.nodes)
    std::sort(node.children.begin(), node.children.end());
  return h;
}

std::string ghd_to_json(const GHD& h) {
  json doc;
  doc["covers_answer_vars"] = h.covers_answer_vars;
  doc["nodes"] = json::array();
  for (std::size_t v = 0; v < h.nodes.size(); ++v) {
    json node;
    node["id"] = v;
    node["parent"] = h.nodes[v].parent;
    node["chi"] = h.nodes[v].chi;        // sets serialize sorted
    node["lambda"] = h.nodes[v].lambda;
    doc["nodes"].push_back(node);
  }
  return doc.dump(2) + "\n";
}

GHD ghd_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad GHD JSON: ") + e.what());
  }
  GHD h;
  try {
    h.covers_answer_vars = doc.value("covers_answer_vars", false);
    std::map<long long, int> remap;  // external id -> index
    const auto& nodes = doc.at("nodes");
    for (const auto& node : nodes) {
      long long id = node.at("id").get<long long>();
      if (!remap.emplace(id, static_cast<int>(remap.size())).second)
        throw ValidationError("duplicate node id " + std::to_string(id));
    }
    h.nodes.resize(remap.size());
    std::size_t index = 0;
    for (const auto& node : nodes) {
      GHDNode& out = h.nodes[index];
      long long parent = node.at("parent").is_null()
                             ? -1
                             : node.at("parent").get<long long>();
      if (parent == -1) {
        if (h.root != -1) throw ValidationError("multiple roots in GHD");
        h.root = static_cast<int>(index);
        out.parent = -1;
      } else {
        auto it = remap.find(parent);
        if (it == remap.end())
          throw ValidationError("unknown parent id " + std::to_string(parent));
        out.parent = it->second;
        h.nodes[static_cast<std::size_t>(it->second)].children.push_back(
            static_cast<int>(index));
      }
      for (const auto& v : node.at("chi"))
        out.chi.insert(v.get<std::string>());
      for (const auto& a : node.at("lambda"))
        out.lambda.insert(a.get<std::size_t>());
      ++index;
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad GHD JSON: ") + e.what());
  }
  if (h.root == -1) throw ValidationError("GHD has no root");
  check_tree(h);
  return h;
}

}  // namespace ocqa
