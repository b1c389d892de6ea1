#include "ocqa/gen.hpp"

#include <algorithm>
#include <deque>
#include <string>

namespace ocqa {

void Graph::add_edge(std::size_t u, std::size_t v) {
  if (u == v) throw ValidationError("self-loops are not supported");
  if (u >= order || v >= order)
    throw ValidationError("edge endpoint out of range");
  edges.insert({std::min(u, v), std::max(u, v)});
}

namespace {

std::vector<std::vector<std::size_t>> adjacency(const Graph& g) {
  std::vector<std::vector<std::size_t>> adj(g.order);
  for (const auto& [u, v] : g.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  return adj;
}

}  // namespace

bool is_connected(const Graph& g) {
  if (g.order == 0) return true;
  auto adj = adjacency(g);
  std::vector<bool> seen(g.order, false);
  std::deque<std::size_t> queue{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!queue.empty()) {
    std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v : adj[u])
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        queue.push_back(v);
      }
  }
  return reached == g.order;
}

bool bipartition(const Graph& g, std::vector<int>& side) {
  auto adj = adjacency(g);
  side.assign(g.order, -1);
  for (std::size_t start = 0; start < g.order; ++start) {
    if (side[start] >= 0) continue;
    side[start] = 0;
    std::deque<std::size_t> queue{start};
    while (!queue.empty()) {
      std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t v : adj[u]) {
        if (side[v] < 0) {
          side[v] = 1 - side[u];
          queue.push_back(v);
        } else if (side[v] == side[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

namespace {

std::string vertex_name(std::size_t u) { return "u" + std::to_string(u); }

// Adds the (k+1)-clique of binary atoms over fresh variables `prefix1..` to
// the query and hangs a guarded sub-decomposition off `attach`: one bag over
// all clique variables (guarded by a matching of atoms) with one child per
// atom. `relation(i,j)` names the atom's relation.
template <typename RelationName>
void add_clique(Query& q, GHD& h, int attach, std::size_t k,
                const std::string& prefix, RelationName relation) {
  std::vector<std::string> vars;
  for (std::size_t i = 1; i <= k + 1; ++i)
    vars.push_back(prefix + std::to_string(i));

  std::vector<std::size_t> atom_index;  // per pair, in (i,j) order
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 1; i <= k + 1; ++i)
    for (std::size_t j = i + 1; j <= k + 1; ++j) {
      atom_index.push_back(q.atoms.size());
      pairs.push_back({i, j});
      q.atoms.push_back({relation(i, j),
                         {make_var(vars[i - 1]), make_var(vars[j - 1])}});
    }

  // Guard bag: a matching (1,2),(3,4),... covers the variables; an odd count
  // needs the final atom (k,k+1) on top. k+1 >= 2 always holds here.
  GHDNode bag;
  bag.parent = attach;
  bag.chi.insert(vars.begin(), vars.end());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto& [i, j] = pairs[p];
    if ((i % 2 == 1 && j == i + 1) || (k % 2 == 0 && i == k && j == k + 1))
      bag.lambda.insert(atom_index[p]);
  }
  int bag_id = static_cast<int>(h.nodes.size());
  h.nodes[static_cast<std::size_t>(attach)].children.push_back(bag_id);
  h.nodes.push_back(bag);

  for (std::size_t p = 0; p < pairs.size(); ++p) {
    GHDNode leaf;
    leaf.parent = bag_id;
    leaf.chi = {vars[pairs[p].first - 1], vars[pairs[p].second - 1]};
    leaf.lambda = {atom_index[p]};
    h.nodes[static_cast<std::size_t>(bag_id)].children.push_back(
        static_cast<int>(h.nodes.size()));
    h.nodes.push_back(leaf);
  }
}

}  // namespace

GenInstance gen_hcoloring(const Graph& g, std::size_t k) {
  if (k == 0) throw ValidationError("width parameter must be positive");
  if (g.order == 0) throw ValidationError("graph must have a vertex");
  std::vector<int> side;
  if (!bipartition(g, side))
    throw ValidationError("instance encoding requires a bipartite graph");

  GenInstance out;
  for (std::size_t u = 0; u < g.order; ++u) {
    std::string rel = side[u] == 0 ? "V_L" : "V_R";
    out.db.add({rel, {vertex_name(u), "0"}});
    out.db.add({rel, {vertex_name(u), "1"}});
  }
  for (const auto& [u, v] : g.edges) {
    std::size_t l = side[u] == 0 ? u : v;
    std::size_t r = side[u] == 0 ? v : u;
    out.db.add({"E", {vertex_name(l), vertex_name(r)}});
  }
  out.db.add({"T", {"1"}});
  out.db.add({"Tp", {"1"}});
  for (std::size_t i = 1; i <= k + 1; ++i)
    for (std::size_t j = i + 1; j <= k + 1; ++j)
      out.db.add({"C_" + std::to_string(i) + "_" + std::to_string(j),
                  {std::to_string(i), std::to_string(j)}});

  out.keys.positions["V_L"] = {1};
  out.keys.positions["V_R"] = {1};

  out.query.atoms = {{"E", {make_var("x"), make_var("y")}},
                     {"V_L", {make_var("x"), make_var("z")}},
                     {"V_R", {make_var("y"), make_var("zp")}},
                     {"T", {make_var("z")}},
                     {"Tp", {make_var("zp")}}};

  GHD h;
  h.covers_answer_vars = true;
  h.root = 0;
  h.nodes.push_back({-1, {1, 3}, {"x", "y"}, {0}});
  h.nodes.push_back({0, {2}, {"x", "z"}, {1}});
  h.nodes.push_back({1, {}, {"z"}, {3}});
  h.nodes.push_back({0, {4}, {"y", "zp"}, {2}});
  h.nodes.push_back({3, {}, {"zp"}, {4}});
  add_clique(out.query, h, 0, k, "w", [](std::size_t i, std::size_t j) {
    return "C_" + std::to_string(i) + "_" + std::to_string(j);
  });
  out.ghd = std::move(h);
  validate_or_throw(*out.ghd, out.query);
  return out;
}

namespace {

// The fixed bipartite target: 0=1L, 1=0L, 2=?L on the left, 3=1R, 4=0R,
// 5=?R on the right; every left-right pair is adjacent except (1L,1R).
bool target_adjacent(int a, int b) {
  if (a > b) std::swap(a, b);
  if (a > 2 || b < 3) return false;
  return !(a == 0 && b == 3);
}

}  // namespace

Count brute_hom_count(const Graph& g, const Guards& guards) {
  if (g.order > 8)
    throw GuardError("brute homomorphism count limited to 8 vertices");
  (void)guards;
  std::vector<int> image(g.order, 0);
  Count total = 0;
  while (true) {
    bool ok = true;
    for (const auto& [u, v] : g.edges)
      if (!target_adjacent(image[u], image[v])) {
        ok = false;
        break;
      }
    if (ok) ++total;
    std::size_t pos = 0;
    while (pos < g.order && image[pos] == 5) image[pos++] = 0;
    if (pos == g.order) break;
    ++image[pos];
  }
  return total;
}

Count hom_count_via_rf(const Graph& g, std::size_t k, Engine engine,
                       const Guards& guards) {
  if (g.order == 1 && g.edges.empty()) return 6;
  std::vector<int> side;
  if (!bipartition(g, side)) return 0;
  if (!is_connected(g))
    throw ValidationError("homomorphism counting requires a connected graph");

  GenInstance inst = gen_hcoloring(g, k);
  RfOptions opt;
  opt.semantics = Semantics::repairs;
  opt.engine = engine;
  opt.ghd = &*inst.ghd;
  opt.guards = guards;
  RfResult r = rf(inst.db, inst.keys, inst.query, {}, opt);

  Count power;  // 3^|V|
  mpz_ui_pow_ui(power.get_mpz_t(), 3, static_cast<unsigned long>(g.order));
  Ratio value = Ratio(2) * Ratio(power) * (Ratio(1) - r.value);
  value.canonicalize();
  if (value.get_den() != 1)
    throw ValidationError("homomorphism count is not integral");
  return value.get_num();
}

Count count_satisfying(const Cnf2& phi) {
  if (phi.variables > 24)
    throw GuardError("satisfying-assignment count limited to 24 variables");
  for (const auto& [a, b] : phi.clauses)
    if (a >= phi.variables || b >= phi.variables)
      throw ValidationError("clause variable out of range");
  Count total = 0;
  for (unsigned long mask = 0; mask < (1ul << phi.variables); ++mask) {
    bool ok = true;
    for (const auto& [a, b] : phi.clauses)
      if (!((mask >> a) & 1) && !((mask >> b) & 1)) {
        ok = false;
        break;
      }
    if (ok) ++total;
  }
  return total;
}

GenInstance gen_mon2sat(const Cnf2& phi, std::size_t k) {
  if (k == 0) throw ValidationError("width parameter must be positive");
  if (phi.variables == 0) throw ValidationError("formula must have a variable");
  for (const auto& [a, b] : phi.clauses)
    if (a >= phi.variables || b >= phi.variables)
      throw ValidationError("clause variable out of range");

  GenInstance out;
  auto var_name = [](std::size_t v) { return "v" + std::to_string(v); };
  for (std::size_t i = 0; i < phi.clauses.size(); ++i) {
    std::string rel = "C" + std::to_string(i + 1);
    out.db.add({rel, {var_name(phi.clauses[i].first), "1"}});
    out.db.add({rel, {var_name(phi.clauses[i].second), "1"}});
  }
  for (std::size_t v = 0; v < phi.variables; ++v) {
    out.db.add({"Var_" + var_name(v), {var_name(v)}});
    out.db.add({"V", {var_name(v), "0"}});
    out.db.add({"V", {var_name(v), "1"}});
  }
  for (std::size_t i = 1; i <= k + 1; ++i)
    for (std::size_t j = i + 1; j <= k + 1; ++j)
      out.db.add({"E", {std::to_string(i), std::to_string(j)}});

  out.keys.positions["V"] = {1};

  GHD h;
  h.covers_answer_vars = true;
  std::vector<GHDNode> components;
  for (std::size_t i = 0; i < phi.clauses.size(); ++i) {
    std::string xi = "x" + std::to_string(i + 1);
    std::string yi = "y" + std::to_string(i + 1);
    GHDNode node;
    node.chi = {xi, yi};
    node.lambda = {out.query.atoms.size(), out.query.atoms.size() + 1};
    out.query.atoms.push_back(
        {"C" + std::to_string(i + 1), {make_var(xi), make_var(yi)}});
    out.query.atoms.push_back({"V", {make_var(xi), make_var(yi)}});
    components.push_back(std::move(node));
  }
  for (std::size_t v = 0; v < phi.variables; ++v) {
    std::string zv = "z" + var_name(v);
    std::string dv = "d" + var_name(v);  // occurs nowhere else
    GHDNode node;
    node.chi = {zv, dv};
    node.lambda = {out.query.atoms.size(), out.query.atoms.size() + 1};
    out.query.atoms.push_back({"Var_" + var_name(v), {make_var(zv)}});
    out.query.atoms.push_back({"V", {make_var(zv), make_var(dv)}});
    components.push_back(std::move(node));
  }

  h.root = 0;
  for (std::size_t i = 0; i < components.size(); ++i) {
    components[i].parent = i == 0 ? -1 : 0;
    h.nodes.push_back(std::move(components[i]));
    if (i > 0) h.nodes[0].children.push_back(static_cast<int>(i));
  }
  add_clique(out.query, h, 0, k,
             "w", [](std::size_t, std::size_t) { return std::string("E"); });
  out.ghd = std::move(h);
  validate_or_throw(*out.ghd, out.query);
  return out;
}

GenInstance gen_3col(const Graph& g) {
  if (g.order == 0) throw ValidationError("graph must have a vertex");
  GenInstance out;
  auto rel = [](std::size_t u, std::size_t v) {
    return "C_" + std::to_string(u) + "_" + std::to_string(v);
  };
  for (const auto& [u, v] : g.edges)
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j) {
        if (i == j) continue;
        out.db.add({rel(u, v), {std::to_string(i), std::to_string(j)}});
        out.db.add({rel(v, u), {std::to_string(i), std::to_string(j)}});
      }
  for (const auto& [u, v] : g.edges) {
    Term xu = make_var("x" + std::to_string(u));
    Term xv = make_var("x" + std::to_string(v));
    out.query.atoms.push_back({rel(u, v), {xu, xv}});
    out.query.atoms.push_back({rel(v, u), {xv, xu}});
  }
  return out;
}

bool brute_3colorable(const Graph& g) {
  if (g.order > 12)
    throw GuardError("brute 3-coloring limited to 12 vertices");
  std::vector<int> color(g.order, 0);
  while (true) {
    bool ok = true;
    for (const auto& [u, v] : g.edges)
      if (color[u] == color[v]) {
        ok = false;
        break;
      }
    if (ok) return true;
    std::size_t pos = 0;
    while (pos < g.order && color[pos] == 2) color[pos++] = 0;
    if (pos == g.order) return false;
    ++color[pos];
  }
}

}  // namespace ocqa
