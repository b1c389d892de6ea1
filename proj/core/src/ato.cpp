#include "ocqa/ato.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ocqa {

using nlohmann::json;

bool operator==(const LabeledTree& a, const LabeledTree& b) {
  return a.label == b.label && a.children == b.children;
}

bool operator<(const LabeledTree& a, const LabeledTree& b) {
  if (a.label != b.label) return a.label < b.label;
  return std::lexicographical_compare(a.children.begin(), a.children.end(),
                                      b.children.begin(), b.children.end());
}

ComputationDAG build_dag(BranchingProgram& program, const Guards& guards) {
  ComputationDAG dag;
  std::map<std::string, int> index;
  // 0 = unvisited (not present), 1 = on stack, 2 = done; used for the cycle
  // check alongside the iterative DFS.
  std::map<int, int> color;

  std::function<int(const Configuration&)> visit =
      [&](const Configuration& config) -> int {
    auto it = index.find(config.payload);
    if (it != index.end()) {
      if (color[it->second] == 1)
        throw ValidationError("computation graph has a cycle through \"" +
                              config.payload + "\"");
      return it->second;
    }
    if (dag.nodes.size() >= guards.max_dag_nodes)
      throw GuardError("computation DAG exceeds the node guard of " +
                       std::to_string(guards.max_dag_nodes));
    int id = static_cast<int>(dag.nodes.size());
    index.emplace(config.payload, id);
    dag.nodes.push_back({config, {}});
    color[id] = 1;
    if (config.terminal == Terminal::none) {
      auto successors = program.expand(config);
      if (successors.empty())
        throw ValidationError("non-terminal configuration \"" +
                              config.payload + "\" has no successors");
      std::set<int> seen;
      for (const auto& next : successors) {
        int child = visit(next);
        if (seen.insert(child).second)
          dag.nodes[static_cast<std::size_t>(id)].successors.push_back(child);
      }
    }
    color[id] = 2;
    return id;
  };

  Configuration init = program.initial();
  if (!init.labeling || !init.label.empty())
    throw ValidationError(
        "initial configuration must be labeling with the empty label");
  dag.root = visit(init);
  return dag;
}

namespace {

using Forest = std::vector<LabeledTree>;
using ForestSet = std::set<Forest>;

ForestSet forest_product(const ForestSet& a, const ForestSet& b,
                         const Guards& guards) {
  ForestSet out;
  for (const auto& x : a)
    for (const auto& y : b) {
      Forest merged = x;
      merged.insert(merged.end(), y.begin(), y.end());
      out.insert(std::move(merged));
      if (out.size() > guards.max_trees)
        throw GuardError("output enumeration exceeds the guard of " +
                         std::to_string(guards.max_trees));
    }
  return out;
}

// The set of output forests emitted by accepting computations from a node;
// mirrors the automaton compiler's Process, so span matches the counting
// pipeline by construction.
ForestSet outputs_of(const ComputationDAG& dag, int id,
                     std::map<int, ForestSet>& memo, const Guards& guards) {
  auto it = memo.find(id);
  if (it != memo.end()) return it->second;
  const DagNode& node = dag.nodes[static_cast<std::size_t>(id)];
  ForestSet result;
  if (node.config.terminal == Terminal::accept) {
    result.insert(Forest{});
  } else if (node.config.terminal == Terminal::reject) {
    // empty set
  } else {
    bool universal = node.config.quantifier == Quantifier::universal;
    bool first = true;
    for (int child : node.successors) {
      ForestSet sub = outputs_of(dag, child, memo, guards);
      if (universal) {
        result = first ? sub : forest_product(result, sub, guards);
      } else {
        result.insert(sub.begin(), sub.end());
      }
      first = false;
      if (result.size() > guards.max_trees)
        throw GuardError("output enumeration exceeds the guard of " +
                         std::to_string(guards.max_trees));
    }
  }
  if (node.config.labeling) {
    ForestSet wrapped;
    for (const auto& forest : result)
      wrapped.insert(Forest{LabeledTree{node.config.label, forest}});
    result = std::move(wrapped);
  }
  memo.emplace(id, result);
  return result;
}

}  // namespace

std::vector<LabeledTree> valid_outputs(const ComputationDAG& dag,
                                       const Guards& guards) {
  std::map<int, ForestSet> memo;
  ForestSet forests = outputs_of(dag, dag.root, memo, guards);
  std::vector<LabeledTree> out;
  for (const auto& forest : forests) {
    if (forest.size() != 1)
      throw ValidationError("root output is not a single tree");
    out.push_back(forest.front());
  }
  return out;
}

Count span(const ComputationDAG& dag, const Guards& guards) {
  return Count(static_cast<unsigned long>(valid_outputs(dag, guards).size()));
}

WellBehavedReport check_well_behaved(const ComputationDAG& dag,
                                     std::size_t universal_bound,
                                     std::size_t node_guard) {
  WellBehavedReport report;
  report.node_count = dag.nodes.size();
  // run(v): most universal non-labeling configurations on any path from v
  // until (and not beyond) the next labeling configuration.
  std::vector<long long> run(dag.nodes.size(), -1);
  std::function<std::size_t(int)> compute = [&](int id) -> std::size_t {
    auto& slot = run[static_cast<std::size_t>(id)];
    if (slot >= 0) return static_cast<std::size_t>(slot);
    const DagNode& node = dag.nodes[static_cast<std::size_t>(id)];
    std::size_t best = 0;
    if (!node.config.labeling)
      for (int child : node.successors) best = std::max(best, compute(child));
    std::size_t self = (!node.config.labeling &&
                        node.config.quantifier == Quantifier::universal)
                           ? 1
                           : 0;
    slot = static_cast<long long>(self + (node.config.labeling ? 0 : best));
    return static_cast<std::size_t>(slot);
  };
  for (std::size_t id = 0; id < dag.nodes.size(); ++id) {
    const DagNode& node = dag.nodes[id];
    std::size_t start = 0;
    for (int child : node.successors) start = std::max(start, compute(child));
    if (node.config.labeling || static_cast<int>(id) == dag.root)
      report.max_universal_run = std::max(report.max_universal_run, start);
  }
  if (report.max_universal_run > universal_bound)
    report.violations.push_back(
        "a labeled-free path holds " +
        std::to_string(report.max_universal_run) +
        " universal configurations (bound " +
        std::to_string(universal_bound) + ")");
  if (report.node_count > node_guard)
    report.violations.push_back("DAG has " + std::to_string(report.node_count) +
                                " nodes (guard " + std::to_string(node_guard) +
                                ")");
  report.ok = report.violations.empty();
  return report;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string dag_to_dot(const ComputationDAG& dag) {
  std::ostringstream out;
  out << "digraph computation {\n  rankdir=TB;\n";
  for (std::size_t id = 0; id < dag.nodes.size(); ++id) {
    const auto& c = dag.nodes[id].config;
    std::string shape = c.quantifier == Quantifier::universal ? "box" : "ellipse";
    std::string label = c.labeling ? ("[" + c.label + "]") : c.payload;
    if (c.terminal == Terminal::accept) label += " (accept)";
    if (c.terminal == Terminal::reject) label += " (reject)";
    out << "  n" << id << " [shape=" << shape << ",label=\""
        << dot_escape(label) << "\"";
    if (c.labeling) out << ",style=bold";
    out << "];\n";
  }
  for (std::size_t id = 0; id < dag.nodes.size(); ++id)
    for (int child : dag.nodes[id].successors)
      out << "  n" << id << " -> n" << child << ";\n";
  out << "}\n";
  return out.str();
}

std::string dag_to_json(const ComputationDAG& dag) {
  json doc;
  doc["root"] = dag.root;
  doc["nodes"] = json::array();
  for (std::size_t id = 0; id < dag.nodes.size(); ++id) {
    const auto& node = dag.nodes[id];
    json n;
    n["id"] = id;
    n["payload"] = node.config.payload;
    n["quantifier"] = node.config.quantifier == Quantifier::universal
                          ? "universal"
                          : "existential";
    n["labeling"] = node.config.labeling;
    if (node.config.labeling) n["label"] = node.config.label;
    n["terminal"] = node.config.terminal == Terminal::accept   ? "accept"
                    : node.config.terminal == Terminal::reject ? "reject"
                                                               : "none";
    n["successors"] = node.successors;
    doc["nodes"].push_back(n);
  }
  return doc.dump(2) + "\n";
}

std::string tree_to_json(const LabeledTree& tree) {
  std::function<json(const LabeledTree&)> conv =
      [&](const LabeledTree& t) -> json {
    json node;
    node["label"] = t.label;
    node["children"] = json::array();
    for (const auto& c : t.children) node["children"].push_back(conv(c));
    return node;
  };
  return conv(tree).dump(2) + "\n";
}

LabeledTree tree_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad tree JSON: ") + e.what());
  }
  std::function<LabeledTree(const json&)> conv =
      [&](const json& node) -> LabeledTree {
    LabeledTree t;
    try {
      t.label = node.at("label").get<std::string>();
      for (const auto& c : node.at("children")) t.children.push_back(conv(c));
    } catch (const json::exception& e) {
      throw ValidationError(std::string("bad tree JSON: ") + e.what());
    }
    return t;
  };
  return conv(doc);
}

std::string trees_to_dot(const std::vector<LabeledTree>& trees) {
  std::ostringstream out;
  out << "digraph outputs {\n  node [shape=ellipse];\n";
  int counter = 0;
  std::function<int(const LabeledTree&)> emit =
      [&](const LabeledTree& t) -> int {
    int id = counter++;
    std::string label = t.label.empty() ? "ε" : t.label;
    out << "  n" << id << " [label=\"" << dot_escape(label) << "\"];\n";
    for (const auto& c : t.children) {
      int child = emit(c);
      out << "  n" << id << " -> n" << child << ";\n";
    }
    return id;
  };
  for (const auto& t : trees) emit(t);
  out << "}\n";
  return out.str();
}

std::string tree_to_dot(const LabeledTree& tree) {
  return trees_to_dot({tree});
}

}  // namespace ocqa
