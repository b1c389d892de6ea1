#include "ocqa/nfta.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include <json.hpp>

namespace ocqa {

using nlohmann::json;

std::set<std::vector<std::string>> tensor(
    const std::set<std::vector<std::string>>& p1,
    const std::set<std::vector<std::string>>& p2) {
  std::set<std::vector<std::string>> out;
  for (const auto& a : p1)
    for (const auto& b : p2) {
      std::vector<std::string> merged = a;
      merged.insert(merged.end(), b.begin(), b.end());
      out.insert(std::move(merged));
    }
  return out;
}

NFTA build_nfta(const ComputationDAG& dag) {
  NFTA a;

  // Stable state names: content hash of the configuration payload, with a
  // deterministic suffix on the (unlikely) collision.
  std::map<std::string, std::string> name_of;  // payload -> state
  std::set<std::string> used;
  auto state_for = [&](const std::string& payload) -> std::string {
    auto it = name_of.find(payload);
    if (it != name_of.end()) return it->second;
    std::string base = "q" + hex64(fnv1a64(payload));
    std::string name = base;
    int suffix = 0;
    while (!used.insert(name).second)
      name = base + "_" + std::to_string(++suffix);
    name_of.emplace(payload, name);
    return name;
  };

  using TupleSet = std::set<std::vector<std::string>>;
  std::map<int, TupleSet> memo;

  std::function<TupleSet(int)> process = [&](int id) -> TupleSet {
    auto it = memo.find(id);
    if (it != memo.end()) return it->second;
    const DagNode& node = dag.nodes[static_cast<std::size_t>(id)];
    const Configuration& c = node.config;
    TupleSet result;
    if (c.labeling) {
      std::string s = state_for(c.payload);
      a.states.insert(s);
      a.alphabet.insert(c.label);
      if (c.terminal == Terminal::accept) {
        a.transitions.insert({s, c.label, {}});
      } else if (c.terminal == Terminal::none) {
        TupleSet inner;
        if (c.quantifier == Quantifier::universal) {
          // insert({}) would pick the initializer_list overload and add
          // nothing; spell out the empty tuple (the tensor identity).
          inner.insert(std::vector<std::string>{});
          for (int child : node.successors) inner = tensor(inner, process(child));
        } else {
          for (int child : node.successors) {
            TupleSet sub = process(child);
            inner.insert(sub.begin(), sub.end());
          }
        }
        for (const auto& tuple : inner) a.transitions.insert({s, c.label, tuple});
      }
      // A rejecting labeling leaf keeps its state but gets no transition.
      result.insert({s});
    } else if (c.terminal == Terminal::accept) {
      result.insert(std::vector<std::string>{});
    } else if (c.terminal == Terminal::reject) {
      // empty set
    } else if (c.quantifier == Quantifier::universal) {
      result.insert(std::vector<std::string>{});
      for (int child : node.successors) result = tensor(result, process(child));
    } else {
      for (int child : node.successors) {
        TupleSet sub = process(child);
        result.insert(sub.begin(), sub.end());
      }
    }
    memo.emplace(id, result);
    return result;
  };

  TupleSet root = process(dag.root);
  if (root.size() != 1 || root.begin()->size() != 1)
    throw ValidationError(
        "malformed program: the root does not reduce to a single state");
  a.initial = root.begin()->front();
  return a;
}

namespace {

// States deriving the given subtree, bottom-up.
std::set<std::string> evaluate(const NFTA& a, const LabeledTree& t) {
  std::vector<std::set<std::string>> child_states;
  child_states.reserve(t.children.size());
  for (const auto& c : t.children) child_states.push_back(evaluate(a, c));
  std::set<std::string> out;
  for (const auto& tr : a.transitions) {
    if (tr.symbol != t.label || tr.to.size() != t.children.size()) continue;
    bool ok = true;
    for (std::size_t i = 0; i < tr.to.size() && ok; ++i)
      ok = child_states[i].count(tr.to[i]) != 0;
    if (ok) out.insert(tr.from);
  }
  return out;
}

}  // namespace

bool accepts(const NFTA& a, const LabeledTree& tree) {
  return evaluate(a, tree).count(a.initial) != 0;
}

std::vector<LabeledTree> enumerate_accepted(const NFTA& a,
                                            std::size_t max_size,
                                            const Guards& guards) {
  // trees(q, s): distinct trees of size s derivable top-down from q.
  std::map<std::pair<std::string, std::size_t>, std::set<LabeledTree>> memo;
  std::function<const std::set<LabeledTree>&(const std::string&, std::size_t)>
      trees = [&](const std::string& q,
                  std::size_t s) -> const std::set<LabeledTree>& {
    auto key = std::make_pair(q, s);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::set<LabeledTree> out;
    if (s >= 1) {
      for (const auto& tr : a.transitions) {
        if (tr.from != q) continue;
        // Distribute s-1 over the child positions.
        std::function<void(std::size_t, std::size_t, std::vector<LabeledTree>&)>
            fill = [&](std::size_t pos, std::size_t left,
                       std::vector<LabeledTree>& acc) {
              if (pos == tr.to.size()) {
                if (left == 0) {
                  out.insert(LabeledTree{tr.symbol, acc});
                  if (out.size() > guards.max_trees)
                    throw GuardError(
                        "tree enumeration exceeds the guard of " +
                        std::to_string(guards.max_trees));
                }
                return;
              }
              std::size_t remaining_children = tr.to.size() - pos - 1;
              for (std::size_t take = 1;
                   take + remaining_children <= left; ++take)
                for (const auto& sub : trees(tr.to[pos], take)) {
                  acc.push_back(sub);
                  fill(pos + 1, left - take, acc);
                  acc.pop_back();
                }
            };
        std::vector<LabeledTree> acc;
        fill(0, s - 1, acc);
      }
    }
    return memo.emplace(std::move(key), std::move(out)).first->second;
  };

  std::set<LabeledTree> all;
  for (std::size_t s = 1; s <= max_size; ++s) {
    const auto& ts = trees(a.initial, s);
    all.insert(ts.begin(), ts.end());
    if (all.size() > guards.max_trees)
      throw GuardError("tree enumeration exceeds the guard of " +
                       std::to_string(guards.max_trees));
  }
  return {all.begin(), all.end()};
}

BottomUpDFTA determinize_bottom_up(const NFTA& a, const Guards& guards) {
  BottomUpDFTA d;
  d.alphabet = a.alphabet;

  std::map<std::set<std::string>, int> id_of;
  auto intern = [&](const std::set<std::string>& subset) -> int {
    auto it = id_of.find(subset);
    if (it != id_of.end()) return it->second;
    if (d.states.size() >= guards.max_dag_nodes)
      throw GuardError("determinization exceeds the state guard of " +
                       std::to_string(guards.max_dag_nodes));
    int id = static_cast<int>(d.states.size());
    id_of.emplace(subset, id);
    d.states.push_back(subset);
    if (subset.count(a.initial)) d.accepting.insert(id);
    return id;
  };

  // Group transitions by (symbol, arity) once.
  std::map<std::pair<std::string, std::size_t>, std::vector<const Transition*>>
      by_shape;
  std::size_t max_arity = 0;
  for (const auto& tr : a.transitions) {
    by_shape[{tr.symbol, tr.to.size()}].push_back(&tr);
    max_arity = std::max(max_arity, tr.to.size());
  }

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [shape, trs] : by_shape) {
      const std::size_t arity = shape.second;
      // All tuples of currently known subset states of this arity.
      std::vector<int> tuple(arity, 0);
      std::function<void(std::size_t)> iterate = [&](std::size_t pos) {
        if (pos == arity) {
          std::set<std::string> target;
          for (const Transition* tr : trs) {
            bool ok = true;
            for (std::size_t i = 0; i < arity && ok; ++i)
              ok = d.states[static_cast<std::size_t>(tuple[i])].count(
                       tr->to[i]) != 0;
            if (ok) target.insert(tr->from);
          }
          if (target.empty()) return;
          auto key = std::make_pair(shape.first, tuple);
          auto it = d.transitions.find(key);
          if (it == d.transitions.end()) {
            int to = intern(target);
            d.transitions.emplace(std::move(key), to);
            changed = true;
          }
          return;
        }
        // Snapshot the state count: tuples over states added this round get
        // picked up in the next round.
        const int known = static_cast<int>(d.states.size());
        for (int s = 0; s < known; ++s) {
          tuple[pos] = s;
          iterate(pos + 1);
        }
      };
      iterate(0);
    }
  }
  return d;
}

namespace {

std::vector<Count> counts_by_size(const BottomUpDFTA& d, std::size_t max_size) {
  // count[s][q]: distinct trees of size s evaluating exactly to subset q.
  std::vector<std::vector<Count>> count(
      max_size + 1, std::vector<Count>(d.states.size(), 0));
  for (std::size_t s = 1; s <= max_size; ++s) {
    for (const auto& [key, to] : d.transitions) {
      const auto& children = key.second;
      // Convolve child sizes summing to s-1.
      std::function<Count(std::size_t, std::size_t)> ways =
          [&](std::size_t pos, std::size_t left) -> Count {
        if (pos == children.size()) return left == 0 ? Count(1) : Count(0);
        Count total = 0;
        std::size_t remaining = children.size() - pos - 1;
        for (std::size_t take = 1; take + remaining <= left; ++take) {
          Count sub = count[take][static_cast<std::size_t>(children[pos])];
          if (sub == 0) continue;
          total += sub * ways(pos + 1, left - take);
        }
        return total;
      };
      count[s][static_cast<std::size_t>(to)] += ways(0, s - 1);
    }
  }
  std::vector<Count> per_size(max_size + 1, 0);
  for (std::size_t s = 1; s <= max_size; ++s)
    for (int q : d.accepting)
      per_size[s] += count[s][static_cast<std::size_t>(q)];
  return per_size;
}

}  // namespace

Count count_by_size(const BottomUpDFTA& d, std::size_t size) {
  if (size == 0) return 0;
  return counts_by_size(d, size)[size];
}

SizeCounter exact_size_counter() {
  return [](const NFTA& a, std::size_t size, double, double) -> Count {
    if (size == 0) return 0;
    return count_by_size(determinize_bottom_up(a), size);
  };
}

Count count_up_to(const NFTA& a, std::size_t n, double epsilon, double delta,
                  const SizeCounter& counter) {
  // One call per size in {0..n}, each granted an equal share of the failure
  // budget; sizes partition the language, so the plain sum is exact for an
  // exact counter and within (epsilon, delta) bounds for a randomized one.
  const double share = delta / (2.0 * static_cast<double>(n + 1));
  Count total = 0;
  for (std::size_t i = 0; i <= n; ++i) total += counter(a, i, epsilon, share);
  return total;
}

Count count_language_up_to(const NFTA& a, std::size_t n) {
  if (n == 0) return 0;
  BottomUpDFTA d = determinize_bottom_up(a);
  std::vector<Count> per_size = counts_by_size(d, n);
  Count total = 0;
  for (const auto& c : per_size) total += c;
  return total;
}

std::string nfta_to_json(const NFTA& a) {
  json doc;
  doc["states"] = a.states;
  doc["alphabet"] = a.alphabet;
  doc["initial"] = a.initial;
  doc["transitions"] = json::array();
  for (const auto& tr : a.transitions) {
    json t;
    t["from"] = tr.from;
    t["symbol"] = tr.symbol;
    t["to"] = tr.to;
    doc["transitions"].push_back(t);
  }
  return doc.dump(2) + "\n";
}

NFTA nfta_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad NFTA JSON: ") + e.what());
  }
  NFTA a;
  try {
    for (const auto& s : doc.at("states")) a.states.insert(s.get<std::string>());
    for (const auto& s : doc.at("alphabet"))
      a.alphabet.insert(s.get<std::string>());
    a.initial = doc.at("initial").get<std::string>();
    for (const auto& t : doc.at("transitions")) {
      Transition tr;
      tr.from = t.at("from").get<std::string>();
      tr.symbol = t.at("symbol").get<std::string>();
      for (const auto& s : t.at("to")) tr.to.push_back(s.get<std::string>());
      a.transitions.insert(std::move(tr));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad NFTA JSON: ") + e.what());
  }
  if (!a.states.count(a.initial))
    throw ValidationError("NFTA initial state is not a state");
  for (const auto& tr : a.transitions) {
    if (!a.states.count(tr.from) || !a.alphabet.count(tr.symbol))
      throw ValidationError("NFTA transition references unknown state/symbol");
    for (const auto& s : tr.to)
      if (!a.states.count(s))
        throw ValidationError("NFTA transition targets unknown state");
  }
  return a;
}

std::string nfta_to_dot(const NFTA& a) {
  std::ostringstream out;
  out << "digraph nfta {\n  rankdir=TB;\n";
  for (const auto& s : a.states) {
    out << "  \"" << s << "\" [shape=" << (s == a.initial ? "doublecircle" : "circle")
        << "];\n";
  }
  int edge = 0;
  for (const auto& tr : a.transitions) {
    std::string mid = "t" + std::to_string(edge++);
    std::string symbol = tr.symbol.empty() ? "ε" : tr.symbol;
    out << "  " << mid << " [shape=box,label=\"";
    for (char c : symbol) {
      if (c == '"' || c == '\\') out << '\\';
      out << c;
    }
    out << "\"];\n";
    out << "  \"" << tr.from << "\" -> " << mid << ";\n";
    for (std::size_t i = 0; i < tr.to.size(); ++i)
      out << "  " << mid << " -> \"" << tr.to[i] << "\" [label=\"" << (i + 1)
          << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace ocqa
