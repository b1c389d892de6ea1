#include "programs_common.hpp"

#include <algorithm>

namespace ocqa {

namespace {

using detail::Assignment;

// The answer-span procedure: per node guess a coherent guard image, emit one
// (variable = constant) label per answer variable in the bag, branch
// universally. Distinct accepted trees correspond to distinct answers.
class GhwcqProgram final : public detail::RegistryProgram {
 public:
  explicit GhwcqProgram(const PreparedInstance& in) : in_(in) {
    if (!in_.ghd.covers_answer_vars)
      throw ValidationError(
          "the answer-span procedure needs a decomposition covering answer "
          "variables");
    std::set<std::string> ans = answer_variables(in_.query);
    for (std::size_t v = 0; v < in_.ghd.nodes.size(); ++v) {
      for (const auto& x : in_.ghd.nodes[v].chi)  // std::set: sorted order
        if (ans.count(x)) vars_[v].push_back(x);
    }
  }

  Configuration initial() override {
    return make("init", Quantifier::existential, true, "", Terminal::none,
                [this] {
                  return std::vector<Configuration>{
                      guess(in_.ghd.root, Assignment{})};
                });
  }

 private:
  Configuration guess(int v, const Assignment& a) {
    std::string payload =
        "g|v" + std::to_string(v) + "|" + detail::encode_assignment(a);
    return make(payload, Quantifier::existential, false, "", Terminal::none,
                [this, v, a] {
                  // Coherence of A ∪ A′ only; the answer tuple is what the
                  // labels reveal, not an input constraint.
                  MappingSet base = detail::assignment_pairs(in_.query, a);
                  std::vector<Configuration> out;
                  for (const auto& ap :
                       detail::coherent_assignments(in_, v, base))
                    out.push_back(at_var(v, ap, 0));
                  if (out.empty()) out.push_back(reject_config());
                  return out;
                });
  }

  Configuration at_var(int v, const Assignment& ap, std::size_t i) {
    const auto& xs = vars_[static_cast<std::size_t>(v)];
    if (i == xs.size()) {
      const auto& children =
          in_.ghd.nodes[static_cast<std::size_t>(v)].children;
      if (children.empty()) return accept_config();
      // A fixed bag marker, independent of the guess, so every universal
      // branch sits right below a labeling configuration (well-behavedness
      // with bound 1) without distinguishing trees of the same answer.
      std::string marker = "[v" + std::to_string(v) + "]";
      std::string payload = "m|v" + std::to_string(v) + "|" +
                            detail::encode_assignment(ap);
      return make(payload, Quantifier::existential, true, marker,
                  Terminal::none, [this, v, ap] {
                    std::string inner = "u|v" + std::to_string(v) + "|" +
                                        detail::encode_assignment(ap);
                    return std::vector<Configuration>{make(
                        inner, Quantifier::universal, false, "",
                        Terminal::none, [this, v, ap] {
                          std::vector<Configuration> out;
                          for (int child : in_.ghd.nodes
                                   [static_cast<std::size_t>(v)].children)
                            out.push_back(guess(child, ap));
                          return out;
                        })};
                  });
    }
    auto assignment =
        mapping_assignment(detail::assignment_pairs(in_.query, ap));
    auto it = assignment.find(xs[i]);
    if (it == assignment.end())
      throw ValidationError("answer variable " + xs[i] +
                            " is not bound by the guard of its bag");
    std::string symbol = "(" + xs[i] + "=" + it->second + ")";
    std::string payload = "l|v" + std::to_string(v) + "|x" +
                          std::to_string(i) + "|" + symbol + "|" +
                          detail::encode_assignment(ap);
    return make(payload, Quantifier::existential, true, symbol,
                Terminal::none, [this, v, ap, i] {
                  return std::vector<Configuration>{at_var(v, ap, i + 1)};
                });
  }

  PreparedInstance in_;
  std::map<std::size_t, std::vector<std::string>> vars_;
};

}  // namespace

std::unique_ptr<BranchingProgram> ghwcq_program(
    const PreparedInstance& instance) {
  return std::make_unique<GhwcqProgram>(instance);
}

}  // namespace ocqa
