#include "programs_common.hpp"

#include <algorithm>

namespace ocqa {

namespace {

using detail::Assignment;

// The uniform-subset procedure: per minimally covered relation, walk every
// fact of the database and guess keep/drop — forced keep for the guessed
// guard image and for the facts the normal form introduced (the latter makes
// spans equal subset counts of the original instance).
class UrProgram final : public detail::RegistryProgram {
 public:
  explicit UrProgram(const PreparedInstance& in) : in_(in) {
    for (std::size_t v = 0; v < in_.ghd.nodes.size(); ++v)
      for (std::size_t a : detail::min_covered_atoms(in_, static_cast<int>(v)))
        for (const Fact& f :
             in_.db.facts_of(in_.query.atoms[a].predicate))
          slots_[v].push_back({a, f});
  }

  Configuration initial() override {
    return make("init", Quantifier::existential, true, "", Terminal::none,
                [this] {
                  return std::vector<Configuration>{
                      guess(in_.ghd.root, Assignment{})};
                });
  }

 private:
  struct Slot {
    std::size_t atom;
    Fact fact;
  };

  Configuration guess(int v, const Assignment& a) {
    std::string payload =
        "g|v" + std::to_string(v) + "|" + detail::encode_assignment(a);
    return make(payload, Quantifier::existential, false, "", Terminal::none,
                [this, v, a] {
                  MappingSet base = detail::assignment_pairs(in_.query, a);
                  base.push_back({in_.query.answer_terms, in_.tuple});
                  std::vector<Configuration> out;
                  for (const auto& ap :
                       detail::coherent_assignments(in_, v, base))
                    out.push_back(at_slot(v, ap, 0));
                  if (out.empty()) out.push_back(reject_config());
                  return out;
                });
  }

  Configuration at_slot(int v, const Assignment& ap, std::size_t i) {
    const auto& node_slots = slots_[static_cast<std::size_t>(v)];
    if (i == node_slots.size()) {
      const auto& children =
          in_.ghd.nodes[static_cast<std::size_t>(v)].children;
      if (children.empty()) return accept_config();
      std::string payload = "u|v" + std::to_string(v) + "|" +
                            detail::encode_assignment(ap);
      return make(payload, Quantifier::universal, false, "", Terminal::none,
                  [this, v, ap] {
                    std::vector<Configuration> out;
                    for (int child :
                         in_.ghd.nodes[static_cast<std::size_t>(v)].children)
                      out.push_back(guess(child, ap));
                    return out;
                  });
    }
    const Slot& slot = node_slots[i];
    bool pinned = std::any_of(ap.begin(), ap.end(), [&](const auto& entry) {
      return entry.first == slot.atom && entry.second == slot.fact;
    });
    if (pinned || in_.artifact_facts.count(slot.fact))
      return label(v, ap, i, slot.fact);
    std::string payload = "c|v" + std::to_string(v) + "|s" +
                          std::to_string(i) + "|" +
                          detail::encode_assignment(ap);
    return make(payload, Quantifier::existential, false, "", Terminal::none,
                [this, v, ap, i] {
                  const Slot& s = slots_[static_cast<std::size_t>(v)][i];
                  return std::vector<Configuration>{
                      label(v, ap, i, s.fact), label(v, ap, i, std::nullopt)};
                });
  }

  Configuration label(int v, const Assignment& ap, std::size_t i,
                      const std::optional<Fact>& alpha) {
    std::string symbol = detail::encode_alpha(alpha);
    std::string payload = "l|v" + std::to_string(v) + "|s" +
                          std::to_string(i) + "|" + symbol + "|" +
                          detail::encode_assignment(ap);
    return make(payload, Quantifier::existential, true, symbol,
                Terminal::none, [this, v, ap, i] {
                  return std::vector<Configuration>{at_slot(v, ap, i + 1)};
                });
  }

  PreparedInstance in_;
  std::map<std::size_t, std::vector<Slot>> slots_;
};

}  // namespace

std::unique_ptr<BranchingProgram> ur_program(const PreparedInstance& instance) {
  return std::make_unique<UrProgram>(instance);
}

}  // namespace ocqa
