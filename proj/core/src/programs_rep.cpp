#include "programs_common.hpp"

#include <algorithm>

namespace ocqa {

namespace {

using detail::Assignment;

// The repair procedure: per decomposition node guess a coherent image A′ of
// its guard atoms, then emit one label per block of every minimally covered
// relation — the kept fact or ⊥ — and branch universally to the children.
class RepProgram final : public detail::RegistryProgram {
 public:
  RepProgram(const PreparedInstance& in, bool subset_mode)
      : in_(in), subset_mode_(subset_mode) {
    for (std::size_t v = 0; v < in_.ghd.nodes.size(); ++v) {
      for (std::size_t a : detail::min_covered_atoms(in_, static_cast<int>(v)))
        for (const auto& block :
             blocks_of_relation(in_.query.atoms[a].predicate))
          slots_[v].push_back({a, block});
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
  struct Slot {
    std::size_t atom;
    Block block;
  };

  std::vector<Block> blocks_of_relation(const std::string& relation) const {
    std::vector<Block> out;
    for (const auto& block : blocks(in_.db, in_.keys))
      if (block.key.predicate == relation) out.push_back(block);
    return out;
  }

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

  // The configuration handling slot i of node v (or the node's exit when all
  // slots are done): forced labels skip the chooser configuration.
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
    auto choices = slot_choices(slot, ap);
    if (choices.size() == 1) return label(v, ap, i, choices.front());
    std::string payload = "c|v" + std::to_string(v) + "|s" +
                          std::to_string(i) + "|" +
                          detail::encode_assignment(ap);
    return make(payload, Quantifier::existential, false, "", Terminal::none,
                [this, v, ap, i, choices] {
                  std::vector<Configuration> out;
                  for (const auto& alpha : choices)
                    out.push_back(label(v, ap, i, alpha));
                  return out;
                });
  }

  std::vector<std::optional<Fact>> slot_choices(const Slot& slot,
                                                const Assignment& ap) const {
    const auto& facts = slot.block.facts;
    if (facts.size() == 1) return {facts.front()};
    // The guessed image of the slot's atom pins the block when it lies in it.
    for (const auto& [atom, fact] : ap)
      if (atom == slot.atom &&
          std::find(facts.begin(), facts.end(), fact) != facts.end())
        return {fact};
    std::vector<std::optional<Fact>> out;
    for (const auto& f : facts) out.push_back(f);
    if (!subset_mode_) out.push_back(std::nullopt);
    return out;
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

  PreparedInstance in_;  // by value: the program outlives its inputs
  bool subset_mode_;
  std::map<std::size_t, std::vector<Slot>> slots_;
};

}  // namespace

std::unique_ptr<BranchingProgram> rep_program(const PreparedInstance& instance,
                                              bool subset_mode) {
  return std::make_unique<RepProgram>(instance, subset_mode);
}

}  // namespace ocqa
