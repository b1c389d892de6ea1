#pragma once

// Internal helpers shared by the four alternating-procedure implementations.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ocqa/programs.hpp"

namespace ocqa::detail {

// An A/A′ mapping: guessed image fact per atom index, kept sorted by atom.
using Assignment = std::vector<std::pair<std::size_t, Fact>>;

std::string encode_assignment(const Assignment& a);
std::string encode_alpha(const std::optional<Fact>& alpha);  // nullopt = ⊥

MappingSet assignment_pairs(const Query& q, const Assignment& a);

// All coherent extensions A′ of `base` assigning every atom of lambda(v) an
// image fact from the database, in canonical (atom-major, fact-minor) order.
std::vector<Assignment> coherent_assignments(const PreparedInstance& in, int v,
                                             const MappingSet& base);

// Sorted atom indices of lambda(v) that v minimally covers.
std::vector<std::size_t> min_covered_atoms(const PreparedInstance& in, int v);

// Branching program with a payload-indexed successor registry: configurations
// register a closure computing their successors when they are created, and
// expand() replays it. Closures are deterministic functions of the decoded
// state, so payload-merging stays sound.
class RegistryProgram : public BranchingProgram {
 public:
  std::vector<Configuration> expand(const Configuration& config) override {
    auto it = expanders_.find(config.payload);
    if (it == expanders_.end())
      throw ValidationError("unknown configuration \"" + config.payload +
                            "\"");
    return it->second();
  }

 protected:
  using Expander = std::function<std::vector<Configuration>()>;

  Configuration make(std::string payload, Quantifier quantifier, bool labeling,
                     std::string label, Terminal terminal, Expander expander) {
    Configuration c;
    c.payload = std::move(payload);
    c.quantifier = quantifier;
    c.labeling = labeling;
    c.label = std::move(label);
    c.terminal = terminal;
    if (terminal == Terminal::none) expanders_.try_emplace(c.payload, expander);
    return c;
  }

  Configuration accept_config() {
    return make("accept", Quantifier::existential, false, "",
                Terminal::accept, {});
  }
  Configuration reject_config() {
    return make("reject", Quantifier::existential, false, "",
                Terminal::reject, {});
  }

 private:
  std::map<std::string, Expander> expanders_;
};

}  // namespace ocqa::detail
