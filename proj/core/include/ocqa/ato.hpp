#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ocqa/common.hpp"
#include "ocqa/tree.hpp"

namespace ocqa {

enum class Quantifier { existential, universal };
enum class Terminal { none, accept, reject };

// One configuration of an alternating procedure with output. The payload is
// an opaque canonical encoding of the machine state: configurations with
// equal payloads are the same configuration (this is what makes DAG sharing
// sound).
struct Configuration {
  std::string payload;
  Quantifier quantifier = Quantifier::existential;
  bool labeling = false;
  std::string label;  // the emitted symbol; empty string on the initial node
  Terminal terminal = Terminal::none;
};

// A branching program presents an alternating procedure as an initial
// configuration plus deterministic expansion into ordered successor lists.
// Expansion may cache decoded state internally, hence non-const.
class BranchingProgram {
 public:
  virtual ~BranchingProgram() = default;
  virtual Configuration initial() = 0;
  virtual std::vector<Configuration> expand(const Configuration& config) = 0;
};

struct DagNode {
  Configuration config;
  std::vector<int> successors;  // canonical expand order
};

struct ComputationDAG {
  std::vector<DagNode> nodes;  // nodes[0] is the root (initial configuration)
  int root = 0;
};

// Explores all configurations reachable from initial(), merging by payload.
// Throws GuardError past guards.max_dag_nodes and ValidationError on
// malformed programs (cycles, non-terminal dead ends, successors of
// terminals).
ComputationDAG build_dag(BranchingProgram& program, const Guards& guards = {});

// The distinct outputs of accepting computations, and their number.
std::vector<LabeledTree> valid_outputs(const ComputationDAG& dag,
                                       const Guards& guards = {});
Count span(const ComputationDAG& dag, const Guards& guards = {});

struct WellBehavedReport {
  bool ok = false;
  // Largest number of universal non-labeling configurations on any
  // labeled-free path of the DAG.
  std::size_t max_universal_run = 0;
  std::size_t node_count = 0;
  std::vector<std::string> violations;
};

// Verifies the well-behavedness conditions: every labeled-free path holds at
// most universal_bound universal non-labeling configurations, and the DAG
// stays within the polynomial node guard.
WellBehavedReport check_well_behaved(const ComputationDAG& dag,
                                     std::size_t universal_bound,
                                     std::size_t node_guard);

std::string dag_to_dot(const ComputationDAG& dag);
std::string dag_to_json(const ComputationDAG& dag);

}  // namespace ocqa
