#pragma once

#include <map>
#include <memory>
#include <optional>

#include "ocqa/ato.hpp"
#include "ocqa/ghw.hpp"
#include "ocqa/opsem.hpp"

namespace ocqa {

// Input triple after completion and normal-form transformation; the four
// alternating procedures require their input in this shape.
struct PreparedInstance {
  Database db;          // normal-formed database
  KeySpec keys;         // unchanged key spec
  Query query;          // normal-formed query
  GHD ghd;              // strongly complete, 2-uniform decomposition
  std::set<Fact> artifact_facts;  // facts introduced by the normal form
  std::vector<Constant> tuple;    // candidate answer c̄
};

// Completes the decomposition (a join tree when none is supplied) and applies
// the normal form. With require_answer_cover the decomposition must cover
// answer variables too (the answer-span procedure's variant).
PreparedInstance prepare_instance(const Database& d, const KeySpec& keys,
                                  const Query& q,
                                  const std::vector<Constant>& tuple,
                                  const GHD* ghd = nullptr,
                                  bool require_answer_cover = false);

// Per-block outcome pin for the sequence procedure: restricts counting to
// sequences whose result keeps exactly the given fact of the block (nullopt =
// the block is emptied). Blocks absent from the map are unrestricted.
using SeqRestriction = std::map<KeyValue, std::optional<Fact>>;

// The repair procedure; subset_mode drops the ⊥ option, turning spans into
// classical subset-repair counts.
std::unique_ptr<BranchingProgram> rep_program(const PreparedInstance& instance,
                                              bool subset_mode = false);

// The repairing-sequence procedure; bitpath_mode spells interleaving indices
// bit by bit instead of one compact label.
std::unique_ptr<BranchingProgram> seq_program(
    const PreparedInstance& instance, bool bitpath_mode = false,
    const std::optional<SeqRestriction>& restriction = std::nullopt);

// The answer-span procedure (requires an answer-covering decomposition).
std::unique_ptr<BranchingProgram> ghwcq_program(
    const PreparedInstance& instance);

// The uniform-subset procedure.
std::unique_ptr<BranchingProgram> ur_program(const PreparedInstance& instance);

enum class ProgramKind { rep, seq_compact, seq_bitpath, ghwcq, ur };

// Instance-specific upper bound on the size of any accepted output tree.
std::size_t size_bound(ProgramKind kind, const PreparedInstance& instance);

// End-to-end numerator: prepare, build the program and its DAG, compile to a
// tree automaton and count distinct accepted trees up to the size bound.
Count pipeline_numerator(const Database& d, const KeySpec& keys,
                         const Query& q, const std::vector<Constant>& tuple,
                         const GHD* ghd, Semantics semantics, bool bitpath,
                         const Guards& guards);

}  // namespace ocqa
