#include "programs_common.hpp"

#include <algorithm>

namespace ocqa {

namespace {

using detail::Assignment;

// The repairing-sequence procedure. On top of the repair procedure's
// structure it guesses a global operation budget N, emits per block the
// operation templates (-g, p) that shrink it, then an interleaving index
// (α, p) placing the block's operations among the b' earlier ones, and
// splits the remaining budget between the two children.
class SeqProgram final : public detail::RegistryProgram {
 public:
  SeqProgram(const PreparedInstance& in, bool bitpath,
             const std::optional<SeqRestriction>& restriction)
      : in_(in), bitpath_(bitpath), restriction_(restriction) {
    for (std::size_t v = 0; v < in_.ghd.nodes.size(); ++v)
      for (std::size_t a : detail::min_covered_atoms(in_, static_cast<int>(v)))
        for (const auto& block : blocks(in_.db, in_.keys))
          if (block.key.predicate == in_.query.atoms[a].predicate)
            slots_[v].push_back({a, block});
  }

  Configuration initial() override {
    return make("init", Quantifier::existential, true, "", Terminal::none,
                [this] {
                  // Guess the total number of operations (0 included, so the
                  // empty sequence of a consistent input is counted).
                  std::vector<Configuration> out;
                  for (std::size_t n = 0; n <= in_.db.size(); ++n)
                    out.push_back(guess(in_.ghd.root, Assignment{}, n, 0));
                  return out;
                });
  }

 private:
  struct Slot {
    std::size_t atom;
    Block block;
  };

  std::string suffix(const Assignment& ap, std::size_t n, std::size_t b) {
    return "|N" + std::to_string(n) + "|b" + std::to_string(b) + "|" +
           detail::encode_assignment(ap);
  }

  Configuration guess(int v, const Assignment& a, std::size_t budget,
                      std::size_t b) {
    std::string payload = "g|v" + std::to_string(v) + suffix(a, budget, b);
    return make(payload, Quantifier::existential, false, "", Terminal::none,
                [this, v, a, budget, b] {
                  MappingSet base = detail::assignment_pairs(in_.query, a);
                  base.push_back({in_.query.answer_terms, in_.tuple});
                  std::vector<Configuration> out;
                  for (const auto& ap :
                       detail::coherent_assignments(in_, v, base))
                    out.push_back(at_slot(v, ap, 0, budget, b));
                  if (out.empty()) out.push_back(reject_config());
                  return out;
                });
  }

  Configuration at_slot(int v, const Assignment& ap, std::size_t i,
                        std::size_t budget, std::size_t b) {
    const auto& node_slots = slots_[static_cast<std::size_t>(v)];
    if (i == node_slots.size()) return node_exit(v, ap, budget, b);

    auto choices = slot_choices(node_slots[i], ap);
    if (choices.empty()) return reject_config();
    if (choices.size() == 1)
      return ops_entry(v, ap, i, choices.front(), budget, b);
    std::string payload = "ac|v" + std::to_string(v) + "|s" +
                          std::to_string(i) + suffix(ap, budget, b);
    return make(payload, Quantifier::existential, false, "", Terminal::none,
                [this, v, ap, i, choices, budget, b] {
                  std::vector<Configuration> out;
                  for (const auto& alpha : choices)
                    out.push_back(ops_entry(v, ap, i, alpha, budget, b));
                  return out;
                });
  }

  // Choice of the block outcome α, as in the repair procedure, optionally
  // filtered by a pinned target repair.
  std::vector<std::optional<Fact>> slot_choices(const Slot& slot,
                                                const Assignment& ap) const {
    const auto& facts = slot.block.facts;
    std::vector<std::optional<Fact>> out;
    if (facts.size() == 1) {
      out.push_back(facts.front());
    } else {
      const Fact* pinned = nullptr;
      for (const auto& [atom, fact] : ap)
        if (atom == slot.atom &&
            std::find(facts.begin(), facts.end(), fact) != facts.end())
          pinned = &fact;
      if (pinned) {
        out.push_back(*pinned);
      } else {
        for (const auto& f : facts) out.push_back(f);
        out.push_back(std::nullopt);
      }
    }
    if (restriction_) {
      auto it = restriction_->find(slot.block.key);
      if (it != restriction_->end())
        std::erase_if(out, [&](const auto& alpha) { return alpha != it->second; });
    }
    return out;
  }

  Configuration ops_entry(int v, const Assignment& ap, std::size_t i,
                          const std::optional<Fact>& alpha, std::size_t budget,
                          std::size_t b) {
    const Slot& slot = slots_[static_cast<std::size_t>(v)][i];
    std::size_t n = slot.block.facts.size() - (alpha ? 1 : 0);
    return ops(v, ap, i, alpha, n, budget, b, b);
  }

  // The operation loop: n facts of the block still to delete; bstart is the
  // operation count when the block was entered.
  Configuration ops(int v, const Assignment& ap, std::size_t i,
                    const std::optional<Fact>& alpha, std::size_t n,
                    std::size_t budget, std::size_t b, std::size_t bstart) {
    if (n == 0) return interleave(v, ap, i, alpha, budget, b, bstart);
    // shape(n, α): the justified op sizes for the current block state.
    std::vector<std::size_t> shape;
    if (n > 1)
      shape = {1, 2};
    else if (alpha)
      shape = {1};
    if (shape.empty() || budget == 0) return reject_config();

    std::string tag = "|s" + std::to_string(i) + "|" +
                      detail::encode_alpha(alpha) + "|n" + std::to_string(n) +
                      "|B" + std::to_string(bstart);
    if (shape.size() == 1)
      return op_pick(v, ap, i, alpha, n, shape.front(), budget, b, bstart);
    std::string payload =
        "sg|v" + std::to_string(v) + tag + suffix(ap, budget, b);
    return make(payload, Quantifier::existential, false, "", Terminal::none,
                [this, v, ap, i, alpha, n, budget, b, bstart] {
                  return std::vector<Configuration>{
                      op_pick(v, ap, i, alpha, n, 1, budget, b, bstart),
                      op_pick(v, ap, i, alpha, n, 2, budget, b, bstart)};
                });
  }

  // Choose which concrete operation of the shape class is meant: n singleton
  // deletions or n(n-1)/2 pair deletions.
  Configuration op_pick(int v, const Assignment& ap, std::size_t i,
                        const std::optional<Fact>& alpha, std::size_t n,
                        std::size_t g, std::size_t budget, std::size_t b,
                        std::size_t bstart) {
    std::size_t options = g == 1 ? n : n * (n - 1) / 2;
    std::string tag = "|s" + std::to_string(i) + "|" +
                      detail::encode_alpha(alpha) + "|n" + std::to_string(n) +
                      "|g" + std::to_string(g) + "|B" + std::to_string(bstart);
    if (options == 1)
      return op_label(v, ap, i, alpha, n, g, 1, budget, b, bstart);
    std::string payload =
        "op|v" + std::to_string(v) + tag + suffix(ap, budget, b);
    return make(payload, Quantifier::existential, false, "", Terminal::none,
                [this, v, ap, i, alpha, n, g, options, budget, b, bstart] {
                  std::vector<Configuration> out;
                  for (std::size_t p = 1; p <= options; ++p)
                    out.push_back(
                        op_label(v, ap, i, alpha, n, g, p, budget, b, bstart));
                  return out;
                });
  }

  Configuration op_label(int v, const Assignment& ap, std::size_t i,
                         const std::optional<Fact>& alpha, std::size_t n,
                         std::size_t g, std::size_t p, std::size_t budget,
                         std::size_t b, std::size_t bstart) {
    std::string symbol = "(-" + std::to_string(g) + "," + std::to_string(p) + ")";
    std::string payload = "ol|v" + std::to_string(v) + "|s" +
                          std::to_string(i) + "|" + detail::encode_alpha(alpha) +
                          "|n" + std::to_string(n) + "|B" +
                          std::to_string(bstart) + "|" + symbol +
                          suffix(ap, budget, b);
    return make(payload, Quantifier::existential, true, symbol,
                Terminal::none,
                [this, v, ap, i, alpha, n, g, budget, b, bstart] {
                  return std::vector<Configuration>{ops(
                      v, ap, i, alpha, n - g, budget - 1, b + 1, bstart)};
                });
  }

  // Guess where this block's operations sit among the b operations emitted
  // so far: C(b, bstart) interleavings.
  Configuration interleave(int v, const Assignment& ap, std::size_t i,
                           const std::optional<Fact>& alpha, std::size_t budget,
                           std::size_t b, std::size_t bstart) {
    Count total = binomial(b, bstart);
    if (total == 1)
      return interleave_label(v, ap, i, alpha, 1, total, budget, b);
    std::string payload = "ip|v" + std::to_string(v) + "|s" +
                          std::to_string(i) + "|" + detail::encode_alpha(alpha) +
                          "|B" + std::to_string(bstart) +
                          suffix(ap, budget, b);
    return make(payload, Quantifier::existential, false, "", Terminal::none,
                [this, v, ap, i, alpha, total, budget, b] {
                  std::vector<Configuration> out;
                  for (Count p = 1; p <= total; ++p)
                    out.push_back(
                        interleave_label(v, ap, i, alpha, p, total, budget, b));
                  return out;
                });
  }

  Configuration interleave_label(int v, const Assignment& ap, std::size_t i,
                                 const std::optional<Fact>& alpha, Count p,
                                 Count total, std::size_t budget,
                                 std::size_t b) {
    std::string alpha_str = detail::encode_alpha(alpha);
    if (!bitpath_) {
      std::string symbol = "(" + alpha_str + "," + p.get_str() + ")";
      std::string payload = "il|v" + std::to_string(v) + "|s" +
                            std::to_string(i) + "|" + symbol +
                            suffix(ap, budget, b);
      return make(payload, Quantifier::existential, true, symbol,
                  Terminal::none, [this, v, ap, i, budget, b] {
                    return std::vector<Configuration>{
                        at_slot(v, ap, i + 1, budget, b)};
                  });
    }
    // Bitpath mode: spell p-1 in a fixed number of bits (most significant
    // first) as a path of (α, bit) labels; the fixed width keeps the
    // path-to-index map injective per block context.
    std::size_t width = bit_length(total);
    return bit_label(v, ap, i, alpha_str, p - 1, width, 0, budget, b);
  }

  Configuration bit_label(int v, const Assignment& ap, std::size_t i,
                          const std::string& alpha_str, Count index,
                          std::size_t width, std::size_t j, std::size_t budget,
                          std::size_t b) {
    int bit = mpz_tstbit(index.get_mpz_t(),
                         static_cast<mp_bitcnt_t>(width - 1 - j));
    std::string symbol = "(" + alpha_str + "," + std::to_string(bit) + ")";
    std::string payload = "bl|v" + std::to_string(v) + "|s" +
                          std::to_string(i) + "|" + alpha_str + "|w" +
                          std::to_string(width) + "|j" + std::to_string(j) +
                          "|p" + index.get_str() + suffix(ap, budget, b);
    return make(payload, Quantifier::existential, true, symbol,
                Terminal::none,
                [this, v, ap, i, alpha_str, index, width, j, budget, b] {
                  if (j + 1 == width)
                    return std::vector<Configuration>{
                        at_slot(v, ap, i + 1, budget, b)};
                  return std::vector<Configuration>{bit_label(
                      v, ap, i, alpha_str, index, width, j + 1, budget, b)};
                });
  }

  Configuration node_exit(int v, const Assignment& ap, std::size_t budget,
                          std::size_t b) {
    const auto& children = in_.ghd.nodes[static_cast<std::size_t>(v)].children;
    if (children.empty()) {
      // Leaf: accept iff the budget is used up exactly.
      std::string payload = "leaf|v" + std::to_string(v) + "|N" +
                            std::to_string(budget);
      return make(payload, Quantifier::existential, false, "",
                  budget == 0 ? Terminal::accept : Terminal::reject, {});
    }
    std::string payload = "bp|v" + std::to_string(v) + suffix(ap, budget, b);
    return make(payload, Quantifier::existential, false, "", Terminal::none,
                [this, v, ap, budget, b] {
                  std::vector<Configuration> out;
                  for (std::size_t p = 0; p <= budget; ++p)
                    out.push_back(split(v, ap, p, budget, b));
                  return out;
                });
  }

  Configuration split(int v, const Assignment& ap, std::size_t p,
                      std::size_t budget, std::size_t b) {
    std::string payload = "u|v" + std::to_string(v) + "|p" +
                          std::to_string(p) + suffix(ap, budget, b);
    return make(payload, Quantifier::universal, false, "", Terminal::none,
                [this, v, ap, p, budget, b] {
                  const auto& children =
                      in_.ghd.nodes[static_cast<std::size_t>(v)].children;
                  return std::vector<Configuration>{
                      guess(children[0], ap, p, b),
                      guess(children[1], ap, budget - p, b + p)};
                });
  }

  PreparedInstance in_;
  bool bitpath_;
  std::optional<SeqRestriction> restriction_;
  std::map<std::size_t, std::vector<Slot>> slots_;
};

}  // namespace

std::unique_ptr<BranchingProgram> seq_program(
    const PreparedInstance& instance, bool bitpath_mode,
    const std::optional<SeqRestriction>& restriction) {
  return std::make_unique<SeqProgram>(instance, bitpath_mode, restriction);
}

}  // namespace ocqa
