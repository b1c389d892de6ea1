#include "programs_common.hpp"

#include <algorithm>

#include "ocqa/nfta.hpp"

namespace ocqa::detail {

std::string encode_assignment(const Assignment& a) {
  std::vector<std::string> parts;
  parts.reserve(a.size());
  for (const auto& [atom, fact] : a)
    parts.push_back("a" + std::to_string(atom) + "=" + to_string(fact));
  return join(parts, "&");
}

std::string encode_alpha(const std::optional<Fact>& alpha) {
  return alpha ? to_string(*alpha) : "bot";
}

MappingSet assignment_pairs(const Query& q, const Assignment& a) {
  MappingSet pairs;
  pairs.reserve(a.size());
  for (const auto& [atom, fact] : a)
    pairs.push_back({q.atoms[atom].terms, fact.args});
  return pairs;
}

std::vector<Assignment> coherent_assignments(const PreparedInstance& in, int v,
                                             const MappingSet& base) {
  std::vector<std::size_t> atoms(
      in.ghd.nodes[static_cast<std::size_t>(v)].lambda.begin(),
      in.ghd.nodes[static_cast<std::size_t>(v)].lambda.end());
  std::vector<Assignment> result;
  Assignment current;
  MappingSet pairs = base;
  std::function<void(std::size_t)> walk = [&](std::size_t i) {
    if (i == atoms.size()) {
      result.push_back(current);
      return;
    }
    const Atom& atom = in.query.atoms[atoms[i]];
    for (const Fact& fact : in.db.facts_of(atom.predicate)) {
      if (fact.args.size() != atom.terms.size()) continue;
      pairs.push_back({atom.terms, fact.args});
      if (coherent(pairs)) {
        current.emplace_back(atoms[i], fact);
        walk(i + 1);
        current.pop_back();
      }
      pairs.pop_back();
    }
  };
  walk(0);
  return result;
}

std::vector<std::size_t> min_covered_atoms(const PreparedInstance& in, int v) {
  std::vector<std::size_t> out;
  for (std::size_t a :
       in.ghd.nodes[static_cast<std::size_t>(v)].lambda)
    if (min_covering_vertex(in.ghd, in.query, a) == v) out.push_back(a);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ocqa::detail

namespace ocqa {

PreparedInstance prepare_instance(const Database& d, const KeySpec& keys,
                                  const Query& q,
                                  const std::vector<Constant>& tuple,
                                  const GHD* ghd, bool require_answer_cover) {
  if (tuple.size() != q.answer_terms.size())
    throw ValidationError("answer tuple arity does not match the query head");
  GHD base = ghd ? *ghd : gyo_join_tree(q);
  if (require_answer_cover) base.covers_answer_vars = true;
  validate_or_throw(base, q);
  base = make_complete(base, q);
  NormalFormResult nf = normal_form(d, q, base);
  PreparedInstance out;
  out.db = std::move(nf.db);
  out.keys = keys;
  out.query = std::move(nf.query);
  out.ghd = std::move(nf.ghd);
  out.artifact_facts = std::move(nf.artifact_facts);
  out.tuple = tuple;
  return out;
}

std::size_t size_bound(ProgramKind kind, const PreparedInstance& instance) {
  const std::size_t facts = instance.db.size();
  const std::size_t nblocks = blocks(instance.db, instance.keys).size();
  switch (kind) {
    case ProgramKind::rep:
      return 1 + nblocks;
    case ProgramKind::seq_compact:
      return 1 + facts + nblocks;
    case ProgramKind::seq_bitpath: {
      const std::size_t ops = facts - nblocks;  // per block at most |B|-1 ops
      const std::size_t width =
          ops == 0 ? 1 : bit_length(binomial(ops, ops / 2));
      return 1 + ops + nblocks * width;
    }
    case ProgramKind::ghwcq: {
      std::set<std::string> ans = answer_variables(instance.query);
      std::size_t labels = 0;
      for (const auto& node : instance.ghd.nodes) {
        if (!node.children.empty()) ++labels;  // bag marker
        for (const auto& x : node.chi)
          if (ans.count(x)) ++labels;
      }
      return 1 + labels;
    }
    case ProgramKind::ur:
      return 1 + facts;
  }
  throw ValidationError("unreachable program kind");
}

Count pipeline_numerator(const Database& d, const KeySpec& keys,
                         const Query& q, const std::vector<Constant>& tuple,
                         const GHD* ghd, Semantics semantics, bool bitpath,
                         const Guards& guards) {
  const bool answer_cover = semantics == Semantics::answers;
  PreparedInstance instance =
      prepare_instance(d, keys, q, tuple, ghd, answer_cover);
  std::unique_ptr<BranchingProgram> program;
  ProgramKind kind;
  switch (semantics) {
    case Semantics::repairs:
      program = rep_program(instance, false);
      kind = ProgramKind::rep;
      break;
    case Semantics::subset:
      program = rep_program(instance, true);
      kind = ProgramKind::rep;
      break;
    case Semantics::sequences:
      program = seq_program(instance, bitpath);
      kind = bitpath ? ProgramKind::seq_bitpath : ProgramKind::seq_compact;
      break;
    case Semantics::ur:
      program = ur_program(instance);
      kind = ProgramKind::ur;
      break;
    case Semantics::answers:
      program = ghwcq_program(instance);
      kind = ProgramKind::ghwcq;
      break;
    default:
      throw ValidationError("unsupported semantics for the automaton engine");
  }
  ComputationDAG dag = build_dag(*program, guards);
  NFTA automaton = build_nfta(dag);
  return count_language_up_to(automaton, size_bound(kind, instance));
}

}  // namespace ocqa
