#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ocqa/gen.hpp"
#include "ocqa/nfta.hpp"
#include "ocqa/programs.hpp"
#include "ocqa/selftest.hpp"

using namespace ocqa;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << content;
}

Guards guards_from_env() {
  Guards guards;
  if (const char* env = std::getenv("OCQA_GUARDS")) {
    auto parts = split(env, ',');
    if (parts.size() != 3)
      throw ValidationError("OCQA_GUARDS must be facts,dag-nodes,trees");
    guards.max_oracle_facts = std::stoul(parts[0]);
    guards.max_dag_nodes = std::stoul(parts[1]);
    guards.max_trees = std::stoul(parts[2]);
  }
  return guards;
}

// Shared instance inputs for the rf / count / nfta / ghd commands.
struct JobSpec {
  std::string db_path, keys_path, query_path, ghd_path;
  std::string tuple_text;
  std::string semantics_name = "repairs";
  std::string engine_name = "brute";
  bool bitpath = false;
  std::string emit;
  Guards guards;

  Database db;
  KeySpec keys;
  Query query;
  std::optional<GHD> ghd;
  std::vector<Constant> tuple;

  void load() {
    db = parse_database(read_file(db_path));
    if (!keys_path.empty()) keys = parse_keys(read_file(keys_path));
    query = parse_query(read_file(query_path));
    if (!ghd_path.empty()) ghd = ghd_from_json(read_file(ghd_path));
    if (!tuple_text.empty()) tuple = split(tuple_text, ',');
    if (tuple.size() != query.answer_terms.size())
      throw ValidationError("answer tuple has arity " +
                            std::to_string(tuple.size()) + ", the query needs " +
                            std::to_string(query.answer_terms.size()));
  }

  RfOptions rf_options() const {
    RfOptions opt;
    opt.semantics = parse_semantics(semantics_name);
    opt.engine = parse_engine(engine_name);
    opt.ghd = ghd ? &*ghd : nullptr;
    opt.bitpath = bitpath;
    opt.guards = guards;
    return opt;
  }
};

void add_instance_options(CLI::App* cmd, JobSpec& spec, bool with_semantics) {
  cmd->add_option("--db", spec.db_path, "database file")->required();
  cmd->add_option("--keys", spec.keys_path, "key declarations file");
  cmd->add_option("--query", spec.query_path, "query file")->required();
  cmd->add_option("--ghd", spec.ghd_path, "decomposition JSON file");
  cmd->add_option("--tuple", spec.tuple_text, "candidate answer, e.g. a,b");
  if (with_semantics) {
    cmd->add_option("--semantics", spec.semantics_name,
                    "repairs|sequences|subset|ur|answers");
    cmd->add_option("--engine", spec.engine_name, "brute|nfta");
    cmd->add_flag("--bitpath", spec.bitpath,
                  "bit-path sequence labels (nfta engine)");
  }
  cmd->add_option("--guard-facts", spec.guards.max_oracle_facts,
                  "fact limit for enumeration oracles");
  cmd->add_option("--guard-dag-nodes", spec.guards.max_dag_nodes,
                  "computation DAG node limit");
  cmd->add_option("--guard-trees", spec.guards.max_trees,
                  "enumerated tree limit");
}

ProgramKind kind_for(Semantics semantics, bool bitpath) {
  switch (semantics) {
    case Semantics::repairs:
    case Semantics::subset:
      return ProgramKind::rep;
    case Semantics::sequences:
      return bitpath ? ProgramKind::seq_bitpath : ProgramKind::seq_compact;
    case Semantics::answers:
      return ProgramKind::ghwcq;
    case Semantics::ur:
      return ProgramKind::ur;
  }
  throw ValidationError("unknown semantics");
}

std::unique_ptr<BranchingProgram> program_for(const PreparedInstance& in,
                                              Semantics semantics,
                                              bool bitpath) {
  switch (semantics) {
    case Semantics::repairs:
      return rep_program(in);
    case Semantics::subset:
      return rep_program(in, /*subset_mode=*/true);
    case Semantics::sequences:
      return seq_program(in, bitpath);
    case Semantics::answers:
      return ghwcq_program(in);
    case Semantics::ur:
      return ur_program(in);
  }
  throw ValidationError("unknown semantics");
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int cmd_rf(JobSpec& spec, bool ratio_output) {
  spec.load();
  RfResult r = rf(spec.db, spec.keys, spec.query, spec.tuple,
                  spec.rf_options());
  std::cout << "numerator: " << r.numerator.get_str() << "\n"
            << "denominator: " << r.denominator.get_str() << "\n";
  if (ratio_output) {
    std::cout << "ratio: " << r.value.get_str() << "\n"
              << "decimal: " << decimal_string(r.value, 12) << "\n";
  }
  return 0;
}

int cmd_nfta(JobSpec& spec, const std::string& action) {
  spec.load();
  Semantics semantics = parse_semantics(spec.semantics_name);
  if (semantics == Semantics::answers && spec.tuple.empty() &&
      !spec.query.answer_terms.empty()) {
    // The answer-span automaton never consumes the tuple.
    spec.tuple.assign(spec.query.answer_terms.size(), "_");
  }
  PreparedInstance in =
      prepare_instance(spec.db, spec.keys, spec.query, spec.tuple,
                       spec.ghd ? &*spec.ghd : nullptr,
                       semantics == Semantics::answers);
  auto program = program_for(in, semantics, spec.bitpath);
  ComputationDAG dag = build_dag(*program, spec.guards);
  NFTA automaton = build_nfta(dag);
  std::size_t bound = size_bound(kind_for(semantics, spec.bitpath), in);

  if (action == "build") {
    if (ends_with(spec.emit, "dag.dot"))
      write_output(spec.emit, dag_to_dot(dag));
    else if (ends_with(spec.emit, ".dot"))
      write_output(spec.emit, nfta_to_dot(automaton));
    else
      write_output(spec.emit, nfta_to_json(automaton));
    return 0;
  }
  if (action == "count") {
    BottomUpDFTA dfta = determinize_bottom_up(automaton, spec.guards);
    Count total = 0;
    for (std::size_t s = 1; s <= bound; ++s) {
      Count c = count_by_size(dfta, s);
      total += c;
      std::cout << "size " << s << ": " << c.get_str() << "\n";
    }
    std::cout << "total: " << total.get_str() << "\n";
    return 0;
  }
  // enumerate
  auto trees = enumerate_accepted(automaton, bound, spec.guards);
  if (ends_with(spec.emit, ".dot")) {
    write_output(spec.emit, trees_to_dot(trees));
  } else {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : trees) arr.push_back(nlohmann::json::parse(tree_to_json(t)));
    write_output(spec.emit, arr.dump(2) + "\n");
  }
  std::cerr << "accepted trees: " << trees.size() << "\n";
  return 0;
}

int cmd_ghd(JobSpec& spec, const std::string& action) {
  spec.query = parse_query(read_file(spec.query_path));
  if (!spec.ghd_path.empty()) spec.ghd = ghd_from_json(read_file(spec.ghd_path));

  if (action == "jointree") {
    write_output(spec.emit, ghd_to_json(gyo_join_tree(spec.query)));
    return 0;
  }
  GHD h = spec.ghd ? *spec.ghd : gyo_join_tree(spec.query);
  if (action == "validate") {
    auto report = validate(h, spec.query);
    if (!report.ok) {
      for (const auto& e : report.errors) std::cerr << "error: " << e << "\n";
      return 2;
    }
    std::cout << "ok width=" << report.width << "\n";
    return 0;
  }
  if (action == "complete") {
    write_output(spec.emit, ghd_to_json(make_complete(h, spec.query)));
    return 0;
  }
  // normalize
  spec.db = parse_database(read_file(spec.db_path));
  validate_or_throw(h, spec.query);
  NormalFormResult nf =
      normal_form(spec.db, spec.query, make_complete(h, spec.query));
  auto report = validate(nf.ghd, nf.query);
  std::cout << "width: " << report.width << "\n"
            << "strongly_complete: "
            << (is_strongly_complete(nf.ghd, nf.query) ? "yes" : "no") << "\n"
            << "two_uniform: " << (is_two_uniform(nf.ghd) ? "yes" : "no")
            << "\n"
            << "artifact_facts: " << nf.artifact_facts.size() << "\n";
  if (!spec.emit.empty()) write_output(spec.emit, ghd_to_json(nf.ghd));
  return 0;
}

struct GenSpec {
  std::string out;      // file prefix; empty prints sections to stdout
  std::size_t k = 1;
  bool edge = false, triangle = false;
  std::size_t path_n = 0, cycle_n = 0;
  std::size_t vars = 0;
  std::vector<std::string> clauses;
};

Graph graph_from(const GenSpec& spec) {
  Graph g;
  if (spec.edge) {
    g.order = 2;
    g.add_edge(0, 1);
  } else if (spec.triangle) {
    g.order = 3;
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(0, 2);
  } else if (spec.path_n > 0) {
    g.order = spec.path_n;
    for (std::size_t i = 0; i + 1 < g.order; ++i) g.add_edge(i, i + 1);
  } else if (spec.cycle_n > 0) {
    g.order = spec.cycle_n;
    for (std::size_t i = 0; i + 1 < g.order; ++i) g.add_edge(i, i + 1);
    g.add_edge(g.order - 1, 0);
  } else {
    throw ValidationError("choose a graph: --edge, --triangle, --path N or --cycle N");
  }
  return g;
}

void emit_instance(const GenInstance& inst, const std::string& prefix) {
  if (prefix.empty()) {
    std::cout << "# database\n" << print_database(inst.db)
              << "# keys\n" << print_keys(inst.keys)
              << "# query\n" << print_query(inst.query) << "\n";
    if (inst.ghd) std::cout << "# ghd\n" << ghd_to_json(*inst.ghd);
    return;
  }
  write_output(prefix + ".db", print_database(inst.db));
  write_output(prefix + ".keys", print_keys(inst.keys));
  write_output(prefix + ".query", print_query(inst.query) + "\n");
  if (inst.ghd) write_output(prefix + ".ghd", ghd_to_json(*inst.ghd));
}

int cmd_gen(const GenSpec& spec, const std::string& family) {
  if (family == "hcoloring") {
    emit_instance(gen_hcoloring(graph_from(spec), spec.k), spec.out);
  } else if (family == "mon2sat") {
    Cnf2 phi;
    phi.variables = spec.vars;
    for (const auto& text : spec.clauses) {
      auto parts = split(text, ',');
      if (parts.size() != 2)
        throw ValidationError("clause must be two variable indices: a,b");
      phi.clauses.push_back({std::stoul(parts[0]), std::stoul(parts[1])});
    }
    emit_instance(gen_mon2sat(phi, spec.k), spec.out);
  } else {
    emit_instance(gen_3col(graph_from(spec)), spec.out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact operational consistent-query-answering engine"};
  app.require_subcommand(1);

  JobSpec spec;
  try {
    spec.guards = guards_from_env();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  auto* rf_cmd = app.add_subcommand("rf", "relative frequency of an answer");
  add_instance_options(rf_cmd, spec, true);

  auto* count_cmd =
      app.add_subcommand("count", "numerator and denominator counts");
  add_instance_options(count_cmd, spec, true);

  auto* nfta_cmd = app.add_subcommand("nfta", "tree-automaton artifacts");
  std::string nfta_action;
  nfta_cmd->add_option("action", nfta_action, "build|count|enumerate")
      ->required()
      ->check(CLI::IsMember({"build", "count", "enumerate"}));
  add_instance_options(nfta_cmd, spec, true);
  nfta_cmd->add_option("--emit", spec.emit, "output file (.json or .dot)");

  auto* ghd_cmd = app.add_subcommand("ghd", "decomposition tooling");
  std::string ghd_action;
  ghd_cmd->add_option("action", ghd_action,
                      "validate|complete|normalize|jointree")
      ->required()
      ->check(CLI::IsMember({"validate", "complete", "normalize", "jointree"}));
  ghd_cmd->add_option("--db", spec.db_path, "database file (normalize)");
  ghd_cmd->add_option("--query", spec.query_path, "query file")->required();
  ghd_cmd->add_option("--ghd", spec.ghd_path, "decomposition JSON file");
  ghd_cmd->add_option("--emit", spec.emit, "output file");

  auto* gen_cmd = app.add_subcommand("gen", "benchmark instance families");
  GenSpec gen_spec;
  std::string gen_family;
  gen_cmd->add_option("family", gen_family, "hcoloring|mon2sat|3col")
      ->required()
      ->check(CLI::IsMember({"hcoloring", "mon2sat", "3col"}));
  gen_cmd->add_option("--out", gen_spec.out, "output file prefix");
  gen_cmd->add_option("--k", gen_spec.k, "width padding parameter");
  gen_cmd->add_flag("--edge", gen_spec.edge, "single-edge graph");
  gen_cmd->add_flag("--triangle", gen_spec.triangle, "triangle graph");
  gen_cmd->add_option("--path", gen_spec.path_n, "path graph on N vertices");
  gen_cmd->add_option("--cycle", gen_spec.cycle_n, "cycle graph on N vertices");
  gen_cmd->add_option("--vars", gen_spec.vars, "variable count (mon2sat)");
  gen_cmd->add_option("--clause", gen_spec.clauses,
                      "clause as two variable indices a,b (repeatable)");

  auto* selftest_cmd =
      app.add_subcommand("selftest", "seeded oracle-vs-pipeline suites");
  std::uint64_t seed = 1;
  std::size_t instances = 25;
  selftest_cmd->add_option("--seed", seed, "random seed");
  selftest_cmd->add_option("--instances", instances, "instances per suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (rf_cmd->parsed()) return cmd_rf(spec, true);
    if (count_cmd->parsed()) return cmd_rf(spec, false);
    if (nfta_cmd->parsed()) return cmd_nfta(spec, nfta_action);
    if (ghd_cmd->parsed()) return cmd_ghd(spec, ghd_action);
    if (gen_cmd->parsed()) return cmd_gen(gen_spec, gen_family);
    if (selftest_cmd->parsed()) {
      SelftestReport report = run_selftest(seed, instances);
      for (const auto& line : report.lines) std::cout << line << "\n";
      return report.ok ? 0 : 1;
    }
  } catch (const GuardError& e) {
    std::cerr << "guard exceeded: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
