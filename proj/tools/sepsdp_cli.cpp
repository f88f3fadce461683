#include "sepsdp/report.hpp"
#include "sepsdp/states.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

using namespace sepsdp;
using nlohmann::json;

namespace {

// Stable exit contract: 0/1/2 carry verdicts, everything above is an error.
constexpr int kExitSeparable = 0;
constexpr int kExitEntangled = 1;
constexpr int kExitMarginal = 2;
constexpr int kExitUsage = 64;
constexpr int kExitResource = 65;
constexpr int kExitInternal = 70;

// Bad user input that maps to exit 64.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  double tol_gap = 1e-8;
  double tol_feas = 1e-9;
  std::uint64_t seed = 1;
  std::string out = "reports";
  int jobs = 1;
  bool trace = false;
};

std::mutex g_io;

void check_globals(const Globals& g) {
  if (!(g.tol_gap > 0) || !(g.tol_feas > 0)) throw UsageError("tolerances must be positive");
  if (g.jobs < 1) throw UsageError("--jobs must be >= 1");
  std::error_code ec;
  std::filesystem::create_directories(g.out, ec);
  const auto probe = std::filesystem::path(g.out) / ".write-probe";
  {
    std::ofstream f(probe);
    if (!f) throw UsageError("output directory '" + g.out + "' is not writable");
  }
  std::filesystem::remove(probe, ec);
}

SolverOptions solver_options(const Globals& g) {
  SolverOptions o;
  o.tol.gap = g.tol_gap;
  o.tol.feas = g.tol_feas;
  if (g.trace)
    o.trace = [](const IterationLog& log) {
      std::lock_guard<std::mutex> lock(g_io);
      std::cerr << format_iteration(log) << "\n";
    };
  return o;
}

HierarchyOptions hierarchy_options(const Globals& g) {
  HierarchyOptions h;
  h.solver = solver_options(g);
  h.seed = g.seed;
  return h;
}

json globals_json(const Globals& g) {
  return {{"tol_gap", g.tol_gap}, {"tol_feas", g.tol_feas}, {"seed", g.seed}};
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_hash(json(ss.str()));
}

MatrixFile load(const std::string& path) {
  if (!std::filesystem::exists(path)) throw UsageError(path + ": no such file");
  return read_matrix_file(path);
}

DensityMatrix load_state(const std::string& path) {
  const MatrixFile f = load(path);
  if (f.dims.size() != 2) throw FormatError("dims", "a bipartite state needs exactly two local dimensions");
  try {
    return DensityMatrix(f.matrix, f.dims[0], f.dims[1]);
  } catch (const std::invalid_argument& e) {
    throw FormatError("entries", e.what());
  }
}

int exit_for(TestStatus s) {
  switch (s) {
    case TestStatus::SeparableConsistent: return kExitSeparable;
    case TestStatus::Entangled: return kExitEntangled;
    case TestStatus::Marginal: return kExitMarginal;
  }
  return kExitInternal;
}

void print_test_line(const TestReport& r) {
  std::cout << "level " << r.spec.describe() << ": " << to_string(r.status);
  if (r.boundary) std::cout << " (boundary)";
  std::cout << "  t=" << format_double(r.solver.margin_t) << "  m=" << r.meta.m << "\n";
  if (r.witness)
    std::cout << "  Tr[W rho]=" << format_double(r.witness->target_value)
              << "  product_min=" << format_double(r.witness->product_min) << "\n";
  for (const std::string& w : r.warnings) std::cout << "  warning: " << w << "\n";
}

// Writes the report, plus the witness as its own operator file when present.
void persist_test(const Globals& g, const std::string& prefix, const json& config, const TestReport& r) {
  json doc = to_json(r);
  const std::string path = write_report(g.out, prefix, config, doc);
  std::cout << "  report " << path << "\n";
  if (r.witness) {
    const std::string wpath =
        (std::filesystem::path(g.out) / ("witness-" + config_hash(config) + ".json")).string();
    write_matrix_file(wpath, witness_file(*r.witness));
    std::cout << "  witness " << wpath << "\n";
  }
}

struct TestArgs {
  std::string input;
  int k = 2;
  int k_max = 3;
  bool no_ppt = false;
  bool no_reduce = false;
};

int cmd_test(const Globals& g, const TestArgs& a) {
  if (a.k < 1) throw UsageError("--k must be >= 1");
  const DensityMatrix rho = load_state(a.input);
  const ExtensionSpec spec{a.k, !a.no_ppt || a.k == 1, !a.no_reduce};
  const json config = {{"verb", "test"}, {"input", file_digest(a.input)}, {"k", spec.k},
                       {"ppt", spec.ppt}, {"reduced", spec.reduced}, {"globals", globals_json(g)}};
  const TestReport r = run_test(rho, spec, hierarchy_options(g));
  print_test_line(r);
  persist_test(g, "test", config, r);
  return exit_for(r.status);
}

int cmd_ladder(const Globals& g, const TestArgs& a) {
  if (a.k_max < 1) throw UsageError("--kmax must be >= 1");
  const DensityMatrix rho = load_state(a.input);
  LadderOptions lo;
  lo.ppt = !a.no_ppt;
  lo.reduced = !a.no_reduce;
  lo.hierarchy = hierarchy_options(g);
  const json config = {{"verb", "ladder"}, {"input", file_digest(a.input)}, {"kmax", a.k_max},
                       {"ppt", lo.ppt}, {"reduced", lo.reduced}, {"globals", globals_json(g)}};
  const std::vector<TestReport> reps = run_ladder(rho, a.k_max, lo);
  json levels = json::array();
  for (const TestReport& r : reps) {
    print_test_line(r);
    levels.push_back(to_json(r));
  }
  std::cout << "  report " << write_report(g.out, "ladder", config, {{"levels", levels}}) << "\n";
  return exit_for(reps.back().status);
}

struct SweepArgs {
  std::string family;
  double from = 0, to = 0, step = 0.1;
  std::vector<double> values;
  int k = 2;
  bool no_ppt = false;
  bool no_reduce = false;
  // gamma mode: scale the family member at `alpha` instead of varying alpha
  bool gamma = false;
  double alpha = 3.0001;
  bool gamma_star = false;
  double gamma_tol = 0.01;
};

std::vector<double> grid(const SweepArgs& a) {
  if (!a.values.empty()) return a.values;
  if (!(a.step > 0) || a.to < a.from) throw UsageError("sweep range needs --from <= --to and --step > 0");
  const long n = std::lround(std::floor((a.to - a.from) / a.step + 1e-9)) + 1;
  std::vector<double> v;
  for (long i = 0; i < n; ++i) v.push_back(std::round((a.from + static_cast<double>(i) * a.step) * 1e12) / 1e12);
  return v;
}

DensityMatrix family_member(const std::string& family, double alpha) {
  if (family == "choi") return choi_state(alpha);
  if (family == "gisin") return gisin_state(alpha);
  throw UsageError("unknown family '" + family + "' (known: choi, gisin)");
}

int cmd_sweep(const Globals& g, const SweepArgs& a) {
  family_member(a.family, 3.0);  // rejects unknown names before any work
  const ExtensionSpec spec{a.k, !a.no_ppt || a.k == 1, !a.no_reduce};
  spec.validate();
  json config = {{"verb", "sweep"}, {"family", a.family}, {"k", spec.k}, {"ppt", spec.ppt},
                 {"reduced", spec.reduced}, {"globals", globals_json(g)}};

  if (a.gamma_star) {
    config["alpha"] = a.alpha;
    config["gamma_tol"] = a.gamma_tol;
    const GammaBracket b = find_gamma_star(family_member(a.family, a.alpha), spec, a.gamma_tol, hierarchy_options(g));
    std::cout << "gamma* in [" << format_double(b.lo) << ", " << format_double(b.hi) << "]"
              << (b.marginal_stop ? " (stopped on a marginal probe)" : "") << "\n";
    std::cout << "  report " << write_report(g.out, "gamma-star", config, to_json(b)) << "\n";
    return kExitSeparable;
  }

  const std::vector<double> params = grid(a);
  config["params"] = params;
  if (a.gamma) config["alpha"] = a.alpha;
  std::vector<std::optional<TestReport>> results(params.size());
  std::vector<std::string> errors(params.size());
  std::atomic<size_t> next{0};
  HierarchyOptions ho = hierarchy_options(g);
  auto worker = [&]() {
    for (size_t i = next++; i < params.size(); i = next++) {
      try {
        const DensityMatrix rho = a.gamma ? scale_state(family_member(a.family, a.alpha), params[i])
                                          : family_member(a.family, params[i]);
        results[i] = run_test(rho, spec, ho);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int j = 0; j < std::min<int>(g.jobs, static_cast<int>(params.size())); ++j) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  std::ostringstream table;
  table << (a.gamma ? "gamma" : "alpha") << "\tstatus\tmargin_t\tboundary\n";
  json rows = json::array();
  for (size_t i = 0; i < params.size(); ++i) {
    if (!results[i]) {
      table << format_double(params[i]) << "\terror\tnull\tfalse\n";
      rows.push_back({{"param", params[i]}, {"error", errors[i]}});
      continue;
    }
    const TestReport& r = *results[i];
    table << format_double(params[i]) << "\t" << to_string(r.status) << "\t" << format_double(r.solver.margin_t)
          << "\t" << (r.boundary ? "true" : "false") << "\n";
    json row = to_json(r);
    row["param"] = params[i];
    rows.push_back(std::move(row));
  }
  std::cout << table.str();
  const std::string path = write_report(g.out, "sweep", config, {{"rows", rows}});
  const std::string tsv = path.substr(0, path.size() - 5) + ".tsv";
  std::ofstream(tsv) << table.str();
  std::cout << "  report " << path << "\n  table " << tsv << "\n";
  return kExitSeparable;
}

int cmd_decompose(const Globals& g, const std::string& input) {
  const MatrixFile f = load(input);
  if (f.dims.size() != 2) throw FormatError("dims", "a bipartite operator needs exactly two local dimensions");
  const DecompositionReport r = test_decomposable(f.matrix, f.dims[0], f.dims[1], solver_options(g));
  std::cout << "verdict " << to_string(r.verdict) << "  eta=" << format_double(r.eta)
            << "  epsilon=" << format_double(r.epsilon) << "  gap=" << format_double(r.duality_gap) << "\n";
  if (!r.note.empty()) std::cout << "  note: " << r.note << "\n";
  const json config = {{"verb", "decompose"}, {"input", file_digest(input)}, {"globals", globals_json(g)}};
  const json doc = to_json(r);
  if (r.rho_opt) {
    const json& e = doc["edge"];
    std::cout << "  ranks rho=" << e["rank_rho"] << " rho^TA=" << e["rank_rho_pt"] << " P=" << e["rank_p"]
              << " Q=" << e["rank_q"] << "\n";
    MatrixFile rf;
    rf.dims = f.dims;
    rf.kind = MatrixKind::State;
    rf.matrix = *r.rho_opt;
    const std::string rpath = (std::filesystem::path(g.out) / ("rho-opt-" + config_hash(config) + ".json")).string();
    write_matrix_file(rpath, rf);
    std::cout << "  rho_opt " << rpath << "\n";
  }
  std::cout << "  report " << write_report(g.out, "decompose", config, doc) << "\n";
  return kExitSeparable;
}

int cmd_posmap(const Globals& g, const std::string& input, int k_max, const std::string& direction) {
  if (k_max < 1) throw UsageError("--kmax must be >= 1");
  const MatrixFile f = load(input);
  if (f.dims.size() != 2) throw FormatError("dims", "a map operator needs exactly two local dimensions");
  MapDirection dir;
  if (direction == "AtoB") dir = MapDirection::AtoB;
  else if (direction == "BtoA") dir = MapDirection::BtoA;
  else throw UsageError("--direction must be AtoB or BtoA");
  const LinearMap m = map_from_witness(f.matrix, f.dims[0], f.dims[1], dir);
  std::mt19937_64 rng(g.seed);
  const PositivityReport r = check_strict_positivity(m, k_max, rng);
  std::cout << (r.choi_min_eigenvalue >= -1e-10 ? "CP" : "NotCP") << "  verdict " << to_string(r.verdict);
  if (r.certified_k > 0) std::cout << "  certified_k=" << r.certified_k;
  std::cout << "\n";
  for (const auto& [k, e] : r.per_k_min_eigenvalues) std::cout << "  k=" << k << "  lambda_min=" << format_double(e) << "\n";
  const json config = {{"verb", "posmap"}, {"input", file_digest(input)}, {"kmax", k_max},
                       {"direction", direction}, {"globals", globals_json(g)}};
  std::cout << "  report " << write_report(g.out, "posmap", config, to_json(r)) << "\n";
  return kExitSeparable;
}

int cmd_table1(const Globals& g, int k_max) {
  if (k_max < 1) throw UsageError("--kmax must be >= 1");
  std::ostringstream table;
  table << "k\talpha\n";
  json rows = json::array();
  for (const auto& [k, alpha] : table1(k_max)) {
    table << k << "\t" << format_double(alpha) << "\n";
    rows.push_back({{"k", k}, {"alpha", alpha}});
  }
  std::cout << table.str();
  const json config = {{"verb", "table1"}, {"kmax", k_max}};
  const std::string path = write_report(g.out, "table1", config, {{"rows", rows}});
  const std::string tsv = path.substr(0, path.size() - 5) + ".tsv";
  std::ofstream(tsv) << table.str();
  std::cout << "  report " << path << "\n  table " << tsv << "\n";
  return kExitSeparable;
}

int cmd_catalog_list() {
  for (const CatalogEntry& e : catalog()) {
    std::cout << e.name << "\t" << (e.is_state ? "state" : "operator") << "\t";
    if (e.has_param) std::cout << "param=" << format_double(e.default_param);
    std::cout << "\t" << e.description << "\n";
  }
  return kExitSeparable;
}

int cmd_catalog_emit(const std::string& name, std::optional<double> param, const std::string& path) {
  const auto& entries = catalog();
  auto it = std::find_if(entries.begin(), entries.end(), [&](const CatalogEntry& e) { return e.name == name; });
  if (it == entries.end()) throw UsageError("unknown catalog entry '" + name + "'");
  MatrixFile f;
  try {
    f.matrix = catalog_matrix(name, param.value_or(it->default_param), f.dims);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  f.kind = it->is_state ? MatrixKind::State : MatrixKind::Operator;
  if (path.empty() || path == "-") std::cout << dump_matrix_file(f);
  else write_matrix_file(path, f);
  return kExitSeparable;
}

// Exit 1 when the file is a valid witness that detects the state, 2 when its
// product-state minimum is negative (not a witness), 0 otherwise.
int cmd_verify_witness(const Globals& g, const std::string& witness, const std::string& state) {
  const MatrixFile f = load(witness);
  if (f.dims.size() != 2) throw FormatError("dims", "a witness needs exactly two local dimensions");
  std::mt19937_64 rng(g.seed);
  const ProductMinimum pm = evaluate_on_product_states(f.matrix, f.dims[0], f.dims[1], rng);
  std::cout << "product_min " << format_double(pm.value) << "\n";
  json doc = {{"product_min", pm.value}, {"samples", pm.samples}, {"polish_runs", pm.polish_runs}};
  std::optional<double> value;
  if (!state.empty()) {
    const DensityMatrix rho = load_state(state);
    if (rho.dim_a() != f.dims[0] || rho.dim_b() != f.dims[1])
      throw FormatError("dims", "witness and state dimensions differ");
    value = (f.matrix * rho.matrix()).trace().real();
    doc["target_value"] = *value;
    std::cout << "Tr[W rho] " << format_double(*value) << "\n";
  }
  json config = {{"verb", "verify-witness"}, {"witness", file_digest(witness)}, {"globals", globals_json(g)}};
  if (!state.empty()) config["state"] = file_digest(state);
  std::cout << "  report " << write_report(g.out, "verify-witness", config, doc) << "\n";
  if (pm.value < -1e-7) return kExitMarginal;
  return value && *value < -1e-9 ? kExitEntangled : kExitSeparable;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Separability tests by PPT symmetric extensions"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--tol-gap", g.tol_gap, "duality-gap tolerance");
  app.add_option("--tol-feas", g.tol_feas, "feasibility tolerance");
  app.add_option("--seed", g.seed, "seed for sampling");
  app.add_option("--out", g.out, "report directory");
  app.add_option("--jobs", g.jobs, "sweep worker threads");
  app.add_flag("--trace", g.trace, "print one solver line per iteration to stderr");

  TestArgs ta;
  auto* test = app.add_subcommand("test", "run one hierarchy level on a state file");
  test->add_option("state", ta.input)->required();
  test->add_option("--k", ta.k, "extension level");
  test->add_flag("--no-ppt", ta.no_ppt, "drop the partial-transpose constraints");
  test->add_flag("--no-reduce", ta.no_reduce, "assemble on the full tensor space");

  TestArgs la;
  auto* ladder = app.add_subcommand("ladder", "run levels 1..kmax until a level detects entanglement");
  ladder->add_option("state", la.input)->required();
  ladder->add_option("--kmax", la.k_max, "highest level");
  ladder->add_flag("--no-ppt", la.no_ppt, "drop the partial-transpose constraints");
  ladder->add_flag("--no-reduce", la.no_reduce, "assemble on the full tensor space");

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "run a family over a parameter grid");
  sweep->add_option("family", sa.family, "choi or gisin")->required();
  sweep->add_option("--from", sa.from);
  sweep->add_option("--to", sa.to);
  sweep->add_option("--step", sa.step);
  sweep->add_option("--values", sa.values, "explicit parameter list")->delimiter(',');
  sweep->add_option("--k", sa.k, "extension level");
  sweep->add_flag("--no-ppt", sa.no_ppt);
  sweep->add_flag("--no-reduce", sa.no_reduce);
  sweep->add_flag("--gamma", sa.gamma, "sweep the local filter gamma at fixed --alpha");
  sweep->add_option("--alpha", sa.alpha, "family parameter for gamma sweeps");
  sweep->add_flag("--gamma-star", sa.gamma_star, "bisect for the verdict flip in gamma");
  sweep->add_option("--gamma-tol", sa.gamma_tol, "bracket width for --gamma-star");

  std::string decomp_input;
  auto* decompose = app.add_subcommand("decompose", "test a witness for decomposability");
  decompose->add_option("witness", decomp_input)->required();

  std::string map_input, direction = "AtoB";
  int map_kmax = 8;
  auto* posmap = app.add_subcommand("posmap", "certify positivity of the map defined by an operator");
  posmap->add_option("operator", map_input)->required();
  posmap->add_option("--kmax", map_kmax);
  posmap->add_option("--direction", direction, "AtoB or BtoA");

  int table_kmax = 8;
  auto* t1 = app.add_subcommand("table1", "alpha thresholds for the Choi-witness map family");
  t1->add_option("--kmax", table_kmax);

  auto* cat = app.add_subcommand("catalog", "list or emit catalog states and operators");
  cat->require_subcommand(1);
  cat->add_subcommand("list", "list entries");
  std::string emit_name, emit_path;
  std::optional<double> emit_param;
  auto* emit = cat->add_subcommand("emit", "write an entry in the matrix format");
  emit->add_option("name", emit_name)->required();
  emit->add_option("--param", emit_param);
  emit->add_option("-o,--output", emit_path, "file path; stdout when omitted");

  std::string vw_witness, vw_state;
  auto* vw = app.add_subcommand("verify-witness", "product-state minimum and Tr[W rho] for a witness file");
  vw->add_option("witness", vw_witness)->required();
  vw->add_option("state", vw_state);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*cat) {
      if (cat->got_subcommand("list")) return cmd_catalog_list();
      return cmd_catalog_emit(emit_name, emit_param, emit_path);
    }
    check_globals(g);
    if (*test) return cmd_test(g, ta);
    if (*ladder) return cmd_ladder(g, la);
    if (*sweep) return cmd_sweep(g, sa);
    if (*decompose) return cmd_decompose(g, decomp_input);
    if (*posmap) return cmd_posmap(g, map_input, map_kmax, direction);
    if (*t1) return cmd_table1(g, table_kmax);
    if (*vw) return cmd_verify_witness(g, vw_witness, vw_state);
  } catch (const FormatError& e) {
    std::cerr << "malformed input, field " << e.field() << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
