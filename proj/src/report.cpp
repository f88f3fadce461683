#include "sepsdp/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace sepsdp {

using nlohmann::json;

json to_json(const SdpOutcome& out) {
  return {{"status", to_string(out.status)},
          {"margin_t", out.margin_t},
          {"margin_lower", out.margin_lower},
          {"margin_upper", out.margin_upper},
          {"gap", out.gap},
          {"primal_objective", out.primal_objective},
          {"dual_objective", out.dual_objective},
          {"primal_infeasibility", out.primal_infeasibility},
          {"dual_infeasibility", out.dual_infeasibility},
          {"iterations", out.iterations},
          {"converged", out.converged}};
}

json to_json(const ExtensionChecks& c) {
  return {{"trace_residual", c.trace_residual},
          {"swap_residual", c.swap_residual},
          {"min_eigenvalue", c.min_eigenvalue},
          {"transpose_min_eigenvalues", c.transpose_min_eigenvalues},
          {"passed", c.passed}};
}

namespace {

json to_json(const AssemblyMetadata& m) {
  return {{"m", m.m},
          {"block_sizes", m.block_sizes},
          {"block_labels", m.block_labels},
          {"basis", m.basis},
          {"lost_norm", m.lost_norm},
          {"block_ranks", m.block_ranks},
          {"discrepancies", m.discrepancies},
          {"adjoint_residual", m.adjoint_residual}};
}

}  // namespace

MatrixFile witness_file(const Witness& w) {
  MatrixFile f;
  f.dims = {w.d_a, w.d_b};
  f.kind = MatrixKind::Operator;
  f.matrix = w.op;
  f.annotations = {{"scale", w.scale}, {"level", w.level()}, {"target_value", w.target_value},
                   {"product_min", w.product_min}};
  if (w.provenance) f.annotations["dual_objective"] = w.provenance->dual_objective;
  return f;
}

MatrixFile map_file(const LinearMap& m, const std::string& direction) {
  MatrixFile f;
  f.dims = {m.in_dim, m.out_dim};
  f.kind = MatrixKind::Operator;
  f.matrix = m.choi;
  f.annotations = {{"direction", direction}};
  return f;
}

json to_json(const TestReport& r) {
  json j = {{"level", r.spec.k},
            {"ppt", r.spec.ppt},
            {"reduced", r.spec.reduced},
            {"dims", {r.d_a, r.d_b}},
            {"status", to_string(r.status)},
            {"boundary", r.boundary},
            {"solver", to_json(r.solver)},
            {"assembly", to_json(r.meta)},
            {"warnings", r.warnings}};
  if (r.checks) j["extension_checks"] = to_json(*r.checks);
  if (r.traced_down) j["traced_down"] = to_json(*r.traced_down);
  if (r.certificate)
    j["certificate"] = {{"min_eigenvalue", r.certificate->min_eigenvalue},
                        {"max_constraint", r.certificate->max_constraint},
                        {"objective", r.certificate->objective},
                        {"passed", r.certificate->passed}};
  if (r.witness) {
    j["witness"] = to_json(witness_file(*r.witness));
    j["witness_consistency"] = r.witness_consistency;
  }
  if (r.gram) j["gram"] = {{"max_relative", r.gram->max_relative}, {"points", r.gram->points}, {"passed", r.gram->passed}};
  return j;
}

json to_json(const DecompositionReport& r) {
  auto op = [&](const CMatrix& m) {
    MatrixFile f;
    f.dims = {r.d_a, r.d_b};
    f.matrix = m;
    return to_json(f);
  };
  json j = {{"dims", {r.d_a, r.d_b}},
            {"verdict", to_string(r.verdict)},
            {"eta", r.eta},
            {"epsilon", r.epsilon},
            {"epsilon_primal", r.epsilon_primal},
            {"duality_gap", r.duality_gap},
            {"reconstruction_residual", r.reconstruction_residual},
            {"cross_check_epsilon", r.cross_check_epsilon},
            {"rho_min_eigenvalue", r.rho_min_eigenvalue},
            {"rho_pt_min_eigenvalue", r.rho_pt_min_eigenvalue},
            {"iterations", r.iterations},
            {"note", r.note},
            {"p", op(r.p_opt)},
            {"q", op(r.q_opt)}};
  if (r.rho_opt) {
    MatrixFile f;
    f.dims = {r.d_a, r.d_b};
    f.kind = MatrixKind::State;
    f.matrix = *r.rho_opt;
    j["rho_opt"] = to_json(f);
    const EdgeState e = extract_edge_state(r);
    j["edge"] = {{"p_residual", e.p_residual}, {"q_residual", e.q_residual}, {"rank_rho", e.rank_rho},
                 {"rank_rho_pt", e.rank_rho_pt}, {"rank_p", e.rank_p},          {"rank_q", e.rank_q}};
  }
  return j;
}

json to_json(const PositivityReport& r) {
  json per_k = json::array();
  for (const auto& [k, e] : r.per_k_min_eigenvalues) per_k.push_back({{"k", k}, {"min_eigenvalue", e}});
  json j = {{"verdict", to_string(r.verdict)},
            {"choi_min_eigenvalue", r.choi_min_eigenvalue},
            {"certified_k", r.certified_k},
            {"k_max", r.k_max},
            {"per_k", per_k},
            {"violation_value", r.violation_value}};
  if (r.violation_input) j["violation_input"] = matrix_to_json(*r.violation_input);
  return j;
}

json to_json(const GammaBracket& b) {
  json trail = json::array();
  for (const auto& [g, s] : b.trail) trail.push_back({{"gamma", g}, {"status", to_string(s)}});
  return {{"lo", b.lo}, {"hi", b.hi}, {"marginal_stop", b.marginal_stop}, {"trail", trail}};
}

std::string config_hash(const json& config) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string write_report(const std::string& dir, const std::string& prefix, const json& config, const json& report) {
  std::filesystem::create_directories(dir);
  const std::string path = (std::filesystem::path(dir) / (prefix + "-" + config_hash(config) + ".json")).string();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << dump_json({{"config", config}, {"report", report}});
  if (!out) throw std::runtime_error("write failed for " + path);
  return path;
}

}  // namespace sepsdp
