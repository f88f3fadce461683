#include "sepsdp/decomp.hpp"

#include <cmath>

namespace sepsdp {

const char* to_string(DecompVerdict v) {
  switch (v) {
    case DecompVerdict::Decomposable: return "Decomposable";
    case DecompVerdict::Indecomposable: return "Indecomposable";
    case DecompVerdict::Marginal: return "Marginal";
  }
  return "?";
}

namespace {

SdpProblem assemble(const CMatrix& z, int d_a, int d_b, const std::vector<CMatrix>& taus) {
  const TensorSpace space({d_a, d_b});
  space.require_square(z.rows(), z.cols());
  require_hermitian(z, "decomposability operator");
  const Index n = space.total();
  const CMatrix f0 = CMatrix::Identity(n, n) / static_cast<double>(n);
  std::vector<std::vector<SparseCMatrix>> coeffs;
  RVector c(static_cast<Index>(taus.size()));
  for (size_t i = 0; i < taus.size(); ++i) {
    const CMatrix pt = partial_transpose(taus[i], space, 0);
    coeffs.push_back({taus[i].sparseView(), pt.sparseView()});
    c(static_cast<Index>(i)) = (taus[i] * z).trace().real();
  }
  return SdpProblem({f0, f0}, std::move(coeffs), c);
}

CMatrix rho_from(const SdpProblem& p, const RVector& x) {
  CMatrix rho = p.constant()[0];
  for (Index i = 0; i < x.size(); ++i) rho += x(i) * CMatrix(p.coefficient(i, 0));
  return hermitian_part(rho);
}

// P = Z + c, Q = c with c large enough: both PD and the trace constraints hold
// because every tau is traceless.
StartPoint feasible_start(const CMatrix& z, Index vars) {
  const Index n = z.rows();
  const double c = std::max(0.0, -min_eigenvalue(z)) + 1.0;
  StartPoint s;
  s.x = RVector::Zero(vars);
  s.Z = {hermitian_part(z) + c * CMatrix::Identity(n, n), c * CMatrix::Identity(n, n)};
  return s;
}

}  // namespace

SdpProblem build_decomposability_sdp(const CMatrix& z, int d_a, int d_b) {
  const OperatorBasis gm = hermitian_basis(d_a * d_b);
  std::vector<CMatrix> taus(gm.elements.begin() + 1, gm.elements.end());
  return assemble(z, d_a, d_b, taus);
}

SdpProblem build_decomposability_sdp_units(const CMatrix& z, int d_a, int d_b) {
  const Index n = static_cast<Index>(d_a) * d_b;
  const OperatorBasis units = hermitian_unit_basis(static_cast<int>(n));
  std::vector<CMatrix> taus;
  for (const CMatrix& e : units.elements)
    if (std::abs(e.trace()) < 1e-14) taus.push_back(e);
  for (Index a = 0; a + 1 < n; ++a) {
    CMatrix t = CMatrix::Zero(n, n);
    t(a, a) = 1.0 / std::sqrt(2.0);
    t(a + 1, a + 1) = -1.0 / std::sqrt(2.0);
    taus.push_back(t);
  }
  return assemble(z, d_a, d_b, taus);
}

DecompositionReport test_decomposable(const CMatrix& z, int d_a, int d_b, const SolverOptions& options) {
  DecompositionReport r;
  r.d_a = d_a;
  r.d_b = d_b;
  r.z = hermitian_part(z);
  const TensorSpace space({d_a, d_b});
  const double dim = static_cast<double>(space.total());
  const double trz = r.z.trace().real() / dim;

  const SdpProblem p = build_decomposability_sdp(r.z, d_a, d_b);
  const SdpOutcome out = solve(p, options, feasible_start(r.z, p.num_vars()));
  r.iterations = out.iterations;
  r.eta = out.dual_objective;
  r.epsilon = trz + r.eta;
  r.duality_gap = out.gap;
  r.p_opt = hermitian_part(out.Z[0]);
  r.q_opt = hermitian_part(out.Z[1]);
  const CMatrix rho = rho_from(p, out.x);
  r.epsilon_primal = (r.z * rho).trace().real();
  const CMatrix recon = r.p_opt + r.epsilon * CMatrix::Identity(r.z.rows(), r.z.cols()) +
                        partial_transpose(r.q_opt, space, 0);
  r.reconstruction_residual = (r.z - recon).norm() / std::max(1e-300, r.z.norm());

  const SdpProblem pu = build_decomposability_sdp_units(r.z, d_a, d_b);
  const SdpOutcome cu = solve(pu, options, feasible_start(r.z, pu.num_vars()));
  r.cross_check_epsilon = (r.z * rho_from(pu, cu.x)).trace().real();

  r.rho_min_eigenvalue = min_eigenvalue(rho);
  r.rho_pt_min_eigenvalue = min_eigenvalue(hermitian_part(partial_transpose(rho, space, 0)));
  const bool solved = out.status == SdpStatus::Feasible;
  const bool ppt_state = r.rho_min_eigenvalue >= -1e-9 && r.rho_pt_min_eigenvalue >= -1e-9;
  if (!solved) r.note = std::string("solver status ") + to_string(out.status);

  if (solved && r.epsilon >= -1e-9 && r.reconstruction_residual <= 1e-7 && min_eigenvalue(r.p_opt) >= -1e-9 &&
      min_eigenvalue(r.q_opt) >= -1e-9) {
    r.verdict = DecompVerdict::Decomposable;
  } else if (solved && r.epsilon_primal <= -1e-7 && ppt_state) {
    r.verdict = DecompVerdict::Indecomposable;
    r.rho_opt = rho;
  } else {
    r.verdict = DecompVerdict::Marginal;
    if (r.note.empty()) r.note = "epsilon inside the marginal band";
  }
  if (std::abs(r.cross_check_epsilon - r.epsilon_primal) > 1e-6) {
    if (!r.note.empty()) r.note += "; ";
    r.note += "matrix-unit cross-check differs by " + std::to_string(std::abs(r.cross_check_epsilon - r.epsilon_primal));
  }
  return r;
}

EdgeState extract_edge_state(const DecompositionReport& report) {
  if (report.verdict != DecompVerdict::Indecomposable || !report.rho_opt)
    throw std::logic_error(std::string("extract_edge_state: verdict is ") + to_string(report.verdict));
  const TensorSpace space({report.d_a, report.d_b});
  EdgeState e;
  e.rho = *report.rho_opt;
  const CMatrix pt = hermitian_part(partial_transpose(e.rho, space, 0));
  auto rel = [](const CMatrix& a, const CMatrix& b) {
    const double s = a.norm() * b.norm();
    return s > 0 ? (a * b).norm() / s : 0.0;
  };
  e.p_residual = rel(report.p_opt, e.rho);
  e.q_residual = rel(report.q_opt, pt);
  e.rank_rho = numerical_rank(e.rho);
  e.rank_rho_pt = numerical_rank(pt);
  e.rank_p = numerical_rank(report.p_opt);
  e.rank_q = numerical_rank(report.q_opt);
  return e;
}

}  // namespace sepsdp
