#pragma once

#include "sepsdp/layout.hpp"
#include "sepsdp/sdp.hpp"

#include <limits>
#include <optional>

namespace sepsdp {

// Over X = P (+) Q: maximize -Tr[P + Q]/D subject to Tr[tau_i (P + Q^{T_A})] = Tr[tau_i Z]
// for a traceless Hermitian basis tau_i, D = d_A d_B. The primal variables x give
// rho = 1/D + sum_i x_i tau_i, so F(x) = rho (+) rho^{T_A}.
SdpProblem build_decomposability_sdp(const CMatrix& z, int d_a, int d_b);
// Same problem over the traceless combinations of matrix units; used as the
// independent primal-form cross-check.
SdpProblem build_decomposability_sdp_units(const CMatrix& z, int d_a, int d_b);

enum class DecompVerdict { Decomposable, Indecomposable, Marginal };
const char* to_string(DecompVerdict v);

struct DecompositionReport {
  int d_a = 0, d_b = 0;
  CMatrix z;
  DecompVerdict verdict = DecompVerdict::Marginal;
  double eta = std::numeric_limits<double>::quiet_NaN();      // -Tr[P + Q]/D at the dual point
  double epsilon = std::numeric_limits<double>::quiet_NaN();  // Tr[Z]/D + eta
  double epsilon_primal = std::numeric_limits<double>::quiet_NaN();  // Tr[Z rho_opt]
  double duality_gap = std::numeric_limits<double>::quiet_NaN();
  double reconstruction_residual = std::numeric_limits<double>::quiet_NaN();  // |Z - P - eps - Q^{T_A}| / |Z|
  CMatrix p_opt, q_opt;
  std::optional<CMatrix> rho_opt;
  double rho_min_eigenvalue = 0, rho_pt_min_eigenvalue = 0;
  // Primal-form re-solve in the matrix-unit basis.
  double cross_check_epsilon = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  std::string note;
};

DecompositionReport test_decomposable(const CMatrix& z, int d_a, int d_b, const SolverOptions& options = {});

struct EdgeState {
  CMatrix rho;
  double p_residual = 0;  // |P rho| / (|P| |rho|)
  double q_residual = 0;  // |Q rho^{T_A}| / (|Q| |rho^{T_A}|)
  Index rank_rho = 0, rank_rho_pt = 0, rank_p = 0, rank_q = 0;
};

// Requires verdict Indecomposable.
EdgeState extract_edge_state(const DecompositionReport& report);

}  // namespace sepsdp
