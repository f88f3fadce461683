#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sepsdp/decomp.hpp"
#include "sepsdp/hierarchy.hpp"
#include "sepsdp/states.hpp"
#include "support.hpp"

using namespace sepsdp;

namespace {

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// Both optimal values agree: Tr[Z rho_opt] = Tr[Z]/D + eta.
void check_strong_duality(const DecompositionReport& r) {
  CHECK(std::abs(r.epsilon - r.epsilon_primal) <= 1e-7 * std::max(1.0, r.z.norm()));
}

void check_soundness(const DecompositionReport& r) {
  if (r.verdict == DecompVerdict::Decomposable) {
    CHECK(r.epsilon >= -1e-9);
    CHECK(r.reconstruction_residual <= 1e-7);
    CHECK(min_eigenvalue(r.p_opt) >= -1e-9);
    CHECK(min_eigenvalue(r.q_opt) >= -1e-9);
    CHECK_FALSE(r.rho_opt);
  }
  if (r.verdict == DecompVerdict::Indecomposable) {
    REQUIRE(r.rho_opt);
    const TensorSpace space({r.d_a, r.d_b});
    CHECK(min_eigenvalue(*r.rho_opt) >= -1e-9);
    CHECK(min_eigenvalue(hermitian_part(partial_transpose(*r.rho_opt, space, 0))) >= -1e-9);
    CHECK((r.z * *r.rho_opt).trace().real() < -1e-9);
  }
}

}  // namespace

TEST_CASE("constraint count is D^2 - 1") {
  CHECK(build_decomposability_sdp(CMatrix::Identity(9, 9), 3, 3).num_vars() == 80);
  CHECK(build_decomposability_sdp(CMatrix::Identity(4, 4), 2, 2).num_vars() == 15);
  CHECK(build_decomposability_sdp_units(CMatrix::Identity(4, 4), 2, 2).num_vars() == 15);
  CHECK(build_decomposability_sdp(CMatrix::Identity(9, 9), 3, 3).num_blocks() == 2);
}

TEST_CASE("Z = 0 has optimum eta = 0 at P = Q = 0") {
  const DecompositionReport r = test_decomposable(CMatrix::Zero(4, 4), 2, 2);
  CHECK(r.verdict == DecompVerdict::Decomposable);
  CHECK(std::abs(r.eta) < 1e-7);
  CHECK(max_abs(r.p_opt) < 1e-6);
  CHECK(max_abs(r.q_opt) < 1e-6);
}

TEST_CASE("Z = identity: the whole identity is absorbed by the shift") {
  // H(P + Q^{T_A}) = H(1) = 0 admits P = Q = 0, so eta = 0 and epsilon = Tr[1]/D = 1.
  const DecompositionReport r = test_decomposable(CMatrix::Identity(4, 4), 2, 2);
  CHECK(r.verdict == DecompVerdict::Decomposable);
  CHECK(std::abs(r.eta) < 1e-7);
  CHECK(r.epsilon == doctest::Approx(1.0).epsilon(1e-7));
  check_strong_duality(r);
}

TEST_CASE("the swap is a partial transpose of a PSD operator") {
  const CMatrix swap = swap_operator(TensorSpace({3, 3}), 0, 1);
  // swap = d (|Phi><Phi|)^{T_A}
  CHECK(max_abs(swap - 3.0 * partial_transpose(maximally_entangled(3).matrix(), TensorSpace({3, 3}), 0)) < 1e-14);
  const DecompositionReport r = test_decomposable(swap, 3, 3);
  CHECK(r.verdict == DecompVerdict::Decomposable);
  check_soundness(r);
  check_strong_duality(r);
}

TEST_CASE("random PSD operators are decomposable") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 3; ++i) {
    const CMatrix a = sepsdp::testing::random_complex(6, 6, rng);
    const DecompositionReport r = test_decomposable(a * a.adjoint(), 2, 3);
    CHECK(r.verdict == DecompVerdict::Decomposable);
    CHECK(r.epsilon >= min_eigenvalue(a * a.adjoint()) - 1e-7);
    check_soundness(r);
    check_strong_duality(r);
  }
}

TEST_CASE("epsilon is minimal: shifting past it breaks decomposability") {
  std::mt19937_64 rng(6);
  const CMatrix a = sepsdp::testing::random_complex(4, 4, rng);
  const CMatrix z = a * a.adjoint();
  const DecompositionReport r = test_decomposable(z, 2, 2);
  REQUIRE(r.verdict == DecompVerdict::Decomposable);
  const DecompositionReport shifted =
      test_decomposable(z - (r.epsilon + 1e-5) * CMatrix::Identity(4, 4), 2, 2);
  CHECK(shifted.verdict != DecompVerdict::Decomposable);
  CHECK(shifted.epsilon == doctest::Approx(-1e-5).epsilon(1e-3));
}

TEST_CASE("the analytic 3x3 witness is indecomposable with an edge state") {
  const DecompositionReport r = test_decomposable(choi_witness(), 3, 3);
  REQUIRE(r.verdict == DecompVerdict::Indecomposable);
  check_soundness(r);
  check_strong_duality(r);
  CHECK(std::abs(r.cross_check_epsilon - r.epsilon_primal) < 1e-6);
  // Canonical form Z = P + Q^{T_A} + eps 1.
  CHECK(r.reconstruction_residual < 1e-7);
  const EdgeState e = extract_edge_state(r);
  CHECK(e.p_residual <= 1e-6);
  CHECK(e.q_residual <= 1e-6);
  CHECK(e.rank_rho + e.rank_p <= 9);
  CHECK(e.rank_rho_pt + e.rank_q <= 9);

  HierarchyOptions o;
  o.product_samples = 2000;
  o.gram_points = 100;
  const DensityMatrix rho(e.rho / e.rho.trace().real(), 3, 3);
  CHECK(run_test(rho, {2, true, true}, o).status == TestStatus::Entangled);
}

TEST_CASE("the 4x4 witness is indecomposable") {
  const DecompositionReport r = test_decomposable(gisin_witness(), 4, 4);
  CHECK(r.verdict == DecompVerdict::Indecomposable);
  check_soundness(r);
  check_strong_duality(r);
}

TEST_CASE("edge-state extraction requires an indecomposable verdict") {
  const DecompositionReport r = test_decomposable(CMatrix::Identity(4, 4), 2, 2);
  CHECK_THROWS_AS(extract_edge_state(r), std::logic_error);
}
