#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sepsdp/gamma.hpp"
#include "sepsdp/states.hpp"
#include "sepsdp/witness.hpp"
#include "support.hpp"

using namespace sepsdp;
using sepsdp::testing::random_complex;
using sepsdp::testing::random_hermitian;
using sepsdp::testing::random_vector;

namespace {

HierarchyOptions quick() {
  HierarchyOptions o;
  o.product_samples = 3000;
  o.polish_runs = 20;
  o.gram_points = 200;
  return o;
}

CMatrix random_psd(Index n, std::mt19937_64& rng) {
  const CMatrix a = random_complex(n, n, rng);
  return a * a.adjoint();
}

}  // namespace

TEST_CASE("block maps and the fixed-part embedding are adjoint on 20 random pairs") {
  std::mt19937_64 rng(5);
  for (bool reduced : {true, false}) {
    const ExtensionLayout l(2, 3, {2, true, reduced});
    for (int trial = 0; trial < 20; ++trial) {
      const CMatrix x = random_hermitian(6, rng);
      const CMatrix y = random_hermitian(l.extension_dim(), rng);
      CHECK(std::abs((l.embed(x) * y).trace() - (x * l.embed_adjoint(y)).trace()) < 1e-10);
      for (int b = 0; b < static_cast<int>(l.blocks().size()); ++b) {
        const CMatrix z = random_hermitian(l.blocks()[static_cast<size_t>(b)].size, rng);
        // Unreduced coordinates also hold non-symmetric operators, which leave the compressed
        // transposed support; a symmetric one stays inside it.
        const CMatrix g = reduced ? y : l.embed(x);
        const Complex lhs = (l.block_image(g, b) * z).trace();
        const Complex rhs = (g * l.block_adjoint(z, b)).trace();
        CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(lhs)));
      }
    }
  }
}

TEST_CASE("product-state minima of fixed operators") {
  std::mt19937_64 rng(1);
  const ProductMinimum id = evaluate_on_product_states(CMatrix::Identity(9, 9), 3, 3, rng, 500);
  CHECK(id.value == doctest::Approx(1.0).epsilon(1e-12));
  const CMatrix swap = swap_operator(TensorSpace({3, 3}), 0, 1);
  const ProductMinimum s = evaluate_on_product_states(swap, 3, 3, rng, 2000);
  CHECK(s.value >= -1e-12);
  CHECK(s.value < 1e-8);  // orthogonal x, y reach <x|y> = 0
  // A negative product direction is found.
  CHECK(evaluate_on_product_states(-CMatrix::Identity(4, 4), 2, 2, rng, 100).value ==
        doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("analytic witnesses are positive on product states") {
  std::mt19937_64 rng(3);
  CHECK(evaluate_on_product_states(choi_witness(), 3, 3, rng).value >= -1e-9);
  CHECK(evaluate_on_product_states(gisin_witness(), 4, 4, rng).value >= -1e-9);
}

TEST_CASE("witness from a level-2 certificate is sound") {
  const DensityMatrix rho = choi_state(3.5);
  const TestReport r = run_test(rho, {2, true, true}, quick());
  REQUIRE(r.status == TestStatus::Entangled);
  REQUIRE(r.witness);
  const Witness& w = *r.witness;
  CHECK(w.level() == 2);
  CHECK(w.op.cwiseAbs().maxCoeff() > 0);
  CHECK(eigenvalues(w.op).cwiseAbs().maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(w.target_value < -1e-6);
  CHECK(r.certificate->passed);
  CHECK(r.certificate->objective < -1e-6);
  // Tr[rho W_raw] = Tr[F0 Z]
  CHECK(r.witness_consistency < 1e-9);
  CHECK(w.product_min >= -1e-7);
  REQUIRE(r.gram);
  CHECK(r.gram->passed);
  CHECK(r.gram->max_relative < 1e-8);
}

TEST_CASE("Gram identity holds pointwise and for unnormalized vectors") {
  const TestReport r = run_test(choi_state(4.0), {2, true, false}, quick());
  REQUIRE(r.witness);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 10; ++i) {
    const CVector x = 3.0 * random_vector(3, rng), y = 0.2 * random_vector(3, rng);
    const auto [lhs, rhs] = gram_sides(*r.witness, x, y);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
    CHECK(rhs >= -1e-10);
  }
}

TEST_CASE("level-1 witnesses are decomposable: P + Q^{T_B}") {
  const TestReport r = run_test(maximally_entangled(2), {1, true, true}, quick());
  REQUIRE(r.witness);
  std::mt19937_64 rng(2);
  CHECK(verify_ksos_identity(*r.witness, rng, 100).passed);
}

TEST_CASE("extraction rejects non-PSD dual blocks") {
  const ExtensionSpec spec{1, true, true};
  BlockMatrix z = {-CMatrix::Identity(4, 4), CMatrix::Identity(4, 4)};
  CHECK_THROWS_AS(extract_witness(z, 2, 2, spec), std::invalid_argument);
}

TEST_CASE("scaling identities") {
  std::mt19937_64 rng(13);
  const DensityMatrix rho = choi_state(3.2);
  CHECK((scale_state(rho, 1.0).matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-15);
  for (double g : {0.3, 0.49, 0.8}) {
    const CMatrix z = random_hermitian(9, rng);
    const double n = scale_normalization(rho, g);
    const double lhs = (scale_state(rho, g).matrix() * scale_witness(z, 3, 3, g)).trace().real();
    CHECK(lhs == doctest::Approx((rho.matrix() * z).trace().real() / n).epsilon(1e-12));
    CHECK(scale_state(rho, g).matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-14));
  }
  // A local filter maps product operators to product operators, so positivity on
  // product states is preserved.
  const CMatrix w = scale_witness(choi_witness(), 3, 3, 0.4);
  CHECK(evaluate_on_product_states(w, 3, 3, rng, 3000).value >= -1e-9);
  const CMatrix p = random_psd(9, rng);
  CHECK(min_eigenvalue(scale_witness(p, 3, 3, 0.4)) >= -1e-10);
}

TEST_CASE("gamma bracket is consistent with every probe") {
  const GammaBracket b = find_gamma_star(choi_state(3.5), {2, true, true}, 0.05, quick());
  CHECK(b.hi - b.lo <= 0.05 + 1e-15);
  CHECK(b.lo < b.hi);
  CHECK_FALSE(b.marginal_stop);
  for (const auto& [g, s] : b.trail) {
    if (s == TestStatus::Entangled) CHECK(g >= b.hi);
    if (s == TestStatus::SeparableConsistent) CHECK(g <= b.lo);
  }
  // The bracket endpoints were probed, so they carry verdicts.
  bool lo_seen = false, hi_seen = false;
  for (const auto& [g, s] : b.trail) {
    lo_seen = lo_seen || (g == b.lo && s == TestStatus::SeparableConsistent);
    hi_seen = hi_seen || (g == b.hi && s == TestStatus::Entangled);
  }
  CHECK(lo_seen);
  CHECK(hi_seen);
}

TEST_CASE("gamma search reports no sign change for the Bell state") {
  CHECK_THROWS_AS(find_gamma_star(maximally_entangled(2), {2, true, true}, 0.01, quick()), NoSignChange);
  // Undetected at gamma = 1 is also no sign change.
  CHECK_THROWS_AS(find_gamma_star(maximally_mixed(2, 2), {2, true, true}, 0.01, quick()), NoSignChange);
}
