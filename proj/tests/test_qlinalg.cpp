#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sepsdp/matrix_io.hpp"
#include "sepsdp/qlinalg.hpp"
#include "sepsdp/states.hpp"
#include "support.hpp"

#include <algorithm>
#include <numeric>

using namespace sepsdp;
using sepsdp::testing::random_hermitian;
using sepsdp::testing::random_vector;

namespace {

CMatrix bell_projector() {
  CVector v = CVector::Zero(4);
  v(0) = v(3) = 1 / std::sqrt(2.0);
  return v * v.adjoint();
}

// Independent oracle: rho^{T_A}_{(i k),(j l)} = rho_{(j k),(i l)} on [d_a, d_b].
CMatrix pt_oracle(const CMatrix& m, int d_a, int d_b) {
  CMatrix out(m.rows(), m.cols());
  for (int i = 0; i < d_a; ++i)
    for (int j = 0; j < d_a; ++j)
      for (int k = 0; k < d_b; ++k)
        for (int l = 0; l < d_b; ++l) out(i * d_b + k, j * d_b + l) = m(j * d_b + k, i * d_b + l);
  return out;
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// The literal average of all k! copy permutations.
CMatrix projector_by_permutations(int d, int k) {
  const TensorSpace space(std::vector<int>(static_cast<size_t>(k), d));
  std::vector<int> perm(static_cast<size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  CMatrix sum = CMatrix::Zero(space.total(), space.total());
  double count = 0;
  do {
    sum += permutation_operator(space, perm);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum / count;
}

}  // namespace

TEST_CASE("partial transpose of the Bell projector has one negative eigenvalue") {
  const RVector ev = eigenvalues(partial_transpose(bell_projector(), TensorSpace({2, 2}), 0));
  CHECK(ev(0) == doctest::Approx(-0.5).epsilon(1e-14));
  for (int i = 1; i < 4; ++i) CHECK(ev(i) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("partial transpose leaves a real product state unchanged") {
  CMatrix zero = CMatrix::Zero(2, 2), plus = CMatrix::Constant(2, 2, 0.5);
  zero(0, 0) = 1;
  const CMatrix rho = kron(zero, plus);
  CHECK(max_abs(partial_transpose(rho, TensorSpace({2, 2}), 0) - rho) == 0.0);
}

TEST_CASE("partial transpose matches the index oracle and is an involution") {
  std::mt19937_64 rng(11);
  const TensorSpace space({3, 3});
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix m = random_hermitian(9, rng);
    const CMatrix pt = partial_transpose(m, space, 0);
    CHECK(max_abs(pt - pt_oracle(m, 3, 3)) == 0.0);
    CHECK(std::abs(pt.trace() - m.trace()) < 1e-14);
    CHECK(max_abs(partial_transpose(pt, space, 0) - m) < 1e-14);
    CHECK(is_hermitian(pt));
    CHECK(std::abs(pt.norm() - m.norm()) < 1e-12);
  }
}

TEST_CASE("partial transpose on mismatched dimensions names the factor") {
  const CMatrix m = CMatrix::Identity(5, 5);
  CHECK_THROWS_AS(partial_transpose(m, TensorSpace({2, 2}), 0), DimensionError);
  try {
    (void)partial_transpose(CMatrix::Identity(4, 4), TensorSpace({2, 2}), 3);
    FAIL("expected a DimensionError");
  } catch (const DimensionError& e) {
    CHECK(e.factor() == 3);
  }
}

TEST_CASE("partial trace reductions") {
  const TensorSpace space({2, 2});
  CHECK(max_abs(partial_trace(bell_projector(), space, 1) - CMatrix::Identity(2, 2) / 2.0) < 1e-15);

  std::mt19937_64 rng(3);
  const CMatrix a = random_hermitian(3, rng), b = random_hermitian(2, rng);
  CHECK(max_abs(partial_trace(kron(a, b), TensorSpace({3, 2}), 1) - b.trace() * a) < 1e-13);

  const int all[2] = {0, 1};
  const CMatrix scalar = partial_trace(kron(a, b), TensorSpace({3, 2}), std::span<const int>(all));
  CHECK(scalar.rows() == 1);
  CHECK(std::abs(scalar(0, 0) - a.trace() * b.trace()) < 1e-12);

  const int twice[2] = {1, 1};
  CHECK_THROWS_AS(partial_trace(kron(a, b), TensorSpace({3, 2}), std::span<const int>(twice)), DimensionError);
}

TEST_CASE("tracing the extra copy of a separable extension returns the state") {
  const ProductEnsemble e = random_ensemble(2, 3, 2, 5);
  const CMatrix ext = separable_extension(e, 2);  // [A, A, B]
  const CMatrix down = partial_trace(ext, TensorSpace({2, 2, 3}), 1);
  CHECK(max_abs(down - from_ensemble(e).matrix()) < 1e-14);
}

TEST_CASE("partial trace commutes with a disjoint partial transpose") {
  std::mt19937_64 rng(8);
  const TensorSpace space({2, 3, 2});
  const CMatrix m = random_hermitian(12, rng);
  const CMatrix lhs = partial_trace(partial_transpose(m, space, 0), space, 2);
  const CMatrix rhs = partial_transpose(partial_trace(m, space, 2), TensorSpace({2, 3}), 0);
  CHECK(max_abs(lhs - rhs) < 1e-14);
}

TEST_CASE("swap operators") {
  const CMatrix s = swap_operator(TensorSpace({2, 2}), 0, 1);
  CVector v01 = CVector::Zero(4), v10 = CVector::Zero(4);
  v01(1) = 1;
  v10(2) = 1;
  CHECK(max_abs(s * v01 - v10) == 0.0);

  const CMatrix p = swap_operator(TensorSpace({3, 3, 3}), 0, 2);
  CHECK(max_abs(p * p - CMatrix::Identity(27, 27)) == 0.0);
  CHECK(max_abs(p - p.adjoint()) == 0.0);

  // Copies 0 and 2 of [A, B, A] hold the same product vectors in every term.
  const ProductEnsemble e = random_ensemble(2, 3, 2, 9);
  const CMatrix ext_abb = separable_extension(e, 2);  // [A, A, B]
  const int to_aba[3] = {0, 2, 1};
  const CMatrix ext = permute_factors(ext_abb, TensorSpace({2, 2, 3}), to_aba);
  const CMatrix q = swap_operator(TensorSpace({2, 3, 2}), 0, 2);
  CHECK(max_abs(q * ext * q - ext) < 1e-14);

  CHECK_THROWS_AS(swap_operator(TensorSpace({2, 3}), 0, 1), DimensionError);
}

TEST_CASE("symmetric projector ranks") {
  CHECK(symmetric_dimension(2, 2) == 3);
  CHECK(symmetric_dimension(3, 2) == 6);
  CHECK(symmetric_dimension(3, 8) == 45);
  CHECK(3 * symmetric_dimension(3, 8) == 135);

  const CMatrix p22 = CMatrix(symmetric_projector(2, 2));
  CHECK(numerical_rank(p22) == 3);
  CHECK(std::abs(p22.trace().real() - 3) < 1e-14);
  CHECK(numerical_rank(CMatrix(symmetric_projector(3, 2))) == 6);
}

TEST_CASE("symmetric projector equals the permutation average") {
  for (int d = 2; d <= 3; ++d)
    for (int k = 1; k <= 4; ++k) {
      CAPTURE(d);
      CAPTURE(k);
      const CMatrix p = CMatrix(symmetric_projector(d, k));
      CHECK(max_abs(p - projector_by_permutations(d, k)) < 1e-14);
      CHECK(max_abs(p * p - p) < 1e-13);
      CHECK(max_abs(p - p.adjoint()) == 0.0);
    }
}

TEST_CASE("symmetric projector rank is C(d+k-1, k) for d <= 4, k <= 8") {
  // P = V V^dagger with V^dagger V = 1 pins the rank; the isometry check is cheap at any size.
  for (int d = 2; d <= 4; ++d)
    for (int k = 1; k <= 8; ++k) {
      CAPTURE(d);
      CAPTURE(k);
      const SymmetricSubspace sym(d, k);
      REQUIRE(sym.dim() == static_cast<Index>(binomial(d + k - 1, k)));
      const SparseCMatrix v = sym.isometry();
      const SparseCMatrix vtv = SparseCMatrix(v.adjoint()) * v;
      CHECK(max_abs(CMatrix(vtv) - CMatrix::Identity(sym.dim(), sym.dim())) < 1e-13);
      const SparseCMatrix p = symmetric_projector(d, k);
      double trace = 0;
      for (Index i = 0; i < p.rows(); ++i) trace += p.coeff(i, i).real();
      CHECK(trace == doctest::Approx(static_cast<double>(sym.dim())).epsilon(1e-12));
      if (sym.ambient() <= 729) {
        const CMatrix vv = CMatrix(v) * CMatrix(v).adjoint();
        CHECK(max_abs(vv - CMatrix(p)) < 1e-14);
      }
    }
}

TEST_CASE("hermitian basis invariants") {
  for (int d = 2; d <= 4; ++d) {
    const OperatorBasis b = hermitian_basis(d);
    REQUIRE(b.elements.size() == static_cast<size_t>(d * d));
    double trace_sum = 0;
    for (size_t i = 0; i < b.elements.size(); ++i) {
      CHECK(is_hermitian(b.elements[i]));
      const double tr = b.elements[i].trace().real();
      trace_sum += tr;
      CHECK(tr == doctest::Approx(i == 0 ? 1.0 : 0.0));
      for (size_t j = 0; j < b.elements.size(); ++j) {
        const Complex g = (b.elements[i] * b.elements[j]).trace();
        const double expected = i != j ? 0.0 : (i == 0 ? 1.0 / d : 1.0);
        CHECK(std::abs(g - expected) < 1e-14);
      }
    }
    CHECK(trace_sum == doctest::Approx(1.0));
  }
}

TEST_CASE("basis expansion round-trips") {
  std::mt19937_64 rng(21);
  for (int d = 2; d <= 5; ++d) {
    const OperatorBasis b = hermitian_basis(d);
    const CMatrix m = random_hermitian(d, rng);
    CHECK(max_abs(b.resum(b.expand(m)) - m) < 1e-12);
    const OperatorBasis u = hermitian_unit_basis(d);
    CHECK(max_abs(u.resum(u.expand(m)) - m) < 1e-12);
  }
}

TEST_CASE("symmetric operator basis lives on the symmetric subspace") {
  for (auto [d, k, count] : {std::tuple{2, 2, 9}, std::tuple{3, 2, 36}, std::tuple{2, 3, 16}}) {
    const OperatorBasis b = symmetric_operator_basis(d, k);
    REQUIRE(b.elements.size() == static_cast<size_t>(count));
    const CMatrix p = CMatrix(symmetric_projector(d, k));
    for (size_t i = 0; i < b.elements.size(); ++i) {
      CHECK(max_abs(p * b.elements[i] * p - b.elements[i]) < 1e-13);
      CHECK(is_hermitian(b.elements[i]));
      for (size_t j = i + 1; j < b.elements.size(); ++j)
        CHECK(std::abs((b.elements[i] * b.elements[j]).trace()) < 1e-13);
    }
  }
}

TEST_CASE("hermiticity is required, not repaired") {
  CMatrix m = CMatrix::Identity(2, 2);
  m(0, 1) = 1e-3;
  CHECK_THROWS_AS(require_hermitian(m, "probe"), std::invalid_argument);
  CHECK_NOTHROW(require_hermitian(hermitian_part(m), "probe"));
}

TEST_CASE("matrix files round-trip at 17 digits") {
  std::mt19937_64 rng(4);
  MatrixFile f;
  f.dims = {2, 3};
  f.kind = MatrixKind::State;
  f.matrix = random_hermitian(6, rng);
  f.annotations = {{"direction", "AtoB"}};
  const MatrixFile g = parse_matrix_file(dump_matrix_file(f));
  CHECK(g.dims == f.dims);
  CHECK(g.kind == MatrixKind::State);
  CHECK(max_abs(g.matrix - f.matrix) == 0.0);
  CHECK(g.annotations.at("direction") == "AtoB");
}

TEST_CASE("malformed matrix files name the field") {
  auto field_of = [](const std::string& text) {
    try {
      parse_matrix_file(text);
    } catch (const FormatError& e) {
      return e.field();
    }
    return std::string("none");
  };
  CHECK(field_of("{not json") == "document");
  CHECK(field_of(R"({"kind":"state","entries":[]})") == "dims");
  CHECK(field_of(R"({"dims":[2,2],"kind":"potato","entries":[]})") == "kind");
  CHECK(field_of(R"({"dims":[2,2],"kind":"state","entries":[[1,0]]})") == "entries");
}

TEST_CASE("product vectors of random_vector helper feed kron consistently") {
  std::mt19937_64 rng(1);
  const CVector x = random_vector(2, rng), y = random_vector(3, rng);
  CVector xy(6);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) xy(i * 3 + j) = x(i) * y(j);
  const CMatrix lhs = kron(x * x.adjoint(), y * y.adjoint());
  CHECK(max_abs(lhs - xy * xy.adjoint()) < 1e-13);
}
