#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sepsdp/sdp.hpp"

#include <random>

using namespace sepsdp;

namespace {

SparseCMatrix sparse(const CMatrix& m) {
  return m.sparseView();
}

CMatrix random_hermitian(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  return 0.5 * (a + a.adjoint());
}

CMatrix random_pd(Index n, std::mt19937_64& rng) {
  const CMatrix a = random_hermitian(n, rng);
  return a * a + 0.5 * CMatrix::Identity(n, n);
}

// Strictly feasible on both sides: F0 > 0 at x = 0, and Z0 > 0 fixes c.
SdpProblem random_bounded_problem(std::mt19937_64& rng, std::vector<Index> sizes, Index m) {
  BlockMatrix f0, z0;
  for (Index n : sizes) {
    f0.push_back(random_pd(n, rng));
    z0.push_back(random_pd(n, rng));
  }
  std::vector<std::vector<SparseCMatrix>> f(static_cast<size_t>(m));
  RVector c(m);
  for (Index i = 0; i < m; ++i) {
    double ci = 0;
    for (size_t b = 0; b < sizes.size(); ++b) {
      const CMatrix h = random_hermitian(sizes[b], rng);
      ci += (h * z0[b]).trace().real();
      f[static_cast<size_t>(i)].push_back(sparse(h));
    }
    c(i) = ci;
  }
  return SdpProblem(f0, f, c);
}

// Feasibility problem with traceless directions and a random F0.
SdpProblem random_feasibility_problem(std::mt19937_64& rng, Index n, Index m, double shift) {
  BlockMatrix f0{random_hermitian(n, rng) + shift * CMatrix::Identity(n, n)};
  std::vector<std::vector<SparseCMatrix>> f;
  for (Index i = 0; i < m; ++i) {
    CMatrix h = random_hermitian(n, rng);
    h -= (h.trace() / static_cast<double>(n)) * CMatrix::Identity(n, n);
    f.push_back({sparse(h)});
  }
  return SdpProblem(f0, f);
}

}  // namespace

TEST_CASE("scalar LP: minimize x subject to x - 1 >= 0") {
  SdpProblem p({CMatrix::Constant(1, 1, -1.0)}, {{sparse(CMatrix::Constant(1, 1, 1.0))}}, RVector::Constant(1, 1.0));
  const SdpOutcome out = solve(p);
  CHECK(out.status == SdpStatus::Feasible);
  CHECK(out.x(0) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(std::abs(out.gap) <= 1e-8);
}

TEST_CASE("margin of constant identity is -1") {
  SdpProblem p({CMatrix::Identity(2, 2)}, {});
  const SdpOutcome out = feasibility_margin(p);
  CHECK(out.status == SdpStatus::Feasible);
  CHECK(out.margin_t == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("margin of constant -identity is +1 with certificate identity/2") {
  SdpProblem p({-CMatrix::Identity(2, 2)}, {});
  const SdpOutcome out = feasibility_margin(p);
  REQUIRE(out.status == SdpStatus::Infeasible);
  CHECK(out.margin_t == doctest::Approx(1.0).epsilon(1e-8));
  CHECK((out.Z[0] - CMatrix::Identity(2, 2) / 2.0).norm() < 1e-8);
  const CertificateCheck c = verify_certificate(p, out.Z);
  CHECK(c.passed);
  CHECK(c.objective == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("weakly infeasible [[x,1],[1,0]] is Marginal") {
  CMatrix f0(2, 2), f1 = CMatrix::Zero(2, 2);
  f0 << 0, 1, 1, 0;
  f1(0, 0) = 1;
  SdpProblem p({f0}, {{sparse(f1)}});
  CHECK_FALSE(check_slater(p).holds);
  const SdpOutcome out = feasibility_margin(p);
  CHECK(out.status == SdpStatus::Marginal);
  CHECK(std::abs(out.margin_t) < 1e-7);
}

TEST_CASE("zero certificate fails verification") {
  SdpProblem p({-CMatrix::Identity(2, 2)}, {});
  const CertificateCheck c = verify_certificate(p, {CMatrix::Zero(2, 2)});
  CHECK_FALSE(c.passed);
  CHECK(c.objective == 0.0);
}

TEST_CASE("verify_certificate rejects shape mismatch") {
  SdpProblem p({-CMatrix::Identity(2, 2)}, {});
  CHECK_THROWS_AS(verify_certificate(p, {CMatrix::Identity(3, 3)}), DimensionError);
}

TEST_CASE("Slater check on traceless directions") {
  CMatrix z(2, 2);
  z << 1, 0, 0, -1;
  SdpProblem p({CMatrix::Identity(2, 2)}, {{sparse(z)}});
  const SlaterCheck s = check_slater(p);
  CHECK(s.holds);
  REQUIRE(s.z0.size() == 1);
  CHECK(s.z0[0].isIdentity());
}

TEST_CASE("non-Hermitian data is rejected") {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 1) = 1.0;
  CHECK_THROWS(SdpProblem({a}, {}));
  CHECK_THROWS(SdpProblem({CMatrix::Identity(2, 2)}, {{sparse(a)}}));
}

TEST_CASE("weak duality holds at every feasible iterate") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const SdpProblem p = random_feasibility_problem(rng, 6, 8, trial % 2 ? 2.0 : -1.0);
    const SdpOutcome out = feasibility_margin(p);
    CHECK(out.history.size() > 1);
    for (const auto& log : out.history) {
      CHECK(log.feasible_iterate);
      CHECK(log.gap >= -1e-8);
    }
  }
  for (int trial = 0; trial < 5; ++trial) {
    const SdpProblem p = random_bounded_problem(rng, {4, 3}, 5);
    const SdpOutcome out = solve(p);
    CHECK(out.status == SdpStatus::Feasible);
    for (const auto& log : out.history)
      if (log.feasible_iterate) CHECK(log.gap >= -1e-8);
  }
}

TEST_CASE("objective problems converge with small gap and complementary slackness") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const SdpProblem p = random_bounded_problem(rng, {5, 3}, 6);
    SolverOptions opt;
    const SdpOutcome out = solve(p, opt);
    REQUIRE(out.status == SdpStatus::Feasible);
    CHECK(std::abs(out.gap) <= 1e-8 * std::max(1.0, std::abs(out.primal_objective)));
    const BlockMatrix fx = p.evaluate(out.x);
    double fz = 0, nf = 0, nz = 0;
    for (size_t b = 0; b < fx.size(); ++b) {
      fz += (fx[b] * out.Z[b]).squaredNorm();
      nf += fx[b].squaredNorm();
      nz += out.Z[b].squaredNorm();
    }
    CHECK(std::sqrt(fz) <= 10 * opt.tol.gap * std::sqrt(nf) * std::sqrt(nz) );
  }
}

TEST_CASE("certificate soundness on random problems") {
  std::mt19937_64 rng(23);
  int infeasible = 0, feasible = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const SdpProblem p = random_feasibility_problem(rng, 5, 6, (trial % 5) - 2.5);
    const SdpOutcome out = feasibility_margin(p);
    const CertificateCheck c = verify_certificate(p, out.Z);
    if (c.passed) {
      CHECK(out.status != SdpStatus::Feasible);
      ++infeasible;
    }
    if (out.status == SdpStatus::Feasible) {
      ++feasible;
      CHECK(min_eigenvalue(p.evaluate(out.x)[0]) >= -1e-9);
    }
    if (out.status == SdpStatus::Infeasible) CHECK(c.passed);
  }
  CHECK(infeasible > 0);
  CHECK(feasible > 0);
}

TEST_CASE("solves are deterministic") {
  std::mt19937_64 rng(5);
  const SdpProblem p = random_feasibility_problem(rng, 6, 10, 0.0);
  const SdpOutcome a = feasibility_margin(p);
  const SdpOutcome b = feasibility_margin(p);
  CHECK(a.iterations == b.iterations);
  CHECK(a.margin_t == b.margin_t);
  CHECK(a.x == b.x);
  CHECK(a.Z[0] == b.Z[0]);
}

TEST_CASE("trace sink receives one line per iteration") {
  std::mt19937_64 rng(3);
  const SdpProblem p = random_feasibility_problem(rng, 4, 3, 1.0);
  std::vector<std::string> lines;
  SolverOptions opt;
  opt.trace = [&](const IterationLog& l) { lines.push_back(format_iteration(l)); };
  const SdpOutcome out = feasibility_margin(p, opt);
  CHECK(lines.size() == out.history.size());
  CHECK(lines.front().rfind("iter   0", 0) == 0);
}

TEST_CASE("IterLimit when the iteration budget is exhausted") {
  std::mt19937_64 rng(9);
  const SdpProblem p = random_bounded_problem(rng, {4}, 3);
  SolverOptions opt;
  opt.tol.max_iter = 2;
  CHECK(solve(p, opt).status == SdpStatus::IterLimit);
}
