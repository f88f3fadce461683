#include "sepsdp/states.hpp"

#include <cmath>
#include <random>

namespace sepsdp {

namespace {

CVector basis_pair(int d_a, int d_b, int a, int b) {
  CVector v = CVector::Zero(static_cast<Index>(d_a) * d_b);
  v(a * d_b + b) = 1;
  return v;
}

CMatrix projector(const CVector& v) { return v * v.adjoint(); }

CMatrix swap_3x3() { return swap_operator(TensorSpace({3, 3}), 0, 1); }

CMatrix sigma_plus() {
  return (projector(basis_pair(3, 3, 0, 1)) + projector(basis_pair(3, 3, 1, 2)) + projector(basis_pair(3, 3, 2, 0))) / 3.0;
}

CVector psi_plus(int d) {
  CVector v = CVector::Zero(static_cast<Index>(d) * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1;
  return v / std::sqrt(static_cast<double>(d));
}

}  // namespace

DensityMatrix choi_state(double alpha) {
  if (!(alpha >= 0 && alpha <= 5)) throw std::invalid_argument("choi_state: alpha must lie in [0, 5]");
  const CMatrix v = swap_3x3();
  const CMatrix s = sigma_plus();
  const CMatrix rho = 2.0 / 7.0 * projector(psi_plus(3)) + alpha / 7.0 * s + (5.0 - alpha) / 7.0 * (v * s * v);
  return DensityMatrix(rho, 3, 3);
}

CMatrix choi_witness() {
  CMatrix z = CMatrix::Zero(9, 9);
  for (int i = 0; i < 3; ++i) z += 2.0 * projector(basis_pair(3, 3, i, i));
  z += projector(basis_pair(3, 3, 0, 2)) + projector(basis_pair(3, 3, 1, 0)) + projector(basis_pair(3, 3, 2, 1));
  z -= 3.0 * projector(psi_plus(3));
  return z;
}

DensityMatrix gisin_state(double alpha) {
  if (!(alpha >= 0)) throw std::invalid_argument("gisin_state: alpha must be >= 0");
  const double r2 = std::sqrt(2.0);
  const CVector psi1 = 0.5 * (basis_pair(4, 4, 0, 0) + basis_pair(4, 4, 1, 1) + r2 * basis_pair(4, 4, 2, 2));
  const CVector psi2 = 0.5 * (basis_pair(4, 4, 0, 1) + basis_pair(4, 4, 1, 0) + r2 * basis_pair(4, 4, 3, 3));
  CMatrix sigma = CMatrix::Zero(16, 16);
  for (int a : {0, 1})
    for (int b : {2, 3}) {
      sigma += projector(basis_pair(4, 4, a, b));
      sigma += projector(basis_pair(4, 4, b, a));
    }
  sigma /= 8.0;
  return DensityMatrix((projector(psi1) + projector(psi2) + alpha * sigma) / (2.0 + alpha), 4, 4);
}

CMatrix gisin_witness() {
  auto e = [](int a, int b) { return basis_pair(4, 4, a, b); };
  CMatrix w = projector(e(2, 2) - e(0, 0)) + projector(e(2, 2) - e(1, 1)) + projector(e(3, 3) - e(0, 1)) +
              projector(e(3, 3) - e(1, 0));
  w += projector(e(2, 3)) + projector(e(3, 2)) - projector(e(2, 2)) - projector(e(3, 3));
  return w;
}

DensityMatrix maximally_mixed(int d_a, int d_b) {
  const Index n = static_cast<Index>(d_a) * d_b;
  return DensityMatrix(CMatrix::Identity(n, n) / static_cast<double>(n), d_a, d_b);
}

DensityMatrix maximally_entangled(int d) { return DensityMatrix(projector(psi_plus(d)), d, d); }

void ProductEnsemble::validate() const {
  if (terms.empty()) throw std::invalid_argument("ensemble: no terms");
  double total = 0;
  for (const ProductTerm& t : terms) {
    if (!(t.p > 0)) throw std::invalid_argument("ensemble: weights must be > 0");
    if (t.psi.size() != terms.front().psi.size() || t.phi.size() != terms.front().phi.size())
      throw DimensionError("ensemble: local dimensions differ between terms");
    if (std::abs(t.psi.norm() - 1) > 1e-12 || std::abs(t.phi.norm() - 1) > 1e-12)
      throw std::invalid_argument("ensemble: vectors must be unit norm");
    total += t.p;
  }
  if (std::abs(total - 1) > 1e-12) throw std::invalid_argument("ensemble: weights must sum to 1");
}

int ProductEnsemble::dim_a() const { return terms.empty() ? 0 : static_cast<int>(terms.front().psi.size()); }
int ProductEnsemble::dim_b() const { return terms.empty() ? 0 : static_cast<int>(terms.front().phi.size()); }

DensityMatrix from_ensemble(const ProductEnsemble& e) {
  e.validate();
  const Index n = static_cast<Index>(e.dim_a()) * e.dim_b();
  CMatrix rho = CMatrix::Zero(n, n);
  for (const ProductTerm& t : e.terms) rho += t.p * kron(projector(t.psi), projector(t.phi));
  return DensityMatrix(hermitian_part(rho), e.dim_a(), e.dim_b());
}

CMatrix separable_extension(const ProductEnsemble& e, int k) {
  e.validate();
  if (k < 1) throw std::invalid_argument("separable_extension: k must be >= 1");
  CMatrix out;
  for (const ProductTerm& t : e.terms) {
    CVector v = t.psi;
    for (int c = 1; c < k; ++c) v = kron(CMatrix(v), CMatrix(t.psi));
    v = kron(CMatrix(v), CMatrix(t.phi));
    const CMatrix term = t.p * projector(v);
    out = out.size() ? CMatrix(out + term) : term;
  }
  return out;
}

ProductEnsemble random_ensemble(int d_a, int d_b, int terms, std::uint64_t seed) {
  if (terms < 1) throw std::invalid_argument("random_ensemble: terms must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.1, 1.0);
  auto vec = [&](int d) {
    CVector v(d);
    for (int i = 0; i < d; ++i) v(i) = Complex(g(rng), g(rng));
    return CVector(v / v.norm());
  };
  ProductEnsemble e;
  double total = 0;
  for (int i = 0; i < terms; ++i) {
    ProductTerm t;
    t.p = u(rng);
    t.psi = vec(d_a);
    t.phi = vec(d_b);
    total += t.p;
    e.terms.push_back(std::move(t));
  }
  for (ProductTerm& t : e.terms) t.p /= total;
  return e;
}

DensityMatrix random_state(int d_a, int d_b, int rank, std::uint64_t seed) {
  const Index n = static_cast<Index>(d_a) * d_b;
  if (rank < 1 || rank > n) throw std::invalid_argument("random_state: rank must lie in [1, d_A d_B]");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CMatrix gin(n, rank);
  for (Index c = 0; c < rank; ++c)
    for (Index r = 0; r < n; ++r) gin(r, c) = Complex(g(rng), g(rng));
  CMatrix rho = gin * gin.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(hermitian_part(rho), d_a, d_b);
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"choi", "3x3 Choi-map family rho_alpha, 0 <= alpha <= 5", true, 3.5, true},
      {"choi-witness", "3x3 witness with Tr[W rho_alpha] = (3 - alpha)/7", false, 0, false},
      {"gisin", "4x4 PPT-entangled family rho_alpha, alpha >= 0", true, 3.0, true},
      {"gisin-witness", "4x4 witness with Tr[W rho_alpha] = -2(sqrt2 - 1)/(2 + alpha)", false, 0, false},
      {"bell", "maximally entangled 2x2 state", false, 0, true},
      {"maxmixed", "maximally mixed d x d state, param = d", true, 3, true},
      {"swap", "swap operator on d x d, param = d", true, 3, false},
      {"transpose", "transpose map operator (the swap) on d x d, param = d", true, 3, false},
  };
  return entries;
}

CMatrix catalog_matrix(const std::string& name, double param, std::vector<int>& dims) {
  auto local_dim = [&]() {
    const int d = static_cast<int>(std::lround(param));
    if (d < 2 || d > 16 || std::abs(param - d) > 1e-12)
      throw std::invalid_argument(name + ": param must be an integer dimension in [2, 16]");
    return d;
  };
  if (name == "choi") {
    dims = {3, 3};
    return choi_state(param).matrix();
  }
  if (name == "choi-witness") {
    dims = {3, 3};
    return choi_witness();
  }
  if (name == "gisin") {
    dims = {4, 4};
    return gisin_state(param).matrix();
  }
  if (name == "gisin-witness") {
    dims = {4, 4};
    return gisin_witness();
  }
  if (name == "bell") {
    dims = {2, 2};
    return maximally_entangled(2).matrix();
  }
  if (name == "maxmixed") {
    const int d = local_dim();
    dims = {d, d};
    return maximally_mixed(d, d).matrix();
  }
  if (name == "swap" || name == "transpose") {
    const int d = local_dim();
    dims = {d, d};
    return swap_operator(TensorSpace({d, d}), 0, 1);
  }
  throw std::invalid_argument("unknown catalog entry '" + name + "'");
}

}  // namespace sepsdp
