#include "sepsdp/posmap.hpp"
#include "sepsdp/states.hpp"
#include "sepsdp/witness.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>

namespace sepsdp {

LinearMap map_from_operator(const CMatrix& l, int in_dim, int out_dim) {
  TensorSpace({in_dim, out_dim}).require_square(l.rows(), l.cols());
  require_hermitian(l, "map operator");
  return {in_dim, out_dim, l};
}

const CMatrix& operator_from_map(const LinearMap& m) { return m.choi; }

CMatrix operator_from_action(const std::function<CMatrix(const CMatrix&)>& f, int in_dim, int out_dim) {
  const Index n = static_cast<Index>(in_dim) * out_dim;
  CMatrix l(n, n);
  for (int i = 0; i < in_dim; ++i)
    for (int j = 0; j < in_dim; ++j) {
      CMatrix e = CMatrix::Zero(in_dim, in_dim);
      e(i, j) = 1;
      const CMatrix out = f(e);
      if (out.rows() != out_dim || out.cols() != out_dim) throw DimensionError("operator_from_action: output size");
      l.block(static_cast<Index>(i) * out_dim, static_cast<Index>(j) * out_dim, out_dim, out_dim) = out;
    }
  return l;
}

CMatrix apply_map(const LinearMap& m, const CMatrix& rho) {
  if (rho.rows() != m.in_dim || rho.cols() != m.in_dim)
    throw DimensionError("apply_map: input is " + std::to_string(rho.rows()) + "x" + std::to_string(rho.cols()) +
                         ", map expects " + std::to_string(m.in_dim), 0);
  // sum_ij rho_ij <i .|L|j .>
  CMatrix out = CMatrix::Zero(m.out_dim, m.out_dim);
  for (int i = 0; i < m.in_dim; ++i)
    for (int j = 0; j < m.in_dim; ++j)
      if (rho(i, j) != Complex(0))
        out += rho(i, j) * m.choi.block(static_cast<Index>(i) * m.out_dim, static_cast<Index>(j) * m.out_dim,
                                        m.out_dim, m.out_dim);
  return out;
}

LinearMap map_from_witness(const CMatrix& w, int d_a, int d_b, MapDirection direction) {
  const TensorSpace space({d_a, d_b});
  space.require_square(w.rows(), w.cols());
  if (direction == MapDirection::AtoB) return map_from_operator(w, d_a, d_b);
  const int perm[2] = {1, 0};
  return map_from_operator(permute_factors(w, space, perm), d_b, d_a);
}

LinearMap identity_map(int d) {
  const Index n = static_cast<Index>(d) * d;
  CMatrix l = CMatrix::Zero(n, n);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) l(i * d + i, j * d + j) = 1;
  return {d, d, l};
}

LinearMap transpose_map(int d) { return {d, d, swap_operator(TensorSpace({d, d}), 0, 1)}; }

LinearMap normalize_unital(const LinearMap& m) {
  const CMatrix unit = hermitian_part(apply_map(m, CMatrix::Identity(m.in_dim, m.in_dim)));
  Eigen::SelfAdjointEigenSolver<CMatrix> es(unit);
  if (es.eigenvalues()(0) <= 0) throw std::invalid_argument("normalize_unital: Lambda(1) is not positive definite");
  const CMatrix root = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() *
                       es.eigenvectors().adjoint();
  const CMatrix s = kron(CMatrix::Identity(m.in_dim, m.in_dim), root);
  return {m.in_dim, m.out_dim, hermitian_part(s * m.choi * s)};
}

LinearMap mix_maps(const LinearMap& m0, const LinearMap& m1, double alpha) {
  if (m0.in_dim != m1.in_dim || m0.out_dim != m1.out_dim) throw DimensionError("mix_maps: map shapes differ");
  return {m0.in_dim, m0.out_dim, (1 - alpha) * m0.choi + alpha * m1.choi};
}

CMatrix compose_with_symmetric_embedding(const LinearMap& m, int k, Index cap) {
  if (k < 1) throw std::invalid_argument("compose_with_symmetric_embedding: k must be >= 1");
  const int d = m.out_dim;
  const SymmetricSubspace sym(d, k);
  const Index ds = sym.dim();
  const Index n = m.in_dim * ds;
  if (n > cap)
    throw std::invalid_argument("compose_with_symmetric_embedding: size " + std::to_string(n) + " exceeds cap " +
                                std::to_string(cap));
  Index suffix = 1;
  for (int c = 1; c < k; ++c) suffix *= d;
  // (1 (x) V)^dagger (L (x) 1^{k-1}) (1 (x) V): copies 2..k must agree between bra and ket.
  CMatrix out = CMatrix::Zero(n, n);
  for (Index tail = 0; tail < suffix; ++tail)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        const Index na = sym.column_of(a * suffix + tail), nb = sym.column_of(b * suffix + tail);
        const double w = sym.column_weight(na) * sym.column_weight(nb);
        for (int i = 0; i < m.in_dim; ++i)
          for (int j = 0; j < m.in_dim; ++j)
            out(i * ds + na, j * ds + nb) += w * m.choi(i * d + a, j * d + b);
      }
  return out;
}

const char* to_string(PositivityVerdict v) {
  switch (v) {
    case PositivityVerdict::CompletelyPositive: return "CompletelyPositive";
    case PositivityVerdict::StrictlyPositiveCertified: return "StrictlyPositiveCertified";
    case PositivityVerdict::NotPositive: return "NotPositive";
    case PositivityVerdict::Undetermined: return "Undetermined";
  }
  return "?";
}

PositivityReport check_strict_positivity(const LinearMap& m, int k_max, std::mt19937_64& rng, int samples,
                                         int polish_runs) {
  if (k_max < 1) throw std::invalid_argument("check_strict_positivity: k_max must be >= 1");
  PositivityReport r;
  r.k_max = k_max;
  r.choi_min_eigenvalue = min_eigenvalue(m.choi);
  // Certification runs for every map so CP maps also report their level.
  for (int k = 1; k <= k_max; ++k) {
    const double lmin = min_eigenvalue(compose_with_symmetric_embedding(m, k));
    r.per_k_min_eigenvalues.emplace_back(k, lmin);
    if (lmin >= -1e-10) {
      r.certified_k = k;
      break;
    }
  }
  if (r.choi_min_eigenvalue >= -1e-10) {
    r.verdict = PositivityVerdict::CompletelyPositive;
    return r;
  }
  // lambda_min(Lambda(|x><x|)) = min_y <u y|L|u y> with u = conj(x).
  const ProductMinimum pm = evaluate_on_product_states(m.choi, m.in_dim, m.out_dim, rng, samples, true, polish_runs);
  r.violation_value = pm.value;
  if (pm.value <= -1e-9) {
    const CVector x = pm.x.conjugate();
    r.violation_input = x * x.adjoint();
    r.verdict = PositivityVerdict::NotPositive;
    return r;
  }
  r.verdict = r.certified_k > 0 ? PositivityVerdict::StrictlyPositiveCertified : PositivityVerdict::Undetermined;
  return r;
}

double alpha_threshold(const LinearMap& m0, const LinearMap& m1, int k) {
  if (m0.in_dim != m1.in_dim || m0.out_dim != m1.out_dim) throw DimensionError("alpha_threshold: map shapes differ");
  const CMatrix c0 = compose_with_symmetric_embedding(m0, k);
  const CMatrix c1 = compose_with_symmetric_embedding(m1, k);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(c0));
  if (es.eigenvalues()(0) <= 1e-12 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff()))
    throw std::invalid_argument("alpha_threshold: composed base operator is not positive definite; rescale Lambda0");
  const CMatrix inv_root = es.eigenvectors() *
                           es.eigenvalues().cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() *
                           es.eigenvectors().adjoint();
  const double lmax = eigenvalues(hermitian_part(inv_root * (c0 - c1) * inv_root)).maxCoeff();
  return lmax > 0 ? std::min(1.0, 1.0 / lmax) : 1.0;
}

LinearMap table1_base_map() { return {3, 3, CMatrix::Identity(9, 9) / 3.0}; }

LinearMap table1_witness_map() { return normalize_unital(map_from_operator(choi_witness(), 3, 3)); }

std::vector<std::pair<int, double>> table1(int k_max) {
  const LinearMap m0 = table1_base_map(), m1 = table1_witness_map();
  std::vector<std::pair<int, double>> rows;
  for (int k = 1; k <= k_max; ++k) rows.emplace_back(k, alpha_threshold(m0, m1, k));
  return rows;
}

}  // namespace sepsdp
