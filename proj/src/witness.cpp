#include "sepsdp/gamma.hpp"
#include "sepsdp/witness.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sepsdp {

Witness extract_witness(const BlockMatrix& z, std::shared_ptr<const ExtensionLayout> layout, double psd_tol) {
  if (!layout) throw std::invalid_argument("extract_witness: no layout");
  const auto& blocks = layout->blocks();
  if (z.size() != blocks.size())
    throw DimensionError("extract_witness: expected " + std::to_string(blocks.size()) + " dual blocks, got " +
                         std::to_string(z.size()));
  CMatrix v = CMatrix::Zero(layout->extension_dim(), layout->extension_dim());
  for (size_t b = 0; b < z.size(); ++b) {
    if (z[b].rows() != blocks[b].size || z[b].cols() != blocks[b].size)
      throw DimensionError("extract_witness: block " + blocks[b].label + " has the wrong size");
    const CMatrix zb = hermitian_part(z[b]);
    const double lmin = min_eigenvalue(zb);
    if (lmin < -psd_tol * std::max(1.0, zb.norm()))
      throw std::invalid_argument("extract_witness: block " + blocks[b].label + " is not PSD (lambda_min " +
                                  std::to_string(lmin) + ")");
    v += layout->block_adjoint(zb, static_cast<int>(b));
  }
  const CMatrix raw = hermitian_part(layout->embed_adjoint(v));
  const double scale = eigenvalues(raw).cwiseAbs().maxCoeff();
  if (!(scale > 0)) throw std::invalid_argument("extract_witness: dual blocks give the zero operator");
  Witness w;
  w.op = raw / scale;
  w.scale = scale;
  w.d_a = layout->dim_a();
  w.d_b = layout->dim_b();
  w.provenance = WitnessProvenance{z, std::move(layout), 0.0};
  return w;
}

Witness extract_witness(const BlockMatrix& z, int d_a, int d_b, const ExtensionSpec& spec, double psd_tol) {
  return extract_witness(z, std::make_shared<const ExtensionLayout>(d_a, d_b, spec), psd_tol);
}

namespace {

CVector haar_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  return v / v.norm();
}

double product_value(const CMatrix& w, const CVector& x, const CVector& y) {
  const CVector xy = kron(CMatrix(x), CMatrix(y));
  return (xy.adjoint() * w * xy)(0, 0).real();
}

// <x| W |x> on the B factor, or <y| W |y> on the A factor.
CMatrix contract_a(const CMatrix& w, const CVector& x, int d_b) {
  const int d_a = static_cast<int>(x.size());
  CMatrix m = CMatrix::Zero(d_b, d_b);
  for (int a = 0; a < d_a; ++a)
    for (int a2 = 0; a2 < d_a; ++a2) m += std::conj(x(a)) * x(a2) * w.block(a * d_b, a2 * d_b, d_b, d_b);
  return hermitian_part(m);
}

CMatrix contract_b(const CMatrix& w, const CVector& y, int d_a) {
  const int d_b = static_cast<int>(y.size());
  CMatrix m(d_a, d_a);
  for (int a = 0; a < d_a; ++a)
    for (int a2 = 0; a2 < d_a; ++a2)
      m(a, a2) = (y.adjoint() * w.block(a * d_b, a2 * d_b, d_b, d_b) * y)(0, 0);
  return hermitian_part(m);
}

CVector lowest_vector(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
  return es.eigenvectors().col(0);
}

}  // namespace

ProductMinimum evaluate_on_product_states(const CMatrix& w, int d_a, int d_b, std::mt19937_64& rng,
                                          int n_samples, bool optimize, int polish_runs) {
  TensorSpace({d_a, d_b}).require_square(w.rows(), w.cols());
  require_hermitian(w, "product-state evaluation");
  ProductMinimum best;
  std::vector<std::pair<double, std::pair<CVector, CVector>>> samples;
  samples.reserve(static_cast<size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    CVector x = haar_vector(d_a, rng), y = haar_vector(d_b, rng);
    const double v = product_value(w, x, y);
    samples.push_back({v, {std::move(x), std::move(y)}});
  }
  best.samples = n_samples;
  for (const auto& s : samples)
    if (s.first < best.value) {
      best.value = s.first;
      best.x = s.second.first;
      best.y = s.second.second;
    }
  if (!optimize || samples.empty()) return best;
  const size_t runs = std::min(samples.size(), static_cast<size_t>(std::max(0, polish_runs)));
  std::partial_sort(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(runs), samples.end(),
                    [](const auto& a, const auto& b) { return a.first < b.first; });
  for (size_t r = 0; r < runs; ++r) {
    CVector x = samples[r].second.first, y = samples[r].second.second;
    double value = samples[r].first;
    for (int it = 0; it < 200; ++it) {
      y = lowest_vector(contract_a(w, x, d_b));
      x = lowest_vector(contract_b(w, y, d_a));
      const double next = product_value(w, x, y);
      const bool settled = value - next < 1e-15;
      value = std::min(value, next);
      if (settled) break;
    }
    if (value < best.value) {
      best.value = value;
      best.x = x;
      best.y = y;
    }
  }
  best.polish_runs = static_cast<int>(runs);
  return best;
}

std::pair<double, double> gram_sides(const Witness& w, const CVector& x, const CVector& y) {
  if (!w.provenance) throw std::invalid_argument("Gram identity: witness carries no dual blocks");
  const WitnessProvenance& pv = *w.provenance;
  const int k = pv.layout->copies();
  const CVector xy = kron(CMatrix(x), CMatrix(y));
  const double lhs = std::pow(x.squaredNorm(), k - 1) * (xy.adjoint() * w.raw() * xy)(0, 0).real();
  double rhs = 0;
  for (size_t b = 0; b < pv.blocks.size(); ++b) {
    const CVector wb = pv.layout->block_vector(x, y, static_cast<int>(b));
    rhs += (wb.adjoint() * pv.blocks[b] * wb)(0, 0).real();
  }
  return {lhs, rhs};
}

GramResidual verify_ksos_identity(const Witness& w, std::mt19937_64& rng, int points) {
  if (!w.provenance) throw std::invalid_argument("Gram identity: witness carries no dual blocks");
  const WitnessProvenance& pv = *w.provenance;
  const int k = pv.layout->copies();
  double znorm = 0;
  for (const CMatrix& z : pv.blocks) znorm += z.norm();
  std::normal_distribution<double> g;
  GramResidual r;
  for (int i = 0; i < points; ++i) {
    // Unnormalized on purpose: both sides are homogeneous.
    const CVector x = haar_vector(w.d_a, rng) * std::exp(g(rng));
    const CVector y = haar_vector(w.d_b, rng) * std::exp(g(rng));
    const auto [lhs, rhs] = gram_sides(w, x, y);
    const double scale = std::pow(x.squaredNorm(), k) * y.squaredNorm() * znorm;
    r.max_relative = std::max(r.max_relative, std::abs(lhs - rhs) / scale);
  }
  r.points = points;
  r.passed = r.max_relative < 1e-8;
  return r;
}

namespace {

RVector filter_diagonal(int d_a, int d_b, double gamma) {
  RVector diag = RVector::Constant(static_cast<Index>(d_a) * d_b, gamma);
  diag.head(d_b).setOnes();
  return diag;
}

}  // namespace

double scale_normalization(const DensityMatrix& rho, double gamma) {
  if (!(gamma > 0)) throw std::invalid_argument("scale_state: gamma must be > 0");
  const RVector a = filter_diagonal(rho.dim_a(), rho.dim_b(), gamma);
  return (a.cwiseAbs2().asDiagonal() * rho.matrix().diagonal().real()).sum();
}

DensityMatrix scale_state(const DensityMatrix& rho, double gamma) {
  const double n = scale_normalization(rho, gamma);
  const RVector a = filter_diagonal(rho.dim_a(), rho.dim_b(), gamma);
  CMatrix m = a.cast<Complex>().asDiagonal() * rho.matrix() * a.cast<Complex>().asDiagonal();
  m /= n;
  return DensityMatrix(hermitian_part(m), rho.dim_a(), rho.dim_b());
}

CMatrix scale_witness(const CMatrix& z, int d_a, int d_b, double gamma) {
  if (!(gamma > 0)) throw std::invalid_argument("scale_witness: gamma must be > 0");
  TensorSpace({d_a, d_b}).require_square(z.rows(), z.cols());
  const RVector inv = filter_diagonal(d_a, d_b, gamma).cwiseInverse();
  return inv.cast<Complex>().asDiagonal() * z * inv.cast<Complex>().asDiagonal();
}

GammaBracket find_gamma_star(const DensityMatrix& rho, const ExtensionSpec& spec, double tol,
                             const HierarchyOptions& options, double gamma_floor) {
  if (!(tol > 0)) throw std::invalid_argument("find_gamma_star: tol must be > 0");
  HierarchyOptions opt = options;
  opt.analyze_witness = false;
  GammaBracket br;
  auto verdict = [&](double g) {
    const TestStatus s = run_test(scale_state(rho, g), spec, opt).status;
    br.trail.emplace_back(g, s);
    return s;
  };
  if (verdict(1.0) != TestStatus::Entangled)
    throw NoSignChange("find_gamma_star: the state is not detected at gamma = 1");
  double lo = 0.5;
  for (;;) {
    const TestStatus s = verdict(lo);
    if (s == TestStatus::SeparableConsistent) break;
    if (s == TestStatus::Entangled) br.hi = lo;
    lo *= 0.5;
    if (lo < gamma_floor)
      throw NoSignChange("find_gamma_star: level " + std::to_string(spec.k) + " detects every gamma down to " +
                         std::to_string(gamma_floor));
  }
  br.lo = lo;
  while (br.hi - br.lo > tol) {
    const double mid = 0.5 * (br.lo + br.hi);
    const TestStatus s = verdict(mid);
    if (s == TestStatus::Entangled) {
      br.hi = mid;
      continue;
    }
    if (s == TestStatus::SeparableConsistent) {
      br.lo = mid;
      continue;
    }
    // Marginal: classify the quarter points instead; never guess the midpoint.
    const double q = 0.25 * (br.hi - br.lo);
    const TestStatus below = verdict(mid - q);
    const TestStatus above = verdict(mid + q);
    bool moved = false;
    if (below == TestStatus::SeparableConsistent) br.lo = mid - q, moved = true;
    if (below == TestStatus::Entangled) br.hi = mid - q, moved = true;
    if (above == TestStatus::Entangled && mid + q < br.hi) br.hi = mid + q, moved = true;
    if (!moved) {
      br.marginal_stop = true;
      break;
    }
  }
  return br;
}

}  // namespace sepsdp
