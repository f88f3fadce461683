#include "sepsdp/qlinalg.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace sepsdp {

TensorSpace::TensorSpace(std::vector<int> dims) : dims_(std::move(dims)) {
  strides_.assign(dims_.size(), 1);
  for (size_t f = 0; f < dims_.size(); ++f)
    if (dims_[f] < 2)
      throw DimensionError("TensorSpace: factor " + std::to_string(f) + " has dimension " +
                               std::to_string(dims_[f]) + " < 2",
                           static_cast<int>(f));
  for (size_t f = dims_.size(); f-- > 0;) {
    strides_[f] = total_;
    total_ *= dims_[f];
  }
}

int TensorSpace::dim(int factor) const {
  require_factor(factor);
  return dims_[static_cast<size_t>(factor)];
}

void TensorSpace::require_factor(int factor) const {
  if (factor < 0 || factor >= factors())
    throw DimensionError("factor index " + std::to_string(factor) + " out of range for " +
                             std::to_string(factors()) + "-factor space",
                         factor);
}

void TensorSpace::require_square(Index rows, Index cols) const {
  if (rows != cols)
    throw DimensionError("matrix is " + std::to_string(rows) + "x" + std::to_string(cols) +
                         ", expected square");
  if (rows != total_) {
    std::ostringstream os;
    os << "matrix dimension " << rows << " does not match tensor space [";
    for (size_t f = 0; f < dims_.size(); ++f) os << (f ? "," : "") << dims_[f];
    os << "] of total " << total_;
    // Name the first factor whose dimension does not divide the matrix size.
    int offending = -1;
    Index rest = rows;
    for (size_t f = 0; f < dims_.size(); ++f) {
      if (rest % dims_[f] != 0) {
        offending = static_cast<int>(f);
        break;
      }
      rest /= dims_[f];
    }
    if (offending < 0) offending = factors() - 1;
    os << " (offending factor " << offending << ")";
    throw DimensionError(os.str(), offending);
  }
}

TensorSpace TensorSpace::without(std::span<const int> traced) const {
  std::vector<int> rest;
  for (int f = 0; f < factors(); ++f)
    if (std::find(traced.begin(), traced.end(), f) == traced.end()) rest.push_back(dims_[static_cast<size_t>(f)]);
  return TensorSpace(rest);
}

void require_hermitian(const CMatrix& m, const std::string& what, double rel_tol) {
  if (m.rows() != m.cols())
    throw DimensionError(what + ": matrix is not square");
  if (!is_hermitian(m, rel_tol)) {
    const double scale = m.cwiseAbs().maxCoeff();
    std::ostringstream os;
    os << what << ": not Hermitian (max|M - M^dagger| = " << (m - m.adjoint()).cwiseAbs().maxCoeff()
       << ", max|M| = " << scale << ")";
    throw std::invalid_argument(os.str());
  }
}

std::vector<Index> permutation_indices(const TensorSpace& space, std::span<const int> perm) {
  if (static_cast<int>(perm.size()) != space.factors())
    throw DimensionError("permutation length does not match factor count");
  std::vector<bool> seen(perm.size(), false);
  for (size_t f = 0; f < perm.size(); ++f) {
    const int t = perm[f];
    space.require_factor(t);
    if (seen[static_cast<size_t>(t)]) throw DimensionError("not a permutation", t);
    seen[static_cast<size_t>(t)] = true;
    if (space.dim(static_cast<int>(f)) != space.dim(t))
      throw DimensionError("permutation moves factor " + std::to_string(f) +
                               " onto a slot of different dimension",
                           static_cast<int>(f));
  }
  const Index n = space.total();
  std::vector<Index> image(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) {
    Index j = 0;
    for (int f = 0; f < space.factors(); ++f) j += space.digit(i, f) * space.stride(perm[static_cast<size_t>(f)]);
    image[static_cast<size_t>(i)] = j;
  }
  return image;
}

CMatrix permutation_operator(const TensorSpace& space, std::span<const int> perm) {
  const auto image = permutation_indices(space, perm);
  CMatrix p = CMatrix::Zero(space.total(), space.total());
  for (Index i = 0; i < space.total(); ++i) p(image[static_cast<size_t>(i)], i) = 1.0;
  return p;
}

CMatrix swap_operator(const TensorSpace& space, int i, int j) {
  space.require_factor(i);
  space.require_factor(j);
  if (space.dim(i) != space.dim(j))
    throw DimensionError("swap_operator: factors " + std::to_string(i) + " and " + std::to_string(j) +
                             " have different dimensions",
                         j);
  std::vector<int> perm(static_cast<size_t>(space.factors()));
  std::iota(perm.begin(), perm.end(), 0);
  std::swap(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)]);
  return permutation_operator(space, perm);
}

CMatrix permute_factors(const CMatrix& m, const TensorSpace& space, std::span<const int> perm) {
  space.require_square(m.rows(), m.cols());
  if (static_cast<int>(perm.size()) != space.factors())
    throw DimensionError("permutation length does not match factor count");
  std::vector<int> out_dims(perm.size());
  for (size_t f = 0; f < perm.size(); ++f) out_dims[static_cast<size_t>(perm[f])] = space.dim(static_cast<int>(f));
  const TensorSpace out_space(out_dims);
  const Index n = space.total();
  std::vector<Index> image(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) {
    Index j = 0;
    for (int f = 0; f < space.factors(); ++f) j += space.digit(i, f) * out_space.stride(perm[static_cast<size_t>(f)]);
    image[static_cast<size_t>(i)] = j;
  }
  CMatrix out(n, n);
  for (Index c = 0; c < n; ++c)
    for (Index r = 0; r < n; ++r) out(image[static_cast<size_t>(r)], image[static_cast<size_t>(c)]) = m(r, c);
  return out;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

Index symmetric_dimension(int d, int k) {
  return static_cast<Index>(binomial(d + k - 1, k));
}

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Sorted tuples i_1 <= ... <= i_k in lexicographic order.
void enumerate_multisets(int d, int k, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  const int lo = cur.empty() ? 0 : cur.back();
  for (int a = lo; a < d; ++a) {
    cur.push_back(a);
    enumerate_multisets(d, k, cur, out);
    cur.pop_back();
  }
}

}  // namespace

SymmetricSubspace::SymmetricSubspace(int d, int k) : d_(d), k_(k) {
  if (d < 2) throw DimensionError("SymmetricSubspace: d < 2");
  if (k < 1) throw DimensionError("SymmetricSubspace: k < 1");
  ambient_ = 1;
  for (int i = 0; i < k; ++i) ambient_ *= d;

  std::vector<std::vector<int>> sorted;
  std::vector<int> cur;
  enumerate_multisets(d, k, cur, sorted);
  std::map<std::vector<int>, Index> lookup;
  for (const auto& s : sorted) {
    std::vector<int> occ(static_cast<size_t>(d), 0);
    for (int a : s) ++occ[static_cast<size_t>(a)];
    lookup.emplace(s, static_cast<Index>(occupations_.size()));
    double orbit = factorial(k);
    for (int n : occ) orbit /= factorial(n);
    weight_.push_back(1.0 / std::sqrt(orbit));
    occupations_.push_back(std::move(occ));
  }
  members_.resize(occupations_.size());
  column_.resize(static_cast<size_t>(ambient_));
  std::vector<int> tuple(static_cast<size_t>(k));
  for (Index t = 0; t < ambient_; ++t) {
    Index rest = t;
    for (int s = k - 1; s >= 0; --s) {
      tuple[static_cast<size_t>(s)] = static_cast<int>(rest % d);
      rest /= d;
    }
    std::vector<int> key = tuple;
    std::sort(key.begin(), key.end());
    const Index col = lookup.at(key);
    column_[static_cast<size_t>(t)] = col;
    members_[static_cast<size_t>(col)].push_back(t);
  }
}

Index SymmetricSubspace::column_of_occupation(const std::vector<int>& occ) const {
  if (static_cast<int>(occ.size()) != d_) throw DimensionError("occupation length != d");
  for (Index c = 0; c < dim(); ++c)
    if (occupations_[static_cast<size_t>(c)] == occ) return c;
  throw DimensionError("occupation does not sum to k");
}

SparseCMatrix SymmetricSubspace::isometry() const {
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(static_cast<size_t>(ambient_));
  for (Index t = 0; t < ambient_; ++t) trip.emplace_back(t, column_of(t), weight_of(t));
  SparseCMatrix v(ambient_, dim());
  v.setFromTriplets(trip.begin(), trip.end());
  return v;
}

SparseCMatrix symmetric_projector(int d, int k) {
  const SymmetricSubspace sym(d, k);
  std::vector<Eigen::Triplet<Complex>> trip;
  for (Index c = 0; c < sym.dim(); ++c) {
    const auto& mem = sym.members(c);
    const double w = 1.0 / static_cast<double>(mem.size());
    for (Index r : mem)
      for (Index s : mem) trip.emplace_back(r, s, w);
  }
  SparseCMatrix p(sym.ambient(), sym.ambient());
  p.setFromTriplets(trip.begin(), trip.end());
  return p;
}

RVector OperatorBasis::expand(const CMatrix& m) const {
  if (elements.empty() || m.rows() != elements.front().rows() || m.cols() != elements.front().cols())
    throw DimensionError("OperatorBasis::expand: shape mismatch");
  RVector c(static_cast<Index>(elements.size()));
  for (size_t i = 0; i < elements.size(); ++i) {
    const CMatrix& s = elements[i];
    const double norm2 = s.cwiseAbs2().sum();
    c(static_cast<Index>(i)) = (s.adjoint().cwiseProduct(m.transpose())).sum().real() / norm2;
  }
  return c;
}

CMatrix OperatorBasis::resum(const RVector& coeffs) const {
  if (coeffs.size() != static_cast<Index>(elements.size()))
    throw DimensionError("OperatorBasis::resum: coefficient count mismatch");
  CMatrix m = CMatrix::Zero(elements.front().rows(), elements.front().cols());
  for (size_t i = 0; i < elements.size(); ++i) m += coeffs(static_cast<Index>(i)) * elements[i];
  return m;
}

OperatorBasis hermitian_basis(int d) {
  if (d < 2) throw DimensionError("hermitian_basis: d < 2");
  OperatorBasis b;
  b.dim = d;
  b.elements.push_back(CMatrix::Identity(d, d) / static_cast<double>(d));
  const double r2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      CMatrix s = CMatrix::Zero(d, d);
      s(j, k) = r2;
      s(k, j) = r2;
      b.elements.push_back(s);
    }
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      CMatrix a = CMatrix::Zero(d, d);
      a(j, k) = Complex(0.0, -r2);
      a(k, j) = Complex(0.0, r2);
      b.elements.push_back(a);
    }
  for (int l = 1; l < d; ++l) {
    CMatrix h = CMatrix::Zero(d, d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int j = 0; j < l; ++j) h(j, j) = norm;
    h(l, l) = -static_cast<double>(l) * norm;
    b.elements.push_back(h);
  }
  return b;
}

OperatorBasis hermitian_unit_basis(int n) {
  OperatorBasis b;
  b.dim = n;
  const double r2 = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < n; ++a) {
    CMatrix e = CMatrix::Zero(n, n);
    e(a, a) = 1.0;
    b.elements.push_back(e);
  }
  for (int a = 0; a < n; ++a)
    for (int c = a + 1; c < n; ++c) {
      CMatrix s = CMatrix::Zero(n, n);
      s(a, c) = r2;
      s(c, a) = r2;
      b.elements.push_back(s);
      CMatrix t = CMatrix::Zero(n, n);
      t(a, c) = Complex(0.0, r2);
      t(c, a) = Complex(0.0, -r2);
      b.elements.push_back(t);
    }
  return b;
}

OperatorBasis symmetric_operator_basis(int d, int k) {
  if (k < 2) throw DimensionError("symmetric_operator_basis: k < 2");
  const SymmetricSubspace sym(d, k);
  const CMatrix v = CMatrix(sym.isometry());
  const OperatorBasis units = hermitian_unit_basis(static_cast<int>(sym.dim()));
  OperatorBasis b;
  b.dim = d;
  b.elements.reserve(units.elements.size());
  for (const auto& e : units.elements) b.elements.push_back(v * e * v.adjoint());
  return b;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

SparseCMatrix kron(const SparseCMatrix& a, const SparseCMatrix& b) {
  SparseCMatrix out = Eigen::kroneckerProduct(a, b);
  return out;
}

RVector eigenvalues(const CMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double min_eigenvalue(const CMatrix& hermitian) {
  if (hermitian.size() == 0) return 0.0;
  return eigenvalues(hermitian)(0);
}

Index numerical_rank(const CMatrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const RVector& s = svd.singularValues();
  if (s(0) == 0.0) return 0;
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++r;
  return r;
}

CMatrix hermitian_part(const CMatrix& m) {
  return 0.5 * (m + m.adjoint());
}

}  // namespace sepsdp
