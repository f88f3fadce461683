#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sepsdp {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using SparseCMatrix = Eigen::SparseMatrix<Complex>;
using Index = Eigen::Index;

// Raised on shape problems; factor() is the offending tensor slot, or -1.
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what, int factor = -1)
      : std::invalid_argument(what), factor_(factor) {}
  int factor() const noexcept { return factor_; }

 private:
  int factor_;
};

class TensorSpace {
 public:
  TensorSpace() = default;
  explicit TensorSpace(std::vector<int> dims);
  TensorSpace(std::initializer_list<int> dims) : TensorSpace(std::vector<int>(dims)) {}

  int factors() const { return static_cast<int>(dims_.size()); }
  int dim(int factor) const;
  const std::vector<int>& dims() const { return dims_; }
  Index total() const { return total_; }
  // stride(f): distance in the flat index between consecutive values of digit f.
  Index stride(int factor) const { return strides_[static_cast<size_t>(factor)]; }
  int digit(Index flat, int factor) const {
    return static_cast<int>((flat / strides_[static_cast<size_t>(factor)]) % dims_[static_cast<size_t>(factor)]);
  }

  TensorSpace without(std::span<const int> traced) const;
  void require_square(Index rows, Index cols) const;
  void require_factor(int factor) const;

  bool operator==(const TensorSpace& o) const { return dims_ == o.dims_; }

 private:
  std::vector<int> dims_;
  std::vector<Index> strides_;
  Index total_ = 1;
};

// max|M - M^dagger| <= rel_tol * max|M|.
template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double rel_tol = 1e-12) {
  if (m.rows() != m.cols()) return false;
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

void require_hermitian(const CMatrix& m, const std::string& what, double rel_tol = 1e-12);

template <typename Derived>
auto partial_transpose(const Eigen::MatrixBase<Derived>& m, const TensorSpace& space,
                       std::span<const int> which)
    -> Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> {
  space.require_square(m.rows(), m.cols());
  for (int f : which) space.require_factor(f);
  const Index n = space.total();
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(n, n);
  for (Index c = 0; c < n; ++c) {
    for (Index r = 0; r < n; ++r) {
      Index r2 = r, c2 = c;
      for (int f : which) {
        const Index s = space.stride(f);
        const Index dr = space.digit(r, f), dc = space.digit(c, f);
        r2 += (dc - dr) * s;
        c2 += (dr - dc) * s;
      }
      out(r2, c2) = m(r, c);
    }
  }
  return out;
}

template <typename Derived>
auto partial_transpose(const Eigen::MatrixBase<Derived>& m, const TensorSpace& space, int which) {
  const int w[1] = {which};
  return partial_transpose(m, space, std::span<const int>(w));
}

// Result lives on space.without(which); tracing every factor gives a 1x1 matrix.
template <typename Derived>
auto partial_trace(const Eigen::MatrixBase<Derived>& m, const TensorSpace& space,
                   std::span<const int> which)
    -> Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> {
  space.require_square(m.rows(), m.cols());
  std::vector<bool> traced(static_cast<size_t>(space.factors()), false);
  for (int f : which) {
    space.require_factor(f);
    if (traced[static_cast<size_t>(f)])
      throw DimensionError("partial_trace: factor listed twice", f);
    traced[static_cast<size_t>(f)] = true;
  }
  const Index n = space.total();
  std::vector<Index> kept(static_cast<size_t>(n)), gone(static_cast<size_t>(n));
  Index kept_total = 1;
  for (int f = 0; f < space.factors(); ++f)
    if (!traced[static_cast<size_t>(f)]) kept_total *= space.dim(f);
  for (Index i = 0; i < n; ++i) {
    Index k = 0, g = 0;
    for (int f = 0; f < space.factors(); ++f) {
      const int dig = space.digit(i, f);
      if (traced[static_cast<size_t>(f)])
        g = g * space.dim(f) + dig;
      else
        k = k * space.dim(f) + dig;
    }
    kept[static_cast<size_t>(i)] = k;
    gone[static_cast<size_t>(i)] = g;
  }
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
      Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(kept_total, kept_total);
  for (Index c = 0; c < n; ++c)
    for (Index r = 0; r < n; ++r)
      if (gone[static_cast<size_t>(r)] == gone[static_cast<size_t>(c)])
        out(kept[static_cast<size_t>(r)], kept[static_cast<size_t>(c)]) += m(r, c);
  return out;
}

template <typename Derived>
auto partial_trace(const Eigen::MatrixBase<Derived>& m, const TensorSpace& space, int which) {
  const int w[1] = {which};
  return partial_trace(m, space, std::span<const int>(w));
}

// Operator sending |i_0 ... i_{n-1}> to the state whose slot perm[f] holds i_f.
CMatrix permutation_operator(const TensorSpace& space, std::span<const int> perm);
CMatrix swap_operator(const TensorSpace& space, int i, int j);

// Index form of the same permutation: image of each flat basis index.
std::vector<Index> permutation_indices(const TensorSpace& space, std::span<const int> perm);

// Reorders tensor factors of an operator: factor f of m becomes factor perm[f] of the result.
CMatrix permute_factors(const CMatrix& m, const TensorSpace& space, std::span<const int> perm);

std::uint64_t binomial(int n, int k);
// C(d + k - 1, k)
Index symmetric_dimension(int d, int k);

// Occupation-number coordinates of Sym^k(C^d). Column c holds the normalized
// symmetrization of every k-tuple whose multiset is occupation(c).
class SymmetricSubspace {
 public:
  SymmetricSubspace(int d, int k);

  int local_dim() const { return d_; }
  int copies() const { return k_; }
  Index dim() const { return static_cast<Index>(occupations_.size()); }
  Index ambient() const { return ambient_; }

  const std::vector<int>& occupation(Index col) const { return occupations_[static_cast<size_t>(col)]; }
  Index column_of(Index tuple) const { return column_[static_cast<size_t>(tuple)]; }
  // Entry of the isometry at (tuple, column_of(tuple)); 1/sqrt(orbit size).
  double weight_of(Index tuple) const { return weight_[static_cast<size_t>(column_of(tuple))]; }
  double column_weight(Index col) const { return weight_[static_cast<size_t>(col)]; }
  const std::vector<Index>& members(Index col) const { return members_[static_cast<size_t>(col)]; }
  Index column_of_occupation(const std::vector<int>& occ) const;

  // ambient x dim, one nonzero per row.
  SparseCMatrix isometry() const;

 private:
  int d_, k_;
  Index ambient_;
  std::vector<std::vector<int>> occupations_;
  std::vector<Index> column_;
  std::vector<double> weight_;
  std::vector<std::vector<Index>> members_;
};

// Orthogonal projector onto Sym^k(C^d): the average of all k! copy permutations.
SparseCMatrix symmetric_projector(int d, int k);

struct OperatorBasis {
  int dim = 0;
  std::vector<CMatrix> elements;

  // Coefficients c_i with M = sum_i c_i sigma_i; real for Hermitian M.
  RVector expand(const CMatrix& m) const;
  CMatrix resum(const RVector& coeffs) const;
};

// sigma_1 = I/d; the rest are traceless generalized Gell-Mann matrices with Tr sigma^2 = 1.
OperatorBasis hermitian_basis(int d);
// Orthonormal Hermitian matrix units on C^n: E_aa, (E_ab + E_ba)/sqrt2, i(E_ab - E_ba)/sqrt2.
OperatorBasis hermitian_unit_basis(int n);
// Images V E V^dagger of hermitian_unit_basis(d_S) under the symmetric isometry.
OperatorBasis symmetric_operator_basis(int d, int k);

CMatrix kron(const CMatrix& a, const CMatrix& b);
SparseCMatrix kron(const SparseCMatrix& a, const SparseCMatrix& b);

double min_eigenvalue(const CMatrix& hermitian);
RVector eigenvalues(const CMatrix& hermitian);
// Numerical rank: singular values above rel_tol * sigma_max.
Index numerical_rank(const CMatrix& m, double rel_tol = 1e-7);
CMatrix hermitian_part(const CMatrix& m);

}  // namespace sepsdp
