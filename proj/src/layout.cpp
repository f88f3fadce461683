#include "sepsdp/layout.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <tuple>

namespace sepsdp {

namespace {

Index ipow(Index base, int e) {
  Index r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

double factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

using TripletList = std::vector<Eigen::Triplet<Complex, Index>>;

SparseCMatrix from_triplets(Index rows, Index cols, const TripletList& t) {
  SparseCMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

void prune(SparseCMatrix& m) {
  m.prune([](Index, Index, const Complex& v) { return std::abs(v) > 1e-15; });
}

CMatrix random_hermitian(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  return 0.5 * (a + a.adjoint());
}

}  // namespace

DensityMatrix::DensityMatrix(CMatrix m, int d_a, int d_b) : m_(std::move(m)), d_a_(d_a), d_b_(d_b) {
  const TensorSpace space({d_a, d_b});
  space.require_square(m_.rows(), m_.cols());
  require_hermitian(m_, "density matrix");
  const double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > 1e-10)
    throw std::invalid_argument("density matrix: trace " + std::to_string(tr) + " is not 1");
  const double lmin = min_eigenvalue(m_);
  if (lmin < -1e-10)
    throw std::invalid_argument("density matrix: lambda_min " + std::to_string(lmin) + " < -1e-10");
}

void ExtensionSpec::validate() const {
  if (k < 1) throw std::invalid_argument("extension level k must be >= 1");
  if (k == 1 && !ppt) throw std::invalid_argument("level 1 is the PPT test; ppt must be on");
}

std::string ExtensionSpec::describe() const {
  std::ostringstream os;
  os << "k=" << k << (ppt ? " ppt" : " no-ppt") << (reduced ? " reduced" : " unreduced");
  return os.str();
}

namespace {

std::vector<BlockInfo> block_list(int d_a, int d_b, const ExtensionSpec& spec) {
  const int k = spec.k;
  auto sym = [&](int c) { return spec.reduced ? symmetric_dimension(d_a, c) : ipow(d_a, c); };
  std::vector<BlockInfo> blocks;
  blocks.push_back({BlockKind::Extension, 0, sym(k) * d_b, "extension"});
  if (spec.ppt) {
    for (int l = 1; l < k; ++l)
      blocks.push_back({BlockKind::TransposeACopies, l, sym(l) * sym(k - l) * d_b, "T_A" + std::to_string(l)});
    blocks.push_back({BlockKind::TransposeB, 0, sym(k) * d_b, "T_B"});
  }
  return blocks;
}

}  // namespace

ResourceEstimate required_resources(int d_a, int d_b, const ExtensionSpec& spec) {
  spec.validate();
  if (d_a < 2 || d_b < 2) throw DimensionError("local dimensions must be >= 2");
  ResourceEstimate r;
  const double da2 = static_cast<double>(d_a) * d_a;
  const double db2 = static_cast<double>(d_b) * d_b;
  // Both modes share the count: symmetric operators on k copies minus the fixed part.
  const double a_count = spec.reduced
                             ? std::pow(static_cast<double>(symmetric_dimension(d_a, spec.k)), 2)
                             : static_cast<double>(binomial(d_a * d_a + spec.k - 1, spec.k));
  r.m = static_cast<Index>(std::llround((a_count - da2) * db2));
  double sq = 0;
  for (const BlockInfo& b : block_list(d_a, d_b, spec)) {
    r.block_sizes.push_back(b.size);
    r.ambient = std::max(r.ambient, b.size);
    sq += static_cast<double>(b.size) * static_cast<double>(b.size);
  }
  r.flops = static_cast<double>(r.m) * static_cast<double>(r.m) * sq;
  return r;
}

ExtensionLayout::ExtensionLayout(int d_a, int d_b, ExtensionSpec spec) : d_a_(d_a), d_b_(d_b), spec_(spec) {
  spec_.validate();
  if (d_a < 2 || d_b < 2) throw DimensionError("local dimensions must be >= 2");
  a_dim_ = ipow(d_a, spec_.k);
  full_dim_ = a_dim_ * d_b;
  blocks_ = block_list(d_a, d_b, spec_);
  sym_k_ = std::make_shared<const SymmetricSubspace>(d_a, spec_.k);
  for (const BlockInfo& b : blocks_) compressions_.push_back(make_compression(b));
  build_unit_images();

  std::mt19937_64 rng(0x5eed);
  for (int trial = 0; trial < 3; ++trial) {
    const CMatrix x = random_hermitian(static_cast<Index>(d_a) * d_b, rng);
    const CMatrix y = random_hermitian(extension_dim(), rng);
    const CMatrix ex = embed(x);
    const Complex lhs = (ex * y).trace();
    const Complex rhs = (x * embed_adjoint(y)).trace();
    const double scale = std::max(1.0, ex.norm() * y.norm());
    adjoint_residual_ = std::max(adjoint_residual_, std::abs(lhs - rhs) / scale);
  }
  if (adjoint_residual_ > 1e-10)
    throw std::logic_error("fixed-part embedding and its adjoint disagree: residual " +
                           std::to_string(adjoint_residual_));
}

TensorSpace ExtensionLayout::full_space() const {
  std::vector<int> dims(static_cast<size_t>(spec_.k), d_a_);
  dims.push_back(d_b_);
  return TensorSpace(dims);
}

ExtensionLayout::Compression ExtensionLayout::make_compression(const BlockInfo& info) const {
  Compression c;
  c.dim = info.size;
  if (!spec_.reduced) {
    c.identity = true;
    return c;
  }
  c.col.resize(static_cast<size_t>(full_dim_));
  c.w.resize(static_cast<size_t>(full_dim_));
  c.members.resize(static_cast<size_t>(c.dim));
  if (info.kind == BlockKind::TransposeACopies) {
    // Symmetric in the transposed copies and, separately, in the rest.
    const int l = info.copies;
    const SymmetricSubspace first(d_a_, l), rest(d_a_, spec_.k - l);
    const Index split = ipow(d_a_, spec_.k - l);
    for (Index r = 0; r < full_dim_; ++r) {
      const Index t = r / d_b_, beta = r % d_b_;
      const Index hi = t / split, lo = t % split;
      const Index col = (first.column_of(hi) * rest.dim() + rest.column_of(lo)) * d_b_ + beta;
      c.col[static_cast<size_t>(r)] = col;
      c.w[static_cast<size_t>(r)] = first.weight_of(hi) * rest.weight_of(lo);
    }
  } else {
    for (Index r = 0; r < full_dim_; ++r) {
      const Index t = r / d_b_, beta = r % d_b_;
      c.col[static_cast<size_t>(r)] = sym_k_->column_of(t) * d_b_ + beta;
      c.w[static_cast<size_t>(r)] = sym_k_->weight_of(t);
    }
  }
  for (Index r = 0; r < full_dim_; ++r) c.members[static_cast<size_t>(c.col[static_cast<size_t>(r)])].push_back(r);
  return c;
}

void ExtensionLayout::transpose_position(Index& r, Index& c, int block) const {
  const BlockInfo& info = blocks_[static_cast<size_t>(block)];
  if (info.kind == BlockKind::Extension) return;
  if (info.kind == BlockKind::TransposeB) {
    const Index br = r % d_b_, bc = c % d_b_;
    r += bc - br;
    c += br - bc;
    return;
  }
  // Copies 1..l are the leading digits of the tuple.
  const Index unit = ipow(d_a_, spec_.k - info.copies) * d_b_;
  const Index hr = r / unit, hc = c / unit;
  r += (hc - hr) * unit;
  c += (hr - hc) * unit;
}

CMatrix ExtensionLayout::to_full(const CMatrix& ext) const {
  if (ext.rows() != extension_dim() || ext.cols() != extension_dim())
    throw DimensionError("to_full: operator is not in extension coordinates");
  if (!spec_.reduced) return ext;
  const Compression& c0 = compressions_.front();
  CMatrix out = CMatrix::Zero(full_dim_, full_dim_);
  for (Index q = 0; q < ext.cols(); ++q)
    for (Index p = 0; p < ext.rows(); ++p) {
      if (ext(p, q) == Complex(0)) continue;
      for (Index r : c0.members[static_cast<size_t>(p)])
        for (Index s : c0.members[static_cast<size_t>(q)])
          out(r, s) = ext(p, q) * c0.w[static_cast<size_t>(r)] * c0.w[static_cast<size_t>(s)];
    }
  return out;
}

SparseCMatrix ExtensionLayout::to_full(const SparseCMatrix& ext) const {
  if (ext.rows() != extension_dim() || ext.cols() != extension_dim())
    throw DimensionError("to_full: operator is not in extension coordinates");
  if (!spec_.reduced) return ext;
  const Compression& c0 = compressions_.front();
  TripletList t;
  for (Index q = 0; q < ext.outerSize(); ++q)
    for (SparseCMatrix::InnerIterator it(ext, q); it; ++it)
      for (Index r : c0.members[static_cast<size_t>(it.row())])
        for (Index s : c0.members[static_cast<size_t>(it.col())])
          t.emplace_back(r, s, it.value() * c0.w[static_cast<size_t>(r)] * c0.w[static_cast<size_t>(s)]);
  return from_triplets(full_dim_, full_dim_, t);
}

CVector ExtensionLayout::from_full_vector(const CVector& v) const {
  if (v.size() != full_dim_) throw DimensionError("from_full_vector: length != full dimension");
  if (!spec_.reduced) return v;
  const Compression& c0 = compressions_.front();
  CVector out = CVector::Zero(extension_dim());
  for (Index r = 0; r < full_dim_; ++r)
    out(c0.col[static_cast<size_t>(r)]) += c0.w[static_cast<size_t>(r)] * v(r);
  return out;
}

SparseCMatrix ExtensionLayout::block_image(const SparseCMatrix& ext, int block, double* lost) const {
  if (lost) *lost = 0;
  if (block == 0) return ext;
  const Compression& cb = compressions_.at(static_cast<size_t>(block));
  const SparseCMatrix full = to_full(ext);
  TripletList t;
  t.reserve(static_cast<size_t>(full.nonZeros()));
  for (Index q = 0; q < full.outerSize(); ++q)
    for (SparseCMatrix::InnerIterator it(full, q); it; ++it) {
      Index r = it.row(), c = it.col();
      transpose_position(r, c, block);
      if (cb.identity)
        t.emplace_back(r, c, it.value());
      else
        t.emplace_back(cb.col[static_cast<size_t>(r)], cb.col[static_cast<size_t>(c)],
                       it.value() * cb.w[static_cast<size_t>(r)] * cb.w[static_cast<size_t>(c)]);
    }
  SparseCMatrix out = from_triplets(cb.dim, cb.dim, t);
  prune(out);
  // Compression is an isometry on the predicted support, so any norm drop means
  // the transposed operator leaked outside it.
  if (lost) *lost = std::max(0.0, full.squaredNorm() - out.squaredNorm());
  return out;
}

CMatrix ExtensionLayout::block_image(const CMatrix& ext, int block) const {
  const SparseCMatrix s = ext.sparseView();
  return CMatrix(block_image(s, block));
}

CMatrix ExtensionLayout::block_adjoint(const CMatrix& zb, int block) const {
  const Compression& cb = compressions_.at(static_cast<size_t>(block));
  if (zb.rows() != cb.dim || zb.cols() != cb.dim)
    throw DimensionError("block_adjoint: block " + std::to_string(block) + " has the wrong size");
  if (block == 0) return zb;
  const Compression& c0 = compressions_.front();
  CMatrix out = CMatrix::Zero(extension_dim(), extension_dim());
  auto deposit = [&](Index r, Index c, Complex v) {
    transpose_position(r, c, block);
    if (c0.identity)
      out(r, c) += v;
    else
      out(c0.col[static_cast<size_t>(r)], c0.col[static_cast<size_t>(c)]) +=
          v * c0.w[static_cast<size_t>(r)] * c0.w[static_cast<size_t>(c)];
  };
  if (cb.identity) {
    for (Index c = 0; c < cb.dim; ++c)
      for (Index r = 0; r < cb.dim; ++r) deposit(r, c, zb(r, c));
    return out;
  }
  for (Index q = 0; q < cb.dim; ++q)
    for (Index p = 0; p < cb.dim; ++p)
      for (Index r : cb.members[static_cast<size_t>(p)])
        for (Index c : cb.members[static_cast<size_t>(q)])
          deposit(r, c, zb(p, q) * cb.w[static_cast<size_t>(r)] * cb.w[static_cast<size_t>(c)]);
  return out;
}

CVector ExtensionLayout::block_vector(const CVector& x, const CVector& y, int block) const {
  if (x.size() != d_a_ || y.size() != d_b_) throw DimensionError("block_vector: local vector lengths");
  const BlockInfo& info = blocks_.at(static_cast<size_t>(block));
  const int conj_a = info.kind == BlockKind::TransposeACopies ? info.copies : 0;
  const CVector yb = info.kind == BlockKind::TransposeB ? CVector(y.conjugate()) : y;
  const CVector xc = x.conjugate();
  CVector v(full_dim_);
  for (Index r = 0; r < full_dim_; ++r) {
    Index t = r / d_b_;
    Complex amp = yb(r % d_b_);
    for (int s = spec_.k - 1; s >= 0; --s) {
      amp *= s < conj_a ? xc(t % d_a_) : x(t % d_a_);
      t /= d_a_;
    }
    v(r) = amp;
  }
  const Compression& cb = compressions_[static_cast<size_t>(block)];
  if (cb.identity) return v;
  CVector out = CVector::Zero(cb.dim);
  for (Index r = 0; r < full_dim_; ++r)
    out(cb.col[static_cast<size_t>(r)]) += cb.w[static_cast<size_t>(r)] * v(r);
  return out;
}

void ExtensionLayout::build_unit_images() {
  const int d = d_a_, k = spec_.k;
  unit_images_.assign(static_cast<size_t>(d) * d, SparseCMatrix());
  if (!spec_.reduced) {
    // E_A(Y) = sum_p Y in slot p, I/d elsewhere, minus (k - 1) Tr(Y) (I/d)^{otimes k}.
    const double scale = std::pow(1.0 / d, k - 1);
    for (int a = 0; a < d; ++a)
      for (int a2 = 0; a2 < d; ++a2) {
        TripletList t;
        for (int p = 0; p < k; ++p) {
          const Index sp = ipow(d, k - 1 - p);
          for (Index base = 0; base < a_dim_; ++base) {
            if ((base / sp) % d != 0) continue;
            t.emplace_back(base + a * sp, base + a2 * sp, scale);
          }
        }
        if (a == a2)
          for (Index i = 0; i < a_dim_; ++i) t.emplace_back(i, i, -(k - 1) * std::pow(1.0 / d, k));
        SparseCMatrix m = from_triplets(a_dim_, a_dim_, t);
        prune(m);
        unit_images_[static_cast<size_t>(a * d + a2)] = m;
      }
    return;
  }
  // Reduced: Phi = Tr over copies 2..k restricted to Sym^k, as a d^2 x d_S^2 real matrix;
  // the embedding is its pseudo-inverse, the least-norm preimage.
  const SymmetricSubspace& s = *sym_k_;
  const Index ds = s.dim();
  const Index suffix = ipow(d, k - 1);
  RMatrix phi = RMatrix::Zero(static_cast<Index>(d) * d, ds * ds);
  for (Index tail = 0; tail < suffix; ++tail)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        const Index n = s.column_of(a * suffix + tail), n2 = s.column_of(b * suffix + tail);
        phi(a * d + b, n * ds + n2) += s.column_weight(n) * s.column_weight(n2);
      }
  const RMatrix gram = phi * phi.transpose();
  const RMatrix psi = phi.transpose() * gram.llt().solve(RMatrix::Identity(gram.rows(), gram.cols()));
  for (Index ab = 0; ab < d * d; ++ab) {
    TripletList t;
    for (Index e = 0; e < ds * ds; ++e)
      if (std::abs(psi(e, ab)) > 1e-15) t.emplace_back(e / ds, e % ds, psi(e, ab));
    unit_images_[static_cast<size_t>(ab)] = from_triplets(ds, ds, t);
  }
}

CMatrix ExtensionLayout::embed(const CMatrix& y) const {
  const Index dab = static_cast<Index>(d_a_) * d_b_;
  if (y.rows() != dab || y.cols() != dab) throw DimensionError("embed: operator is not on [d_A, d_B]");
  CMatrix out = CMatrix::Zero(extension_dim(), extension_dim());
  for (int a = 0; a < d_a_; ++a)
    for (int a2 = 0; a2 < d_a_; ++a2) {
      const SparseCMatrix& img = unit_images_[static_cast<size_t>(a * d_a_ + a2)];
      for (Index q = 0; q < img.outerSize(); ++q)
        for (SparseCMatrix::InnerIterator it(img, q); it; ++it)
          out.block(it.row() * d_b_, it.col() * d_b_, d_b_, d_b_) +=
              it.value() * y.block(a * d_b_, a2 * d_b_, d_b_, d_b_);
    }
  return out;
}

CMatrix ExtensionLayout::embed_adjoint(const CMatrix& v) const {
  if (v.rows() != extension_dim() || v.cols() != extension_dim())
    throw DimensionError("embed_adjoint: operator is not in extension coordinates");
  const Index dab = static_cast<Index>(d_a_) * d_b_;
  CMatrix out = CMatrix::Zero(dab, dab);
  // X_{(a' b'),(a b)} = sum_{pq} E_A(E_aa')_{pq} V_{(q b'),(p b)}
  for (int a = 0; a < d_a_; ++a)
    for (int a2 = 0; a2 < d_a_; ++a2) {
      const SparseCMatrix& img = unit_images_[static_cast<size_t>(a * d_a_ + a2)];
      for (Index q = 0; q < img.outerSize(); ++q)
        for (SparseCMatrix::InnerIterator it(img, q); it; ++it)
          out.block(a2 * d_b_, a * d_b_, d_b_, d_b_) +=
              it.value() * v.block(it.col() * d_b_, it.row() * d_b_, d_b_, d_b_);
    }
  return out;
}

Index ExtensionLayout::free_count() const {
  return required_resources(d_a_, d_b_, spec_).m;
}

std::vector<SparseCMatrix> ExtensionLayout::free_directions() const {
  const int d = d_a_, k = spec_.k;
  std::vector<SparseCMatrix> a_part;
  if (!spec_.reduced) {
    const OperatorBasis gm = hermitian_basis(d);
    std::vector<SparseCMatrix> sig;
    for (const CMatrix& e : gm.elements) sig.push_back(e.sparseView());
    // Multisets of generator indices with at least two traceless factors.
    std::vector<int> idx(static_cast<size_t>(k), 0);
    const int n = d * d;
    std::function<void(int, int)> rec = [&](int pos, int lo) {
      if (pos == k) {
        if (std::count_if(idx.begin(), idx.end(), [](int i) { return i > 0; }) < 2) return;
        std::vector<int> perm = idx;
        SparseCMatrix g(a_dim_, a_dim_);
        do {
          SparseCMatrix term = sig[static_cast<size_t>(perm[0])];
          for (int p = 1; p < k; ++p) term = kron(term, sig[static_cast<size_t>(perm[static_cast<size_t>(p)])]);
          g += term;
        } while (std::next_permutation(perm.begin(), perm.end()));
        prune(g);
        a_part.push_back(g / g.norm());
        return;
      }
      for (int i = lo; i < n; ++i) {
        idx[static_cast<size_t>(pos)] = i;
        rec(pos + 1, i);
      }
    };
    rec(0, 0);
  } else {
    const SymmetricSubspace& s = *sym_k_;
    const Index ds = s.dim();
    const double r2 = 1.0 / std::sqrt(2.0);
    // Off-diagonal pairs n < n2 map under the partial trace to c |a><b| when
    // n - e_a = n2 - e_b, and to zero otherwise.
    std::map<std::pair<int, int>, std::vector<std::tuple<Index, Index, double>>> groups;
    for (Index n = 0; n < ds; ++n)
      for (Index n2 = n + 1; n2 < ds; ++n2) {
        const auto& o1 = s.occupation(n);
        const auto& o2 = s.occupation(n2);
        int a = -1, b = -1, diff = 0;
        for (int i = 0; i < d; ++i) {
          const int delta = o1[static_cast<size_t>(i)] - o2[static_cast<size_t>(i)];
          diff += std::abs(delta);
          if (delta == 1) a = i;
          if (delta == -1) b = i;
        }
        if (diff != 2) {
          TripletList re{{n, n2, r2}, {n2, n, r2}}, im{{n, n2, Complex(0, r2)}, {n2, n, Complex(0, -r2)}};
          a_part.push_back(from_triplets(ds, ds, re));
          a_part.push_back(from_triplets(ds, ds, im));
          continue;
        }
        std::vector<int> rest = o1;
        --rest[static_cast<size_t>(a)];
        double perms = factorial(k - 1);
        for (int m : rest) perms /= factorial(m);
        const double c = perms * s.column_weight(n) * s.column_weight(n2);
        // Orient every pair so the entry lands on |lo><hi| with lo < hi.
        if (a < b)
          groups[{a, b}].emplace_back(n, n2, c);
        else
          groups[{b, a}].emplace_back(n2, n, c);
      }
    for (const auto& [ab, list] : groups) {
      const auto& [p0, q0, c0] = list.front();
      for (size_t i = 1; i < list.size(); ++i) {
        const auto& [p, q, c] = list[i];
        TripletList re{{p, q, c0}, {q, p, c0}, {p0, q0, -c}, {q0, p0, -c}};
        TripletList im{{p, q, Complex(0, c0)}, {q, p, Complex(0, -c0)},
                       {p0, q0, Complex(0, -c)}, {q0, p0, Complex(0, c)}};
        for (TripletList* t : {&re, &im}) {
          SparseCMatrix m = from_triplets(ds, ds, *t);
          a_part.push_back(m / m.norm());
        }
      }
    }
    // Diagonal: Phi(E_nn) = sum_a (n_a / k) |a><a|.
    RMatrix occ(d, ds);
    for (Index n = 0; n < ds; ++n)
      for (int a = 0; a < d; ++a) occ(a, n) = s.occupation(n)[static_cast<size_t>(a)] / static_cast<double>(k);
    Eigen::JacobiSVD<RMatrix> svd(occ, Eigen::ComputeFullV);
    const Index rank = (svd.singularValues().array() > 1e-12 * svd.singularValues()(0)).count();
    for (Index j = rank; j < ds; ++j) {
      TripletList t;
      for (Index n = 0; n < ds; ++n)
        if (std::abs(svd.matrixV()(n, j)) > 1e-15) t.emplace_back(n, n, svd.matrixV()(n, j));
      a_part.push_back(from_triplets(ds, ds, t));
    }
  }
  const Index expected = free_count() / (static_cast<Index>(d_b_) * d_b_);
  if (static_cast<Index>(a_part.size()) != expected)
    throw std::logic_error("free direction count " + std::to_string(a_part.size()) + " != " +
                           std::to_string(expected));
  const OperatorBasis bu = hermitian_unit_basis(d_b_);
  std::vector<SparseCMatrix> out;
  out.reserve(a_part.size() * bu.elements.size());
  for (const SparseCMatrix& g : a_part)
    for (const CMatrix& e : bu.elements) {
      const SparseCMatrix es = e.sparseView();
      out.push_back(kron(g, es));
    }
  return out;
}

std::string ExtensionLayout::basis_name() const {
  return spec_.reduced ? "symmetric occupation basis: kernel of the copy partial trace (x) B matrix units"
                       : "symmetrized generalized Gell-Mann products (x) B matrix units";
}

}  // namespace sepsdp
