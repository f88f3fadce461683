#include "sepsdp/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

namespace sepsdp {

namespace {

struct Entry {
  int r, c;
  Complex v;
};

struct Term {
  Index var;
  std::vector<Entry> entries;
};

// min <C,X> s.t. Re Tr[A_i X] = b_i, X >= 0;  max b^T y s.t. sum y_i A_i + S = C, S >= 0.
struct StandardForm {
  std::vector<Index> n;
  BlockMatrix C;
  std::vector<std::vector<Term>> ops;  // ops[block], sorted by var
  RVector b;
  Index m = 0;
  Index total = 0;
};

std::vector<Entry> entries_of(const SparseCMatrix& a) {
  std::vector<Entry> out;
  out.reserve(static_cast<size_t>(a.nonZeros()));
  for (int k = 0; k < a.outerSize(); ++k)
    for (SparseCMatrix::InnerIterator it(a, k); it; ++it)
      if (it.value() != Complex(0.0, 0.0))
        out.push_back({static_cast<int>(it.row()), static_cast<int>(it.col()), it.value()});
  return out;
}

StandardForm standard_form(const SdpProblem& p, bool with_margin) {
  StandardForm s;
  const int nb = p.num_blocks();
  s.C = p.constant();
  s.ops.resize(static_cast<size_t>(nb));
  const Index shift = with_margin ? 1 : 0;
  s.m = p.num_vars() + shift;
  for (int b = 0; b < nb; ++b) {
    s.n.push_back(p.block_size(b));
    s.total += p.block_size(b);
    auto& ops = s.ops[static_cast<size_t>(b)];
    if (with_margin) {
      Term t{0, {}};
      for (Index r = 0; r < p.block_size(b); ++r) t.entries.push_back({static_cast<int>(r), static_cast<int>(r), 1.0});
      ops.push_back(std::move(t));
    }
    for (Index i = 0; i < p.num_vars(); ++i) {
      auto e = entries_of(p.coefficient(i, b));
      if (!e.empty()) ops.push_back({i + shift, std::move(e)});
    }
  }
  s.b = RVector::Zero(s.m);
  if (with_margin)
    s.b(0) = 1.0;
  else if (p.objective().size() == p.num_vars())
    s.b = p.objective();
  return s;
}

double inner(const BlockMatrix& a, const BlockMatrix& b) {
  double s = 0;
  for (size_t k = 0; k < a.size(); ++k) s += (a[k].conjugate().cwiseProduct(b[k])).sum().real();
  return s;
}

RVector apply_A(const StandardForm& s, const BlockMatrix& X) {
  RVector out = RVector::Zero(s.m);
  for (size_t b = 0; b < s.ops.size(); ++b)
    for (const Term& t : s.ops[b]) {
      Complex acc = 0;
      for (const Entry& e : t.entries) acc += e.v * X[b](e.c, e.r);
      out(t.var) += acc.real();
    }
  return out;
}

BlockMatrix apply_At(const StandardForm& s, const RVector& y) {
  BlockMatrix out;
  for (size_t b = 0; b < s.ops.size(); ++b) {
    CMatrix m = CMatrix::Zero(s.n[b], s.n[b]);
    for (const Term& t : s.ops[b]) {
      const double yi = y(t.var);
      if (yi == 0.0) continue;
      for (const Entry& e : t.entries) m(e.r, e.c) += yi * e.v;
    }
    out.push_back(std::move(m));
  }
  return out;
}

CMatrix sym(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

// M_ij = Re Tr[A_i X A_j S^{-1}] for i <= j (upper triangle).
void assemble_schur(const StandardForm& s, const BlockMatrix& X, const BlockMatrix& Sinv, RMatrix& M) {
  M.setZero(s.m, s.m);
  for (size_t b = 0; b < s.ops.size(); ++b) {
    const auto& ops = s.ops[b];
    const Index n = s.n[b];
    const CMatrix& Xb = X[b];
    const CMatrix& Sb = Sinv[b];
    double prefix_nnz = 0;
    CMatrix XA(n, n), G(n, n);
    for (size_t jj = 0; jj < ops.size(); ++jj) {
      const auto& Ej = ops[jj].entries;
      prefix_nnz += static_cast<double>(Ej.size());
      const double nj = static_cast<double>(Ej.size());
      const double nd = static_cast<double>(n);
      const double cost_dense = nd * nj + nd * nd * nd + prefix_nnz;
      const double cost_sparse = nj * prefix_nnz;
      const Index j = ops[jj].var;
      if (cost_dense < cost_sparse) {
        XA.setZero();
        for (const Entry& e : Ej) XA.col(e.c) += e.v * Xb.col(e.r);
        G.noalias() = XA * Sb;
        for (size_t ii = 0; ii <= jj; ++ii) {
          Complex acc = 0;
          for (const Entry& e : ops[ii].entries) acc += e.v * G(e.c, e.r);
          M(ops[ii].var, j) += acc.real();
        }
      } else {
        for (size_t ii = 0; ii <= jj; ++ii) {
          Complex acc = 0;
          for (const Entry& ei : ops[ii].entries)
            for (const Entry& ej : Ej) acc += ei.v * Xb(ei.c, ej.r) * ej.v * Sb(ej.c, ei.r);
          M(ops[ii].var, j) += acc.real();
        }
      }
    }
  }
}

// Largest a with X + a dX >= 0 given chol(X) = L L^H; infinity when dX >= 0.
double max_step(const Eigen::LLT<CMatrix>& llt, const CMatrix& dX) {
  if (dX.size() == 0) return std::numeric_limits<double>::infinity();
  const auto L = llt.matrixL();
  CMatrix a = L.solve(dX);
  CMatrix t = L.solve(a.adjoint().eval());
  t = sym(t.adjoint().eval());
  const double lmin = Eigen::SelfAdjointEigenSolver<CMatrix>(t, Eigen::EigenvaluesOnly).eigenvalues()(0);
  if (lmin >= 0) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

double block_norm(const BlockMatrix& a) {
  double s = 0;
  for (const auto& m : a) s += m.squaredNorm();
  return std::sqrt(s);
}

struct RawResult {
  BlockMatrix X, S;
  RVector y;
  bool converged = false;
  int iterations = 0;
  std::vector<IterationLog> history;
  double pinf = 0, dinf = 0;
};

struct Iterate {
  BlockMatrix X, S;
  RVector y;
};

RawResult run_hkm(const StandardForm& s, const SolverOptions& opt, Iterate it) {
  const auto& tol = opt.tol;
  const size_t nb = s.n.size();
  const double norm_b = s.b.norm();
  const double norm_C = block_norm(s.C);
  RawResult res;
  RMatrix M;
  int stalled = 0;
  double last_ap = 0, last_ad = 0, last_sigma = 0;
  int polish = 0;
  std::optional<Iterate> best;
  double best_residual = 0;

  auto residuals = [&](const Iterate& cur, RVector& rp, BlockMatrix& rd) {
    rp = s.b - apply_A(s, cur.X);
    rd = apply_At(s, cur.y);
    for (size_t b = 0; b < nb; ++b) rd[b] = s.C[b] - cur.S[b] - rd[b];
  };

  for (int iter = 0;; ++iter) {
    RVector rp;
    BlockMatrix rd;
    residuals(it, rp, rd);
    const double pobj = inner(s.C, it.X);
    const double dobj = s.b.dot(it.y);
    const double xs = inner(it.X, it.S);
    IterationLog log;
    log.iteration = iter;
    log.gap = pobj - dobj;
    log.complementarity = xs;
    log.primal_infeasibility = rp.norm() / (1.0 + norm_b);
    log.dual_infeasibility = block_norm(rd) / (1.0 + norm_C);
    log.mu = xs / static_cast<double>(s.total);
    log.feasible_iterate = log.primal_infeasibility <= tol.feas && log.dual_infeasibility <= tol.feas;
    log.step_primal = last_ap;
    log.step_dual = last_ad;
    log.sigma = last_sigma;
    res.history.push_back(log);
    if (opt.trace) opt.trace(log);
    res.pinf = log.primal_infeasibility;
    res.dinf = log.dual_infeasibility;
    res.iterations = iter;

    double xs_norm = 0;
    for (size_t b = 0; b < nb; ++b) xs_norm += (it.X[b] * it.S[b]).squaredNorm();
    log.complementarity_residual = std::sqrt(xs_norm) / std::max(1e-300, block_norm(it.X) * block_norm(it.S));
    res.history.back().complementarity_residual = log.complementarity_residual;
    const double scale = std::max({1.0, std::abs(pobj), std::abs(dobj)});
    const bool within = std::max(std::abs(log.gap), xs) <= tol.gap * scale && log.feasible_iterate;
    if (within) {
      // Polish until X S is small relative to |X||S|; the gap alone bounds it only by sqrt(gap).
      if (!best || log.complementarity_residual < best_residual) {
        best = it;
        best_residual = log.complementarity_residual;
      }
      if (log.complementarity_residual <= tol.gap || polish >= 8) break;
      ++polish;
    } else if (polish > 0) {
      break;
    }
    if (iter >= tol.max_iter || stalled >= 5) break;

    std::vector<Eigen::LLT<CMatrix>> cx(nb), cs(nb);
    BlockMatrix Sinv(nb);
    bool lost_pd = false;
    for (size_t b = 0; b < nb && !lost_pd; ++b) {
      cx[b].compute(it.X[b]);
      cs[b].compute(it.S[b]);
      lost_pd = cx[b].info() != Eigen::Success || cs[b].info() != Eigen::Success;
      if (lost_pd && !best)
        throw NumericalBreakdown("iterate lost positive definiteness in block " + std::to_string(b), log);
      if (!lost_pd) Sinv[b] = cs[b].solve(CMatrix::Identity(s.n[b], s.n[b]));
      if (!lost_pd) Sinv[b] = sym(Sinv[b]);
    }
    if (lost_pd) break;
    assemble_schur(s, it.X, Sinv, M);
    Eigen::LLT<RMatrix, Eigen::Upper> chol(M);
    if (chol.info() != Eigen::Success) {
      // Tiny diagonal shift before declaring breakdown.
      const double shift = 1e-14 * std::max(1.0, M.diagonal().cwiseAbs().maxCoeff());
      M.diagonal().array() += shift;
      chol.compute(M);
      if (chol.info() != Eigen::Success) {
        if (best) break;
        throw NumericalBreakdown("Schur complement not positive definite at iteration " + std::to_string(iter), log);
      }
    }

    BlockMatrix XRdSinv(nb);
    for (size_t b = 0; b < nb; ++b) XRdSinv[b] = it.X[b] * rd[b] * Sinv[b];
    const RVector a_sinv = apply_A(s, Sinv);
    const RVector a_xrds = apply_A(s, XRdSinv);

    auto direction = [&](double sigma_mu, const BlockMatrix* corr, RVector& dy, BlockMatrix& dX, BlockMatrix& dS) {
      RVector h = s.b - sigma_mu * a_sinv + a_xrds;
      if (corr) h += apply_A(s, *corr);
      dy = chol.solve(h);
      dS = apply_At(s, dy);
      dX.resize(nb);
      for (size_t b = 0; b < nb; ++b) {
        dS[b] = sym(rd[b] - dS[b]);
        CMatrix t = it.X[b] * dS[b] * Sinv[b];
        if (corr) t += (*corr)[b];
        dX[b] = sigma_mu * Sinv[b] - it.X[b] - sym(t);
      }
    };
    auto steps = [&](const BlockMatrix& dX, const BlockMatrix& dS, double& ap, double& ad) {
      ap = std::numeric_limits<double>::infinity();
      ad = ap;
      for (size_t b = 0; b < nb; ++b) {
        ap = std::min(ap, max_step(cx[b], dX[b]));
        ad = std::min(ad, max_step(cs[b], dS[b]));
      }
    };

    const double mu = log.mu;
    RVector dy;
    BlockMatrix dX, dS;
    double ap, ad;
    if (polish > 0) {
      // Pure centering at fixed mu: pulls X S toward mu I.
      direction(0.3 * mu, nullptr, dy, dX, dS);
      steps(dX, dS, ap, ad);
      ap = std::min(1.0, 0.95 * ap);
      ad = std::min(1.0, 0.95 * ad);
      for (size_t b = 0; b < nb; ++b) {
        it.X[b] = sym(it.X[b] + ap * dX[b]);
        it.S[b] = sym(it.S[b] + ad * dS[b]);
      }
      it.y += ad * dy;
      last_ap = ap;
      last_ad = ad;
      last_sigma = 0.3;
      continue;
    }
    direction(0.0, nullptr, dy, dX, dS);
    steps(dX, dS, ap, ad);
    ap = std::min(1.0, ap);
    ad = std::min(1.0, ad);
    double mu_aff = 0;
    for (size_t b = 0; b < nb; ++b)
      mu_aff += ((it.X[b] + ap * dX[b]).conjugate().cwiseProduct(it.S[b] + ad * dS[b])).sum().real();
    mu_aff /= static_cast<double>(s.total);
    double sigma = mu > 0 ? std::pow(std::max(0.0, mu_aff) / mu, 3) : 0.0;
    sigma = std::clamp(sigma, 0.0, 1.0);
    const double tau = 0.9 + 0.09 * std::min(ap, ad);

    BlockMatrix corr(nb);
    for (size_t b = 0; b < nb; ++b) corr[b] = dX[b] * dS[b] * Sinv[b];
    direction(sigma * mu, &corr, dy, dX, dS);
    steps(dX, dS, ap, ad);
    ap = std::min(1.0, tau * ap);
    ad = std::min(1.0, tau * ad);

    for (size_t b = 0; b < nb; ++b) {
      it.X[b] = sym(it.X[b] + ap * dX[b]);
      it.S[b] = sym(it.S[b] + ad * dS[b]);
    }
    it.y += ad * dy;
    last_ap = ap;
    last_ad = ad;
    last_sigma = sigma;
    stalled = (ap < 1e-9 && ad < 1e-9) ? stalled + 1 : 0;
  }
  if (best) {
    it = std::move(*best);
    res.converged = true;
  }
  res.X = std::move(it.X);
  res.S = std::move(it.S);
  res.y = std::move(it.y);
  return res;
}

double spectral_norm(const BlockMatrix& a) {
  double nrm = 0;
  for (const auto& m : a)
    if (m.size() > 0) nrm = std::max(nrm, eigenvalues(sym(m)).cwiseAbs().maxCoeff());
  return nrm;
}

double min_eigenvalue(const BlockMatrix& a) {
  double lmin = std::numeric_limits<double>::infinity();
  for (const auto& m : a)
    if (m.size() > 0) lmin = std::min(lmin, sepsdp::min_eigenvalue(sym(m)));
  return lmin;
}

BlockMatrix identity_blocks(const StandardForm& s, double scale) {
  BlockMatrix out;
  for (Index n : s.n) out.push_back(scale * CMatrix::Identity(n, n));
  return out;
}

// X = zeta*I with zeta fitting A(zeta I) = b in least squares; 1 when that is not positive.
double least_squares_identity_scale(const StandardForm& s) {
  const RVector a = apply_A(s, identity_blocks(s, 1.0));
  const double aa = a.squaredNorm();
  if (aa == 0.0) return 1.0;
  const double z = a.dot(s.b) / aa;
  return (std::isfinite(z) && z > 0) ? z : 1.0;
}

}  // namespace

const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::Feasible: return "Feasible";
    case SdpStatus::Infeasible: return "Infeasible";
    case SdpStatus::Marginal: return "Marginal";
    case SdpStatus::IterLimit: return "IterLimit";
  }
  return "?";
}

SdpProblem::SdpProblem(BlockMatrix constant, std::vector<std::vector<SparseCMatrix>> coefficients, RVector objective)
    : constant_(std::move(constant)), coefficients_(std::move(coefficients)), objective_(std::move(objective)) {
  for (size_t b = 0; b < constant_.size(); ++b)
    require_hermitian(constant_[b], "SdpProblem: F0 block " + std::to_string(b));
  if (objective_.size() != 0 && objective_.size() != static_cast<Index>(coefficients_.size()))
    throw DimensionError("SdpProblem: objective length " + std::to_string(objective_.size()) +
                         " != variable count " + std::to_string(coefficients_.size()));
  for (size_t i = 0; i < coefficients_.size(); ++i) {
    auto& blocks = coefficients_[i];
    if (blocks.size() != constant_.size())
      throw DimensionError("SdpProblem: F_" + std::to_string(i + 1) + " has " + std::to_string(blocks.size()) +
                           " blocks, expected " + std::to_string(constant_.size()));
    Complex tr = 0;
    for (size_t b = 0; b < blocks.size(); ++b) {
      SparseCMatrix& f = blocks[b];
      const Index n = constant_[b].rows();
      if (f.rows() == 0 && f.cols() == 0) f.resize(n, n);
      if (f.rows() != n || f.cols() != n)
        throw DimensionError("SdpProblem: F_" + std::to_string(i + 1) + " block " + std::to_string(b) +
                             " has wrong size");
      f.makeCompressed();
      const SparseCMatrix diff = f - SparseCMatrix(f.adjoint());
      double scale = 0, dev = 0;
      for (int k = 0; k < f.outerSize(); ++k)
        for (SparseCMatrix::InnerIterator it(f, k); it; ++it) scale = std::max(scale, std::abs(it.value()));
      for (int k = 0; k < diff.outerSize(); ++k)
        for (SparseCMatrix::InnerIterator it(diff, k); it; ++it) dev = std::max(dev, std::abs(it.value()));
      if (dev > 1e-12 * scale)
        throw std::invalid_argument("SdpProblem: F_" + std::to_string(i + 1) + " block " + std::to_string(b) +
                                    " is not Hermitian");
      for (Index r = 0; r < n; ++r) tr += f.coeff(r, r);
    }
    if (std::abs(tr) > 1e-12) traceless_ = false;
  }
}

Index SdpProblem::total_size() const {
  Index t = 0;
  for (const auto& c : constant_) t += c.rows();
  return t;
}

void SdpProblem::require_block_shapes(const BlockMatrix& z) const {
  if (static_cast<int>(z.size()) != num_blocks())
    throw DimensionError("block count " + std::to_string(z.size()) + " != " + std::to_string(num_blocks()));
  for (int b = 0; b < num_blocks(); ++b)
    if (z[static_cast<size_t>(b)].rows() != block_size(b) || z[static_cast<size_t>(b)].cols() != block_size(b))
      throw DimensionError("block " + std::to_string(b) + " has wrong size", b);
}

BlockMatrix SdpProblem::evaluate(const RVector& x) const {
  if (x.size() != num_vars()) throw DimensionError("evaluate: x has wrong length");
  BlockMatrix out = constant_;
  for (Index i = 0; i < num_vars(); ++i) {
    if (x(i) == 0.0) continue;
    for (int b = 0; b < num_blocks(); ++b) out[static_cast<size_t>(b)] += x(i) * CMatrix(coefficient(i, b));
  }
  return out;
}

double SdpProblem::trace_with(Index i, const BlockMatrix& z) const {
  require_block_shapes(z);
  if (i == 0) return inner(constant_, z);
  Complex acc = 0;
  for (int b = 0; b < num_blocks(); ++b) {
    const SparseCMatrix& f = coefficient(i - 1, b);
    for (int k = 0; k < f.outerSize(); ++k)
      for (SparseCMatrix::InnerIterator it(f, k); it; ++it)
        acc += it.value() * z[static_cast<size_t>(b)](it.col(), it.row());
  }
  return acc.real();
}

SdpOutcome SdpSolver::solve(const SdpProblem& p, const std::optional<StartPoint>& start) {
  if (p.is_feasibility_problem() && !start) return feasibility_margin(p);
  const StandardForm s = standard_form(p, false);
  Iterate it;
  if (start) {
    p.require_block_shapes(start->Z);
    it.X = start->Z;
    it.y = -start->x;
    it.S = p.evaluate(start->x);
  } else {
    const double beta = 1.0 + spectral_norm(s.C);
    it.X = identity_blocks(s, least_squares_identity_scale(s));
    it.S = identity_blocks(s, beta);
    it.y = RVector::Zero(s.m);
  }
  RawResult raw = run_hkm(s, options_, std::move(it));
  SdpOutcome out;
  out.x = -raw.y;
  out.Z = raw.X;
  out.primal_objective = p.objective().size() ? p.objective().dot(out.x) : 0.0;
  out.dual_objective = -inner(s.C, raw.X);
  out.gap = out.primal_objective - out.dual_objective;
  out.primal_infeasibility = raw.dinf;
  out.dual_infeasibility = raw.pinf;
  out.iterations = raw.iterations;
  out.converged = raw.converged;
  out.history = std::move(raw.history);
  const double lmin = min_eigenvalue(p.evaluate(out.x));
  out.status = (raw.converged && lmin >= -options_.tol.feas) ? SdpStatus::Feasible : SdpStatus::IterLimit;
  return out;
}

SdpOutcome SdpSolver::feasibility_margin(const SdpProblem& p) {
  if (!p.is_feasibility_problem())
    throw std::invalid_argument("feasibility_margin: problem has a nonzero objective");
  const StandardForm s = standard_form(p, true);
  const double beta = 1.0 + spectral_norm(s.C);
  Iterate it;
  it.X = identity_blocks(s, least_squares_identity_scale(s));
  it.y = RVector::Zero(s.m);
  it.y(0) = -beta;
  it.S = s.C;
  for (auto& m : it.S) m += beta * CMatrix::Identity(m.rows(), m.cols());

  RawResult raw = run_hkm(s, options_, std::move(it));
  const auto& tol = options_.tol;
  SdpOutcome out;
  out.x = -raw.y.tail(p.num_vars());
  out.margin_t = -raw.y(0);
  out.margin_upper = -min_eigenvalue(p.evaluate(out.x));
  out.margin_lower = -inner(s.C, raw.X);
  out.Z = raw.X;
  out.primal_objective = out.margin_t;
  out.dual_objective = out.margin_lower;
  out.gap = out.margin_t - out.margin_lower;
  out.primal_infeasibility = raw.dinf;
  out.dual_infeasibility = raw.pinf;
  out.iterations = raw.iterations;
  out.converged = raw.converged;
  out.history = std::move(raw.history);

  if (out.margin_upper <= -tol.margin) {
    out.status = SdpStatus::Feasible;
    out.margin_t = std::min(out.margin_t, out.margin_upper);
  } else if (out.margin_lower >= tol.margin && verify_certificate(p, out.Z, tol).passed) {
    out.status = SdpStatus::Infeasible;
  } else if (raw.converged && std::abs(out.margin_t) < tol.margin) {
    out.status = SdpStatus::Marginal;
  } else if (out.margin_upper < tol.margin && out.margin_lower > -tol.margin) {
    out.status = SdpStatus::Marginal;
    out.margin_t = std::clamp(out.margin_t, out.margin_lower, out.margin_upper);
  } else {
    out.status = SdpStatus::IterLimit;
  }
  return out;
}

SdpOutcome solve(const SdpProblem& p, const SolverOptions& options, const std::optional<StartPoint>& start) {
  return SdpSolver(options).solve(p, start);
}

SdpOutcome feasibility_margin(const SdpProblem& p, const SolverOptions& options) {
  return SdpSolver(options).feasibility_margin(p);
}

CertificateCheck verify_certificate(const SdpProblem& p, const BlockMatrix& z, const SdpTolerances& tol) {
  p.require_block_shapes(z);
  CertificateCheck c;
  c.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& m : z) {
    if (m.size() == 0) continue;
    if (!is_hermitian(m, 1e-9)) {
      c.min_eigenvalue = -std::numeric_limits<double>::infinity();
      break;
    }
    c.min_eigenvalue = std::min(c.min_eigenvalue, sepsdp::min_eigenvalue(sym(m)));
  }
  for (Index i = 1; i <= p.num_vars(); ++i) c.max_constraint = std::max(c.max_constraint, std::abs(p.trace_with(i, z)));
  c.objective = p.trace_with(0, z);
  c.passed = c.min_eigenvalue >= -tol.cert && c.max_constraint <= tol.cert && c.objective <= -tol.cert_margin;
  return c;
}

SlaterCheck check_slater(const SdpProblem& p) {
  SlaterCheck c;
  c.holds = p.traceless_constraints();
  if (c.holds)
    for (int b = 0; b < p.num_blocks(); ++b) c.z0.push_back(CMatrix::Identity(p.block_size(b), p.block_size(b)));
  return c;
}

std::string format_iteration(const IterationLog& l) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "iter %3d  gap % .3e  pinf %.3e  dinf %.3e  ap %.3f  ad %.3f  mu %.3e  sigma %.3f",
                l.iteration, l.gap, l.primal_infeasibility, l.dual_infeasibility, l.step_primal, l.step_dual, l.mu,
                l.sigma);
  return buf;
}

}  // namespace sepsdp
