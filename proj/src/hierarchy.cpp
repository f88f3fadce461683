#include "sepsdp/hierarchy.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

namespace sepsdp {

const char* to_string(TestStatus s) {
  switch (s) {
    case TestStatus::SeparableConsistent: return "SeparableConsistent";
    case TestStatus::Entangled: return "Entangled";
    case TestStatus::Marginal: return "Marginal";
  }
  return "?";
}

ExtensionProblem build_extension_problem(const DensityMatrix& rho, const ExtensionSpec& spec,
                                         const HierarchyOptions& options) {
  spec.validate();
  const ResourceEstimate est = required_resources(rho.dim_a(), rho.dim_b(), spec);
  if (est.ambient > options.ambient_cap) {
    std::ostringstream os;
    os << "level " << spec.describe() << " on " << rho.dim_a() << "x" << rho.dim_b() << " needs blocks of size "
       << est.ambient << " (cap " << options.ambient_cap << "), m = " << est.m;
    throw ResourceLimitError(os.str(), est);
  }
  auto layout = std::make_shared<const ExtensionLayout>(rho.dim_a(), rho.dim_b(), spec);
  const CMatrix fixed = layout->embed(rho.matrix());
  const int nb = static_cast<int>(layout->blocks().size());

  BlockMatrix constant;
  for (int b = 0; b < nb; ++b) constant.push_back(layout->block_image(fixed, b));

  AssemblyMetadata meta;
  meta.basis = layout->basis_name();
  meta.adjoint_residual = layout->adjointness_residual();
  for (const BlockInfo& info : layout->blocks()) {
    meta.block_sizes.push_back(info.size);
    meta.block_labels.push_back(info.label);
  }

  std::vector<SparseCMatrix> dirs = layout->free_directions();
  std::vector<std::vector<SparseCMatrix>> coeffs(dirs.size());
  std::vector<CMatrix> span(static_cast<size_t>(nb));
  for (int b = 0; b < nb; ++b) span[static_cast<size_t>(b)] = CMatrix::Zero(meta.block_sizes[static_cast<size_t>(b)], meta.block_sizes[static_cast<size_t>(b)]);
  for (size_t i = 0; i < dirs.size(); ++i) {
    double norm2 = 0;
    for (int b = 0; b < nb; ++b) {
      double lost = 0;
      coeffs[i].push_back(layout->block_image(dirs[i], b, &lost));
      norm2 += coeffs[i].back().squaredNorm();
      meta.lost_norm += lost / dirs[i].squaredNorm();
    }
    const double s = 1.0 / std::sqrt(norm2);
    for (int b = 0; b < nb; ++b) {
      SparseCMatrix& f = coeffs[i][static_cast<size_t>(b)];
      f *= s;
      span[static_cast<size_t>(b)] += CMatrix(f * SparseCMatrix(f.adjoint()));
    }
    dirs[i].resize(0, 0);
  }
  meta.m = static_cast<Index>(coeffs.size());
  // Column space of the direction images per block; the prediction is the full block.
  for (int b = 0; b < nb && meta.m > 0; ++b) {
    const Index rank = numerical_rank(span[static_cast<size_t>(b)], 1e-10);
    meta.block_ranks.push_back(rank);
    if (rank != meta.block_sizes[static_cast<size_t>(b)])
      meta.discrepancies.push_back("block " + meta.block_labels[static_cast<size_t>(b)] + " spans rank " +
                                   std::to_string(rank) + " of predicted " +
                                   std::to_string(meta.block_sizes[static_cast<size_t>(b)]));
  }
  if (meta.lost_norm > 1e-12 * std::max<double>(1.0, static_cast<double>(meta.m)))
    meta.discrepancies.push_back("transposed directions leave the predicted support (lost norm " +
                                 std::to_string(meta.lost_norm) + ")");
  if (meta.m != est.m) throw std::logic_error("assembled m differs from the closed form");
  return {SdpProblem(std::move(constant), std::move(coeffs)), std::move(layout), fixed, std::move(meta)};
}

CMatrix reconstruct_extension(const ExtensionProblem& ep, const RVector& x) {
  if (x.size() != ep.problem.num_vars()) throw DimensionError("reconstruct_extension: x has the wrong length");
  CMatrix ext = ep.fixed;
  for (Index i = 0; i < x.size(); ++i) ext += x(i) * CMatrix(ep.problem.coefficient(i, 0));
  return ext;
}

ExtensionChecks check_extension(const CMatrix& full, const DensityMatrix& rho, int k, bool ppt, double tol) {
  std::vector<int> dims(static_cast<size_t>(k), rho.dim_a());
  dims.push_back(rho.dim_b());
  const TensorSpace space(dims);
  space.require_square(full.rows(), full.cols());
  ExtensionChecks c;
  if (k > 1) {
    std::vector<int> rest(static_cast<size_t>(k - 1));
    std::iota(rest.begin(), rest.end(), 1);
    c.trace_residual = (partial_trace(full, space, rest) - rho.matrix()).cwiseAbs().maxCoeff();
  } else {
    c.trace_residual = (full - rho.matrix()).cwiseAbs().maxCoeff();
  }
  std::vector<int> perm(static_cast<size_t>(k + 1));
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      std::iota(perm.begin(), perm.end(), 0);
      std::swap(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)]);
      const std::vector<Index> idx = permutation_indices(space, perm);
      double worst = 0;
      for (Index col = 0; col < full.cols(); ++col)
        for (Index row = 0; row < full.rows(); ++row)
          worst = std::max(worst, std::abs(full(idx[static_cast<size_t>(row)], idx[static_cast<size_t>(col)]) -
                                           full(row, col)));
      c.swap_residual = std::max(c.swap_residual, worst);
    }
  c.min_eigenvalue = min_eigenvalue(hermitian_part(full));
  if (ppt) {
    for (int l = 1; l < k; ++l) {
      std::vector<int> which(static_cast<size_t>(l));
      std::iota(which.begin(), which.end(), 0);
      c.transpose_min_eigenvalues.push_back(min_eigenvalue(hermitian_part(partial_transpose(full, space, which))));
    }
    c.transpose_min_eigenvalues.push_back(min_eigenvalue(hermitian_part(partial_transpose(full, space, k))));
  }
  c.passed = c.trace_residual <= tol && c.swap_residual <= tol && c.min_eigenvalue >= -tol;
  for (double e : c.transpose_min_eigenvalues) c.passed = c.passed && e >= -tol;
  return c;
}

namespace {

// Clips eigenvalues in (-1e-10, -1e-14) and renormalizes; DensityMatrix already rejects
// worse, and anything closer to zero is round-off in an exactly singular state.
DensityMatrix clip_state(const DensityMatrix& rho, std::vector<std::string>& warnings) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix());
  if (es.eigenvalues()(0) >= -1e-14) return rho;
  RVector ev = es.eigenvalues().cwiseMax(0.0);
  ev /= ev.sum();
  CMatrix m = es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  m = hermitian_part(m);
  std::ostringstream os;
  os << "input lambda_min " << es.eigenvalues()(0) << " clipped to 0 and renormalized";
  warnings.push_back(os.str());
  return DensityMatrix(m, rho.dim_a(), rho.dim_b());
}

}  // namespace

TestReport run_test(const DensityMatrix& input, const ExtensionSpec& spec, const HierarchyOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  TestReport rep;
  rep.spec = spec;
  rep.d_a = input.dim_a();
  rep.d_b = input.dim_b();
  const DensityMatrix rho = clip_state(input, rep.warnings);

  const ExtensionProblem ep = build_extension_problem(rho, spec, options);
  rep.meta = ep.meta;
  rep.layout = ep.layout;

  SdpSolver solver(options.solver);
  rep.solver = solver.feasibility_margin(ep.problem);
  const SdpOutcome& out = rep.solver;
  const double tol = options.extension_tol;

  if (out.status == SdpStatus::Infeasible) {
    rep.dual_blocks = out.Z;
    rep.certificate = verify_certificate(ep.problem, out.Z, options.solver.tol);
    if (!rep.certificate->passed) {
      rep.status = TestStatus::Marginal;
      rep.warnings.push_back("solver reported Infeasible but the certificate does not verify");
    } else {
      Witness w = extract_witness(out.Z, ep.layout);
      w.provenance->dual_objective = rep.certificate->objective;
      const double raw_value = (rho.matrix() * w.raw()).trace().real();
      rep.witness_consistency = std::abs(raw_value - rep.certificate->objective);
      w.target_value = raw_value / w.scale;
      if (rep.witness_consistency > 1e-9 * std::max(1.0, std::abs(rep.certificate->objective)))
        rep.warnings.push_back("Tr[rho W] differs from Tr[F0 Z] by " + std::to_string(rep.witness_consistency));
      if (options.analyze_witness) {
        std::mt19937_64 rng(options.seed);
        const ProductMinimum pm = evaluate_on_product_states(w.op, rho.dim_a(), rho.dim_b(), rng,
                                                             options.product_samples, true, options.polish_runs);
        w.product_min = pm.value;
        rep.gram = verify_ksos_identity(w, rng, options.gram_points);
        if (!rep.gram->passed)
          rep.warnings.push_back("Gram identity residual " + std::to_string(rep.gram->max_relative));
      }
      rep.witness = std::move(w);
      rep.status = TestStatus::Entangled;
    }
  } else {
    if (out.x.size() == ep.problem.num_vars()) {
      const CMatrix ext = reconstruct_extension(ep, out.x);
      rep.checks = check_extension(ep.layout->to_full(ext), rho, spec.k, spec.ppt, tol);
      rep.extension = ext;
    }
    const bool verified = rep.checks && rep.checks->passed;
    if (out.status == SdpStatus::IterLimit)
      rep.warnings.push_back("solver hit the iteration limit after " + std::to_string(out.iterations) + " steps");
    if (verified) {
      rep.status = TestStatus::SeparableConsistent;
      rep.boundary = out.status != SdpStatus::Feasible;
    } else {
      rep.status = TestStatus::Marginal;
      if (out.status == SdpStatus::Feasible) rep.warnings.push_back("feasible point fails the direct extension checks");
      rep.extension.reset();
    }
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::vector<TestReport> run_ladder(const DensityMatrix& rho, int k_max, const LadderOptions& options) {
  if (k_max < 1) throw std::invalid_argument("run_ladder: k_max must be >= 1");
  std::vector<TestReport> reports;
  for (int k = 1; k <= k_max; ++k) {
    ExtensionSpec spec{k, options.ppt || k == 1, options.reduced};
    TestReport rep = run_test(rho, spec, options.hierarchy);
    if (k >= 2 && rep.status == TestStatus::SeparableConsistent && rep.extension) {
      const CMatrix full = rep.layout->to_full(*rep.extension);
      const TensorSpace space = rep.layout->full_space();
      const CMatrix down = partial_trace(full, space, k - 1);
      rep.traced_down = check_extension(down, rho, k - 1, options.ppt || k - 1 == 1, options.hierarchy.extension_tol);
      if (!rep.traced_down->passed)
        rep.warnings.push_back("monotonicity: level " + std::to_string(k) +
                               " extension does not trace down to a valid level " + std::to_string(k - 1) +
                               " extension");
      const TestReport& prev = reports.back();
      if (prev.status != TestStatus::SeparableConsistent)
        rep.warnings.push_back("monotonicity: level " + std::to_string(k - 1) + " was " + to_string(prev.status) +
                               " while level " + std::to_string(k) + " extends");
    }
    const bool stop = rep.status == TestStatus::Entangled;
    reports.push_back(std::move(rep));
    if (stop) break;
  }
  return reports;
}

}  // namespace sepsdp
