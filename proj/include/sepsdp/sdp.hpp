#pragma once

#include "sepsdp/qlinalg.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sepsdp {

// One Hermitian matrix per block of a block-diagonal operator.
using BlockMatrix = std::vector<CMatrix>;

struct SdpTolerances {
  double gap = 1e-8;
  double feas = 1e-9;
  double cert = 1e-8;
  double margin = 1e-7;
  double cert_margin = 1e-7;
  int max_iter = 200;
};

struct IterationLog {
  int iteration = 0;
  double gap = 0;            // <C,X> - b^T y, i.e. c^T x + Tr[F0 Z]
  double complementarity = 0;  // <X,S>
  double complementarity_residual = 0;  // |X S| / (|X| |S|), Frobenius
  double primal_infeasibility = 0;
  double dual_infeasibility = 0;
  double step_primal = 0;
  double step_dual = 0;
  double mu = 0;
  double sigma = 0;
  bool feasible_iterate = false;  // both residuals within feas tolerance
};

using TraceSink = std::function<void(const IterationLog&)>;

struct SolverOptions {
  SdpTolerances tol;
  TraceSink trace;
};

// F(x) = F0 + sum_i x_i F_i over a direct sum of Hermitian blocks, plus an
// optional objective c^T x. coefficients[i][b] is F_{i+1} restricted to block b.
class SdpProblem {
 public:
  SdpProblem(BlockMatrix constant, std::vector<std::vector<SparseCMatrix>> coefficients,
             RVector objective = RVector());

  int num_blocks() const { return static_cast<int>(constant_.size()); }
  Index block_size(int b) const { return constant_[static_cast<size_t>(b)].rows(); }
  Index total_size() const;
  Index num_vars() const { return static_cast<Index>(coefficients_.size()); }

  const BlockMatrix& constant() const { return constant_; }
  const SparseCMatrix& coefficient(Index i, int b) const {
    return coefficients_[static_cast<size_t>(i)][static_cast<size_t>(b)];
  }
  const RVector& objective() const { return objective_; }
  bool is_feasibility_problem() const { return objective_.size() == 0 || objective_.isZero(0.0); }
  bool traceless_constraints() const { return traceless_; }

  BlockMatrix evaluate(const RVector& x) const;
  // Re Tr[F_i Z]; i = 0 is the constant term.
  double trace_with(Index i, const BlockMatrix& z) const;
  void require_block_shapes(const BlockMatrix& z) const;

 private:
  BlockMatrix constant_;
  std::vector<std::vector<SparseCMatrix>> coefficients_;
  RVector objective_;
  bool traceless_ = true;
};

enum class SdpStatus { Feasible, Infeasible, Marginal, IterLimit };
const char* to_string(SdpStatus s);

struct SdpOutcome {
  SdpStatus status = SdpStatus::IterLimit;
  RVector x;
  BlockMatrix Z;
  double margin_t = std::numeric_limits<double>::quiet_NaN();
  // Bracket on the margin optimum: lower from the dual point, upper = -lambda_min(F(x)).
  double margin_lower = std::numeric_limits<double>::quiet_NaN();
  double margin_upper = std::numeric_limits<double>::quiet_NaN();
  double gap = std::numeric_limits<double>::quiet_NaN();
  double primal_objective = std::numeric_limits<double>::quiet_NaN();  // c^T x
  double dual_objective = std::numeric_limits<double>::quiet_NaN();    // -Tr[F0 Z]
  double primal_infeasibility = 0;
  double dual_infeasibility = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<IterationLog> history;
};

// Non-positive-definite Schur complement or iterate; carries the last log line.
class NumericalBreakdown : public std::runtime_error {
 public:
  NumericalBreakdown(const std::string& what, IterationLog last)
      : std::runtime_error(what), last_(last) {}
  const IterationLog& last() const noexcept { return last_; }

 private:
  IterationLog last_;
};

// Optional fixed starting point for solve(): Z strictly PD, F(x) strictly PD.
struct StartPoint {
  RVector x;
  BlockMatrix Z;
};

// Owns the per-solve workspace; one instance per thread.
class SdpSolver {
 public:
  explicit SdpSolver(SolverOptions options = {}) : options_(std::move(options)) {}

  SdpOutcome solve(const SdpProblem& p, const std::optional<StartPoint>& start = std::nullopt);
  SdpOutcome feasibility_margin(const SdpProblem& p);

  const SolverOptions& options() const { return options_; }

 private:
  SolverOptions options_;
};

SdpOutcome solve(const SdpProblem& p, const SolverOptions& options = {},
                 const std::optional<StartPoint>& start = std::nullopt);
SdpOutcome feasibility_margin(const SdpProblem& p, const SolverOptions& options = {});

struct CertificateCheck {
  double min_eigenvalue = 0;
  double max_constraint = 0;  // max_i |Tr[F_i Z]|, i >= 1
  double objective = 0;       // Tr[F0 Z]
  bool passed = false;
};

CertificateCheck verify_certificate(const SdpProblem& p, const BlockMatrix& z,
                                    const SdpTolerances& tol = {});

struct SlaterCheck {
  bool holds = false;
  BlockMatrix z0;
};

SlaterCheck check_slater(const SdpProblem& p);

// Formats one trace line: iteration, gap, infeasibilities, step lengths, mu.
std::string format_iteration(const IterationLog& log);

}  // namespace sepsdp
