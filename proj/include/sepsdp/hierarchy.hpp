#pragma once

#include "sepsdp/layout.hpp"
#include "sepsdp/sdp.hpp"
#include "sepsdp/witness.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sepsdp {

struct HierarchyOptions {
  SolverOptions solver;
  Index ambient_cap = 4000;  // largest block the assembly may materialize
  bool analyze_witness = true;  // product sampling and the Gram identity on Entangled
  int product_samples = 10000;
  int polish_runs = 50;
  int gram_points = 1000;
  std::uint64_t seed = 1;
  double extension_tol = 1e-7;  // direct checks on a reconstructed extension
};

// Requested problem exceeds the ambient cap; carries the estimate.
class ResourceLimitError : public std::runtime_error {
 public:
  ResourceLimitError(const std::string& what, ResourceEstimate estimate)
      : std::runtime_error(what), estimate_(std::move(estimate)) {}
  const ResourceEstimate& estimate() const noexcept { return estimate_; }

 private:
  ResourceEstimate estimate_;
};

struct AssemblyMetadata {
  Index m = 0;
  std::vector<Index> block_sizes;
  std::vector<std::string> block_labels;
  std::string basis;
  // Squared Frobenius norm lost compressing transposed directions (0 when the
  // predicted support holds), and the rank spanned by each block's images.
  double lost_norm = 0;
  std::vector<Index> block_ranks;
  std::vector<std::string> discrepancies;
  double adjoint_residual = 0;
};

struct ExtensionProblem {
  SdpProblem problem;
  std::shared_ptr<const ExtensionLayout> layout;
  CMatrix fixed;  // E(rho), extension coordinates
  AssemblyMetadata meta;
};

ExtensionProblem build_extension_problem(const DensityMatrix& rho, const ExtensionSpec& spec,
                                         const HierarchyOptions& options = {});

// Extension in extension coordinates for a primal point x.
CMatrix reconstruct_extension(const ExtensionProblem& ep, const RVector& x);

// Direct checks on a full-space operator over [d_A x k, d_B].
struct ExtensionChecks {
  double trace_residual = 0;  // max |Tr_{copies 2..k} - rho|
  double swap_residual = 0;   // max over copy pairs of max |P X P - X|
  double min_eigenvalue = 0;
  std::vector<double> transpose_min_eigenvalues;  // T on copies 1..l for l < k, then T_B
  bool passed = false;
};

ExtensionChecks check_extension(const CMatrix& full, const DensityMatrix& rho, int k, bool ppt,
                                double tol = 1e-7);

enum class TestStatus { SeparableConsistent, Entangled, Marginal };
const char* to_string(TestStatus s);

struct TestReport {
  ExtensionSpec spec;
  TestStatus status = TestStatus::Marginal;
  int d_a = 0, d_b = 0;
  std::optional<CMatrix> extension;  // extension coordinates; layout->to_full for the full space
  std::optional<ExtensionChecks> checks;
  bool boundary = false;  // margin inside the band but the extension verified
  std::optional<BlockMatrix> dual_blocks;
  std::optional<CertificateCheck> certificate;
  std::optional<Witness> witness;
  std::optional<GramResidual> gram;
  double witness_consistency = 0;  // |Tr[rho W_raw] - Tr[F0 Z]|
  SdpOutcome solver;
  AssemblyMetadata meta;
  std::shared_ptr<const ExtensionLayout> layout;
  // Set by run_ladder: this level's extension traced down one copy, checked at level k - 1.
  std::optional<ExtensionChecks> traced_down;
  std::vector<std::string> warnings;
  double seconds = 0;
};

TestReport run_test(const DensityMatrix& rho, const ExtensionSpec& spec, const HierarchyOptions& options = {});

struct LadderOptions {
  bool ppt = true;
  bool reduced = true;
  HierarchyOptions hierarchy;
};

// Levels 1..k_max, stopping after the first Entangled level. Every SeparableConsistent
// level k >= 2 is traced down one copy and re-checked as a level k - 1 extension.
std::vector<TestReport> run_ladder(const DensityMatrix& rho, int k_max, const LadderOptions& options = {});

}  // namespace sepsdp
