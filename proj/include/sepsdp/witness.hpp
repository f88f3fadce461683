#pragma once

#include "sepsdp/layout.hpp"

#include <limits>
#include <memory>
#include <optional>
#include <random>

namespace sepsdp {

// Dual blocks a witness was extracted from, with the geometry that produced them.
struct WitnessProvenance {
  BlockMatrix blocks;
  std::shared_ptr<const ExtensionLayout> layout;
  double dual_objective = 0;  // Tr[F0 Z]
};

// Product-state minimum of <xy|W|xy> over unit x, y.
struct ProductMinimum {
  double value = std::numeric_limits<double>::infinity();
  CVector x, y;
  int samples = 0;
  int polish_runs = 0;
};

struct Witness {
  CMatrix op;        // max |eigenvalue| = 1
  double scale = 1;  // op = raw / scale, raw = E^*(sum_b C_b^*(Z_b))
  int d_a = 0, d_b = 0;
  std::optional<WitnessProvenance> provenance;
  double target_value = std::numeric_limits<double>::quiet_NaN();  // Tr[W rho_target], normalized W
  double product_min = std::numeric_limits<double>::quiet_NaN();

  CMatrix raw() const { return op * scale; }
  int level() const { return provenance ? provenance->layout->copies() : 0; }
};

// W = E^*(sum_b C_b^*(Z_b)): transposed blocks are untransposed and lifted back to
// the extension, then the fixed-part adjoint lands it on [d_A, d_B].
// Rejects blocks with lambda_min < -psd_tol * max(1, |Z_b|).
Witness extract_witness(const BlockMatrix& z, std::shared_ptr<const ExtensionLayout> layout,
                        double psd_tol = 1e-8);
Witness extract_witness(const BlockMatrix& z, int d_a, int d_b, const ExtensionSpec& spec,
                        double psd_tol = 1e-8);

// Haar samples, then alternating smallest-eigenvector descent from the lowest
// `polish_runs` samples when optimize is set.
ProductMinimum evaluate_on_product_states(const CMatrix& w, int d_a, int d_b, std::mt19937_64& rng,
                                          int n_samples = 10000, bool optimize = true,
                                          int polish_runs = 50);

struct GramResidual {
  double max_relative = 0;
  int points = 0;
  bool passed = false;  // max_relative < 1e-8
};

// <x|x>^{k-1} <xy|W_raw|xy> = sum_b <w_b|Z_b|w_b> at random unnormalized (x, y).
// The residual is relative to |x|^{2k} |y|^2 sum_b |Z_b|.
GramResidual verify_ksos_identity(const Witness& w, std::mt19937_64& rng, int points = 1000);

// Both sides of the Gram identity at one point.
std::pair<double, double> gram_sides(const Witness& w, const CVector& x, const CVector& y);

// rho_gamma = (A (x) 1) rho (A^dagger (x) 1) / N with A = diag(1, gamma, ..., gamma).
DensityMatrix scale_state(const DensityMatrix& rho, double gamma);
// N for the same filter: Tr[(A (x) 1) rho (A^dagger (x) 1)].
double scale_normalization(const DensityMatrix& rho, double gamma);
// Z_gamma = (A^{-1})^dagger (x) 1 Z A^{-1} (x) 1, so Tr[rho_gamma Z_gamma] = Tr[rho Z] / N.
CMatrix scale_witness(const CMatrix& z, int d_a, int d_b, double gamma);

}  // namespace sepsdp
