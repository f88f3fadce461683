#pragma once

#include "sepsdp/layout.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sepsdp {

// 3x3 family: 2/7 |psi+><psi+| + alpha/7 sigma+ + (5 - alpha)/7 V sigma+ V, 0 <= alpha <= 5.
DensityMatrix choi_state(double alpha);
// Tr[W rho_alpha] = (3 - alpha) / 7.
CMatrix choi_witness();

// 4x4 family, alpha >= 0; PPT iff alpha >= 2 sqrt 2.
DensityMatrix gisin_state(double alpha);
// Tr[W rho_alpha] = -2 (sqrt2 - 1) / (2 + alpha).
CMatrix gisin_witness();

DensityMatrix maximally_mixed(int d_a, int d_b);
// (|00> + |11> + ...)/sqrt d on d x d.
DensityMatrix maximally_entangled(int d);

struct ProductTerm {
  double p = 0;
  CVector psi, phi;
};

// sum_i p_i |psi_i><psi_i| (x) |phi_i><phi_i|; weights sum to 1, vectors unit norm.
struct ProductEnsemble {
  std::vector<ProductTerm> terms;

  void validate() const;
  int dim_a() const;
  int dim_b() const;
};

DensityMatrix from_ensemble(const ProductEnsemble& e);
// sum_i p_i |psi_i><psi_i|^{(x) k} (x) |phi_i><phi_i| on [d_A x k, d_B].
CMatrix separable_extension(const ProductEnsemble& e, int k);
ProductEnsemble random_ensemble(int d_a, int d_b, int terms, std::uint64_t seed);

// G G^dagger / Tr with G a d_A d_B x rank complex Ginibre matrix drawn from mt19937_64(seed).
DensityMatrix random_state(int d_a, int d_b, int rank, std::uint64_t seed);

// Named entries for the CLI catalog; param is ignored by parameterless entries.
struct CatalogEntry {
  std::string name;
  std::string description;
  bool has_param = false;
  double default_param = 0;
  bool is_state = true;
};

const std::vector<CatalogEntry>& catalog();
// Throws std::invalid_argument on an unknown name or a parameter outside the family's range.
CMatrix catalog_matrix(const std::string& name, double param, std::vector<int>& dims);

}  // namespace sepsdp
