#pragma once

#include "sepsdp/qlinalg.hpp"

#include <functional>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace sepsdp {

// Lambda(rho) = Tr_in[L (rho^T (x) 1_out)], so <k|Lambda(|i><j|)|l> = <i k| L |j l>.
// L lives on [in, out].
struct LinearMap {
  int in_dim = 0, out_dim = 0;
  CMatrix choi;
};

LinearMap map_from_operator(const CMatrix& l, int in_dim, int out_dim);
const CMatrix& operator_from_map(const LinearMap& m);
// Rebuilds L from the action on matrix units.
CMatrix operator_from_action(const std::function<CMatrix(const CMatrix&)>& f, int in_dim, int out_dim);

CMatrix apply_map(const LinearMap& m, const CMatrix& rho);

// The same operator read as A -> B (L = W) or B -> A (factors swapped).
enum class MapDirection { AtoB, BtoA };
LinearMap map_from_witness(const CMatrix& w, int d_a, int d_b, MapDirection direction);

LinearMap identity_map(int d);
LinearMap transpose_map(int d);

// Rescales the output so Lambda(1) = 1: L -> (1 (x) M^{-1/2}) L (1 (x) M^{-1/2}), M = Lambda(1).
LinearMap normalize_unital(const LinearMap& m);
// (1 - alpha) m0 + alpha m1.
LinearMap mix_maps(const LinearMap& m0, const LinearMap& m1, double alpha);

// Operator of the composition with rho -> pi_k (rho (x) 1^{(x) k-1}) pi_k, in
// [in, Sym^k(out)] coordinates (occupation-number basis): size in * C(out + k - 1, k).
CMatrix compose_with_symmetric_embedding(const LinearMap& m, int k, Index cap = 4000);

enum class PositivityVerdict { CompletelyPositive, StrictlyPositiveCertified, NotPositive, Undetermined };
const char* to_string(PositivityVerdict v);

struct PositivityReport {
  PositivityVerdict verdict = PositivityVerdict::Undetermined;
  double choi_min_eigenvalue = 0;
  int certified_k = 0;  // first k whose composed operator is PSD; 0 when none up to k_max
  int k_max = 0;
  std::vector<std::pair<int, double>> per_k_min_eigenvalues;
  std::optional<CMatrix> violation_input;  // sigma >= 0 with lambda_min(Lambda(sigma)) <= -1e-9
  double violation_value = 0;              // smallest lambda_min(Lambda(|x><x|)) found
};

// CP test on L, then a sampled and polished search for a positivity violation,
// then the composed operators for k = 1..k_max.
PositivityReport check_strict_positivity(const LinearMap& m, int k_max, std::mt19937_64& rng,
                                         int samples = 10000, int polish_runs = 50);

// Largest alpha with (1 - alpha) C0 + alpha C1 >= 0 for the composed operators at level k:
// 1 / lambda_max(C0^{-1/2} (C0 - C1) C0^{-1/2}), or 1 when that lambda_max <= 0.
double alpha_threshold(const LinearMap& m0, const LinearMap& m1, int k);

// The tracial map Tr[rho] 1/3 and the unital map of the analytic 3x3 Choi witness.
LinearMap table1_base_map();
LinearMap table1_witness_map();
std::vector<std::pair<int, double>> table1(int k_max = 8);

}  // namespace sepsdp
