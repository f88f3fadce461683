#pragma once

#include "sepsdp/qlinalg.hpp"

#include <random>

namespace sepsdp::testing {

inline CMatrix random_complex(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix a(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) a(i, j) = Complex(g(rng), g(rng));
  return a;
}

inline CMatrix random_hermitian(Index n, std::mt19937_64& rng) {
  const CMatrix a = random_complex(n, n, rng);
  return 0.5 * (a + a.adjoint());
}

inline CVector random_vector(Index n, std::mt19937_64& rng) { return random_complex(n, 1, rng).col(0); }

}  // namespace sepsdp::testing
