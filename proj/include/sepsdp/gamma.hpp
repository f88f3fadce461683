#pragma once

#include "sepsdp/hierarchy.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace sepsdp {

// Level-k verdicts of scale_state(rho, gamma) never change sign on the probed grid.
class NoSignChange : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GammaBracket {
  double lo = 0;  // highest probed gamma whose state still extends
  double hi = 1;  // lowest probed gamma detected Entangled
  std::vector<std::pair<double, TestStatus>> trail;  // every probe, in order
  bool marginal_stop = false;  // bisection stopped on an unclassifiable interior point
};

// Bisection on gamma in (0, 1]. rho must be Entangled at level spec.k for gamma = 1.
// The lower end is found by halving gamma down to gamma_floor.
GammaBracket find_gamma_star(const DensityMatrix& rho, const ExtensionSpec& spec, double tol,
                             const HierarchyOptions& options = {}, double gamma_floor = 1e-3);

}  // namespace sepsdp
