#pragma once

#include <optional>

#include "pxinf/energy.hpp"

namespace pxinf {

struct SolveConfig {
  // Absolute tolerance on the preconditioned gradient norm; callers usually
  // set it to 1e-8 times the datum range.
  double gradient_tolerance = 1e-8;
  int max_iterations = 20000;
  double armijo_constant = 1e-4;
  double backtrack_factor = 0.5;
  // newton: damped Newton on the (convex) truncated energy, the default; the
  // first-order options remain for cross-checks and for the descent property
  // tests. Newton falls back to the diagonal direction on a failed or
  // indefinite factorization.
  enum class Preconditioner { none, diagonal, newton } preconditioner = Preconditioner::newton;
};

struct SolveStats {
  int iterations = 0;
  double final_gradient_norm = 0.0;
  EnergyReport final_energy;
  int line_search_failures = 0;
  // converged: gradient norm reached the tolerance. stagnated: the model
  // decrease of the next step fell below the double-precision resolution of
  // the energy before the tolerance was reached, so no representable step can
  // improve the iterate. The two are mutually exclusive.
  bool converged = false;
  bool stagnated = false;
};

// Discrete 2-harmonic extension of the datum (direct sparse solve); the
// deterministic default starting point of the descent.
DiscreteField initial_guess(const Grid& grid, const BoundaryDatum& f);

// Descent on the truncated energy over the free nodes. Dirichlet values are
// imposed once and never move. Deterministic given config and start.
std::pair<DiscreteField, SolveStats> solve_n(const Grid& grid,
                                             const TruncatedExponent& p,
                                             const BoundaryDatum& f,
                                             const std::optional<DiscreteField>& warm_start,
                                             const SolveConfig& config);

}  // namespace pxinf
