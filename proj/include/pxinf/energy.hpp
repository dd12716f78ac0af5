#pragma once

#include <vector>

#include "pxinf/exponent.hpp"
#include "pxinf/grid.hpp"

namespace pxinf {

// Split of the truncated energy over the D cells and the annulus cells.
// Totals are kept alongside their logarithms so that the report stays usable
// when |grad u|^n overflows the double range; the roots are always computed
// from the log values.
struct EnergyReport {
  double n = 0.0;
  double total = 0.0;
  double log_total = 0.0;     // -inf when total == 0
  double d_part = 0.0;
  double annulus_part = 0.0;
  double log_d_part = 0.0;
  double log_annulus_part = 0.0;
  double energy_root = 0.0;   // total^(1/n)
  double d_root = 0.0;        // d_part^(1/n)
};

EnergyReport eval_energy(const DiscreteField& u, const TruncatedExponent& p);

struct EnergyGradient {
  std::vector<double> values;  // one entry per free node
  bool overflow = false;       // some cell weight left the double range
};

EnergyGradient eval_energy_gradient(const DiscreteField& u, const TruncatedExponent& p);

// Annulus-only energy with the untruncated exponent (the limit functional).
double eval_limit_energy(const DiscreteField& u, const ExponentField& p);

}  // namespace pxinf
