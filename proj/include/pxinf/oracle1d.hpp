#pragma once

#include <functional>

#include "pxinf/geometry.hpp"

namespace pxinf {

// One-dimensional model problem on (0,1): exponent +infinity on (0,xi),
// a constant or affine finite exponent on (xi,1), datum u(0)=0, u(1)=f1.
// Minimizers have one flux constant per truncation level; everything here is
// closed-form plus quadrature and stays independent of the grid solver.
struct Oracle1DProblem {
  double xi = 0.5;
  double f1 = 0.75;
  // finite exponent p(s) = p_offset + p_slope * s on (xi, 1)
  double p_offset = 4.0;
  double p_slope = 0.0;

  double exponent(double s) const { return p_offset + p_slope * s; }
  void validate() const;
};

enum class LimitCase { rising, flattening, boundary };
// rising:      f1 > xi, slope 1 on D, flux constant C_inf > 0 on the annulus
// flattening:  f1 < xi, u_inf = K x up to f1/K then flat, zero limit energy
// boundary:    f1 == xi, u_inf = min(x, xi)

struct Oracle1DLimit {
  LimitCase kind = LimitCase::rising;
  double c_inf = 0.0;  // annulus flux constant (rising case; 0 otherwise)
  double slope = 1.0;  // D slope: 1 (rising/boundary) or K = f1/xi
};

// Flux constant C1(n) of the truncated problem from the datum constraint
//   integral_0^1 C^(1/(p_n(s)-1)) ds = f1,
// found by bisection in log C over [-700, 700].
double solve_flux_constant(const Oracle1DProblem& pb, double n);

// Nodal value of the truncated minimizer, u_n(x) = int_0^x C1^(1/(p_n-1)).
double eval_un(const Oracle1DProblem& pb, double n, double c1, double x);

Oracle1DLimit solve_limit(const Oracle1DProblem& pb);

double eval_u_infinity(const Oracle1DProblem& pb, const Oracle1DLimit& lim, double x);

// Limit functional value of u_infinity: int_xi^1 C^(p/(p-1)) / p ds in the
// rising case, zero otherwise.
double limit_energy_exact(const Oracle1DProblem& pb, const Oracle1DLimit& lim);

// Diagnostic K_n = C1(n)^(1/n); tends to the flattening slope K.
double flux_root(double c1, double n);

// Adaptive Simpson quadrature (shared by the oracle and its tests).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol);

}  // namespace pxinf
