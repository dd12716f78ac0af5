#include "pxinf/oracle1d.hpp"

#include <cmath>
#include <stdexcept>

namespace pxinf {

namespace {

constexpr double kQuadTol = 1e-12;
constexpr double kLogLo = -700.0;
constexpr double kLogHi = 700.0;
constexpr double kLogTol = 1e-12;

double simpson(double fa, double fm, double fb, double a, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double b, double fa,
             double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(fa, flm, fm, a, m);
  const double right = simpson(fm, frm, fb, m, b);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  if (b <= a) return 0.0;
  const double fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
  return adapt(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 48);
}

void Oracle1DProblem::validate() const {
  if (!(xi > 0.0 && xi < 1.0))
    throw std::invalid_argument("oracle1d: need 0 < xi < 1");
  if (!(f1 > 0.0)) throw std::invalid_argument("oracle1d: need f1 > 0");
  if (!(std::min(exponent(xi), exponent(1.0)) > 1.0))
    throw std::invalid_argument("oracle1d: finite exponent must exceed 1 on (xi,1)");
}

namespace {

// integral_0^1 C^(1/(p_n(s)-1)) ds with C = exp(log_c); the D part is exact,
// the annulus part is quadrature (constant exponents collapse immediately).
double datum_integral(const Oracle1DProblem& pb, double n, double log_c) {
  const double d_part = pb.xi * std::exp(log_c / (n - 1.0));
  auto slope = [&](double s) {
    const double p = std::min(pb.exponent(s), n);
    return std::exp(log_c / (p - 1.0));
  };
  return d_part + integrate(slope, pb.xi, 1.0, kQuadTol);
}

double bisect_log_c(const std::function<double(double)>& shortfall) {
  double lo = kLogLo, hi = kLogHi;
  if (!(shortfall(lo) <= 0.0 && shortfall(hi) >= 0.0))
    throw std::runtime_error("oracle1d: flux constant not bracketed in log C");
  while (hi - lo > kLogTol) {
    const double mid = 0.5 * (lo + hi);
    (shortfall(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double solve_flux_constant(const Oracle1DProblem& pb, double n) {
  pb.validate();
  if (!(n > 1.0)) throw std::invalid_argument("oracle1d: need n > 1");
  const double log_c = bisect_log_c(
      [&](double lc) { return datum_integral(pb, n, lc) - pb.f1; });
  return std::exp(log_c);
}

double eval_un(const Oracle1DProblem& pb, double n, double c1, double x) {
  pb.validate();
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("oracle1d: x outside [0,1]");
  const double log_c = std::log(c1);
  const double d_slope = std::exp(log_c / (n - 1.0));
  if (x <= pb.xi) return x * d_slope;
  auto slope = [&](double s) {
    const double p = std::min(pb.exponent(s), n);
    return std::exp(log_c / (p - 1.0));
  };
  return pb.xi * d_slope + integrate(slope, pb.xi, x, kQuadTol);
}

Oracle1DLimit solve_limit(const Oracle1DProblem& pb) {
  pb.validate();
  Oracle1DLimit lim;
  if (pb.f1 > pb.xi) {
    lim.kind = LimitCase::rising;
    lim.slope = 1.0;
    // xi + integral_xi^1 C^(1/(p(s)-1)) ds = f1, untruncated exponent.
    const double log_c = bisect_log_c([&](double lc) {
      auto slope = [&](double s) { return std::exp(lc / (pb.exponent(s) - 1.0)); };
      return pb.xi + integrate(slope, pb.xi, 1.0, kQuadTol) - pb.f1;
    });
    lim.c_inf = std::exp(log_c);
  } else if (pb.f1 < pb.xi) {
    lim.kind = LimitCase::flattening;
    lim.c_inf = 0.0;
    lim.slope = pb.f1 / pb.xi;
  } else {
    lim.kind = LimitCase::boundary;
    lim.c_inf = 0.0;
    lim.slope = 1.0;
  }
  return lim;
}

double eval_u_infinity(const Oracle1DProblem& pb, const Oracle1DLimit& lim, double x) {
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("oracle1d: x outside [0,1]");
  switch (lim.kind) {
    case LimitCase::rising: {
      if (x <= pb.xi) return x;
      const double log_c = std::log(lim.c_inf);
      auto slope = [&](double s) { return std::exp(log_c / (pb.exponent(s) - 1.0)); };
      return pb.xi + integrate(slope, pb.xi, x, kQuadTol);
    }
    case LimitCase::flattening:
      return std::min(lim.slope * x, pb.f1);
    case LimitCase::boundary:
      return std::min(x, pb.xi);
  }
  return 0.0;
}

double limit_energy_exact(const Oracle1DProblem& pb, const Oracle1DLimit& lim) {
  if (lim.kind != LimitCase::rising) return 0.0;
  const double log_c = std::log(lim.c_inf);
  auto density = [&](double s) {
    const double p = pb.exponent(s);
    return std::exp(log_c * p / (p - 1.0)) / p;
  };
  return integrate(density, pb.xi, 1.0, kQuadTol);
}

double flux_root(double c1, double n) { return std::exp(std::log(c1) / n); }

}  // namespace pxinf
