#include "pxinf/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pxinf {

namespace {

// Range of |x - c| over the closure of a domain.
std::pair<double, double> radius_range(const Domain& dom, const Vec2& c) {
  switch (dom.kind) {
    case DomainKind::interval: {
      const double d0 = std::abs(dom.lo[0] - c[0]);
      const double d1 = std::abs(dom.hi[0] - c[0]);
      const bool inside = c[0] >= dom.lo[0] && c[0] <= dom.hi[0];
      return {inside ? 0.0 : std::min(d0, d1), std::max(d0, d1)};
    }
    case DomainKind::rectangle: {
      double near2 = 0.0, far2 = 0.0;
      for (int k = 0; k < 2; ++k) {
        const double lo = dom.lo[k] - c[k], hi = dom.hi[k] - c[k];
        const double nr = std::max({lo, -hi, 0.0});
        const double fr = std::max(std::abs(lo), std::abs(hi));
        near2 += nr * nr;
        far2 += fr * fr;
      }
      return {std::sqrt(near2), std::sqrt(far2)};
    }
    case DomainKind::disc: {
      const double sep = distance(dom.center, c);
      return {std::max(0.0, sep - dom.radius), sep + dom.radius};
    }
  }
  return {0.0, 0.0};
}

}  // namespace

ExponentField::ExponentField(const Geometry& g, ExponentForm form)
    : geometry_(&g), form_(form) {}

ExponentField ExponentField::constant(const Geometry& g, double value) {
  ExponentField f(g, ExponentForm::constant);
  f.offset_ = value;
  f.finalize();
  return f;
}

ExponentField ExponentField::affine(const Geometry& g, double offset, const Vec2& slope) {
  ExponentField f(g, ExponentForm::affine);
  f.offset_ = offset;
  f.slope_ = slope;
  if (g.dimension() == 1 && slope[1] != 0.0)
    throw std::invalid_argument("exponent: 1-D affine form cannot vary in y");
  f.finalize();
  return f;
}

ExponentField ExponentField::radial_affine(const Geometry& g, double offset, double slope,
                                           const Vec2& center) {
  ExponentField f(g, ExponentForm::radial_affine);
  f.offset_ = offset;
  f.rate_ = slope;
  f.center_ = center;
  f.finalize();
  return f;
}

void ExponentField::finalize() {
  // Extremes of the finite part, exact per form. For 2-D affine/radial forms
  // they are taken over the closure of Omega, a safe outer bound for the
  // annulus; shipped scenarios use constants there.
  const Domain& om = geometry_->omega;
  switch (form_) {
    case ExponentForm::constant:
      p_minus_ = p_plus_ = offset_;
      break;
    case ExponentForm::affine: {
      if (om.kind == DomainKind::interval) {
        double a = om.lo[0], b = om.hi[0];
        if (geometry_->d) {
          // Annulus endpoints are exact in one dimension.
          const Domain& d = *geometry_->d;
          if (std::abs(d.lo[0] - om.lo[0]) <= geometry_->tolerance) a = d.hi[0];
          else if (std::abs(d.hi[0] - om.hi[0]) <= geometry_->tolerance) b = d.lo[0];
        }
        const double va = offset_ + slope_[0] * a, vb = offset_ + slope_[0] * b;
        p_minus_ = std::min(va, vb);
        p_plus_ = std::max(va, vb);
      } else if (om.kind == DomainKind::rectangle) {
        double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
        for (double x : {om.lo[0], om.hi[0]})
          for (double y : {om.lo[1], om.hi[1]}) {
            const double v = offset_ + slope_[0] * x + slope_[1] * y;
            vmin = std::min(vmin, v);
            vmax = std::max(vmax, v);
          }
        p_minus_ = vmin;
        p_plus_ = vmax;
      } else {
        const double r = om.radius * norm(slope_);
        const double c = offset_ + dot(slope_, om.center);
        p_minus_ = c - r;
        p_plus_ = c + r;
      }
      break;
    }
    case ExponentForm::radial_affine: {
      auto [rmin, rmax] = radius_range(om, center_);
      const double v0 = offset_ + rate_ * rmin, v1 = offset_ + rate_ * rmax;
      p_minus_ = std::min(v0, v1);
      p_plus_ = std::max(v0, v1);
      break;
    }
  }
  if (!(p_minus_ > geometry_->dimension()))
    throw std::invalid_argument("exponent: need inf p > space dimension");
}

double ExponentField::finite_part(const Vec2& x) const {
  switch (form_) {
    case ExponentForm::constant: return offset_;
    case ExponentForm::affine: return offset_ + dot(slope_, x);
    case ExponentForm::radial_affine: return offset_ + rate_ * distance(x, center_);
  }
  return 0.0;
}

double ExponentField::eval(const Vec2& x) const {
  if (geometry_->d && geometry_->d->signed_distance(x) < -geometry_->tolerance)
    return std::numeric_limits<double>::infinity();
  return finite_part(x);
}

Vec2 ExponentField::grad(const Vec2& x) const {
  switch (form_) {
    case ExponentForm::constant: return {0.0, 0.0};
    case ExponentForm::affine: return slope_;
    case ExponentForm::radial_affine: {
      const double r = distance(x, center_);
      if (r == 0.0) return {0.0, 0.0};
      return {rate_ * (x[0] - center_[0]) / r, rate_ * (x[1] - center_[1]) / r};
    }
  }
  return {0.0, 0.0};
}

TruncatedExponent::TruncatedExponent(const ExponentField& base, double n)
    : base_(&base), n_(n) {
  if (!(n > base.dimension()))
    throw std::invalid_argument("truncate: need n > space dimension");
}

double TruncatedExponent::eval(const Vec2& x) const {
  return std::min(base_->eval(x), n_);
}

TruncatedExponent truncate(const ExponentField& base, double n) {
  return TruncatedExponent(base, n);
}

}  // namespace pxinf
