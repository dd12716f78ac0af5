#pragma once

#include "pxinf/geometry.hpp"

namespace pxinf {

enum class ExponentForm { constant, affine, radial_affine };

// Variable exponent on the annulus, +infinity on the D interior. The finite
// part is one of three closed forms so that bounds and spatial gradients are
// exact rather than sampled.
class ExponentField {
 public:
  static ExponentField constant(const Geometry& g, double value);
  static ExponentField affine(const Geometry& g, double offset, const Vec2& slope);
  static ExponentField radial_affine(const Geometry& g, double offset, double slope,
                                     const Vec2& center);

  // +infinity on D's interior, the finite form elsewhere in Omega.
  double eval(const Vec2& x) const;
  // The closed form regardless of region (used for truncation and limits).
  double finite_part(const Vec2& x) const;
  // Spatial gradient of the finite part.
  Vec2 grad(const Vec2& x) const;

  double p_minus() const { return p_minus_; }
  double p_plus() const { return p_plus_; }

  ExponentForm form() const { return form_; }
  const Geometry& geometry() const { return *geometry_; }
  int dimension() const { return geometry_->dimension(); }

 private:
  ExponentField(const Geometry& g, ExponentForm form);
  void finalize();

  const Geometry* geometry_;
  ExponentForm form_;
  double offset_ = 0.0;
  Vec2 slope_{0.0, 0.0};   // affine
  double rate_ = 0.0;      // radial_affine
  Vec2 center_{0.0, 0.0};  // radial_affine
  double p_minus_ = 0.0, p_plus_ = 0.0;
};

// p_n = min(p, n); finite everywhere, equal to n on D.
class TruncatedExponent {
 public:
  TruncatedExponent(const ExponentField& base, double n);
  double n() const { return n_; }
  double eval(const Vec2& x) const;
  const ExponentField& base() const { return *base_; }

 private:
  const ExponentField* base_;
  double n_;
};

TruncatedExponent truncate(const ExponentField& base, double n);

}  // namespace pxinf
