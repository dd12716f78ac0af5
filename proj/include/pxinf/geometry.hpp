#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace pxinf {

using Vec2 = std::array<double, 2>;

double dot(const Vec2& a, const Vec2& b);
double norm(const Vec2& v);
double distance(const Vec2& a, const Vec2& b);

enum class DomainKind { interval, rectangle, disc };

// Convex reference shapes. `interval` lives on the x-axis; the other two are
// planar. All queries go through the signed distance to the boundary.
struct Domain {
  DomainKind kind = DomainKind::interval;
  Vec2 lo{0.0, 0.0};      // interval / rectangle corners
  Vec2 hi{1.0, 0.0};
  Vec2 center{0.0, 0.0};  // disc
  double radius = 0.0;

  static Domain interval(double a, double b);
  static Domain rectangle(const Vec2& lo, const Vec2& hi);
  static Domain disc(const Vec2& center, double radius);

  int dimension() const;
  double diameter() const;
  double measure() const;
  // Negative inside, positive outside, zero on the boundary.
  double signed_distance(const Vec2& x) const;
};

enum class RegionLabel { d_interior, annulus, interface_boundary, outer_boundary };

std::string to_string(RegionLabel label);

// One quadrature point on the interface, generated from the analytic shape
// (never from the grid). The normal points from D into the annulus.
struct InterfaceSample {
  Vec2 point{0.0, 0.0};
  Vec2 normal{0.0, 0.0};
  double arc_weight = 0.0;
};

// Connected flat piece (or isolated point) of the contact set, the part of
// the outer boundary touched by the closure of D.
struct ContactComponent {
  enum class Kind { point, segment } kind = Kind::point;
  Vec2 a{0.0, 0.0};
  Vec2 b{0.0, 0.0};  // == a for points
  double measure() const;
};

// Outer domain plus the unbounded-exponent subdomain. D may be absent
// (exponent finite everywhere) and may exhaust Omega (no interface left).
struct Geometry {
  Domain omega;
  std::optional<Domain> d;
  double tolerance = 0.0;  // 1e-9 * diam(omega) unless overridden

  Geometry(const Domain& omega, std::optional<Domain> d = std::nullopt);
  int dimension() const;
};

RegionLabel classify_point(const Geometry& g, const Vec2& x);

std::vector<ContactComponent> contact_set(const Geometry& g);
bool contact_empty(const Geometry& g);

struct InterfaceSet {
  std::vector<InterfaceSample> samples;
  bool no_interface = false;  // D absent, or the closure of D covers all of Omega
};
InterfaceSet interface_samples(const Geometry& g, int resolution);

// Arc-length uniform points on the contact set, for boundary-trace scans.
std::vector<Vec2> sample_contact(const Geometry& g, int per_component);

}  // namespace pxinf
