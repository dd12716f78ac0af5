#include "pxinf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pxinf {

double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }

double norm(const Vec2& v) { return std::hypot(v[0], v[1]); }

double distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

Domain Domain::interval(double a, double b) {
  if (!(b > a)) throw std::invalid_argument("interval: need a < b");
  Domain d;
  d.kind = DomainKind::interval;
  d.lo = {a, 0.0};
  d.hi = {b, 0.0};
  return d;
}

Domain Domain::rectangle(const Vec2& lo, const Vec2& hi) {
  if (!(hi[0] > lo[0]) || !(hi[1] > lo[1]))
    throw std::invalid_argument("rectangle: need lo < hi componentwise");
  Domain d;
  d.kind = DomainKind::rectangle;
  d.lo = lo;
  d.hi = hi;
  return d;
}

Domain Domain::disc(const Vec2& center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("disc: need radius > 0");
  Domain d;
  d.kind = DomainKind::disc;
  d.center = center;
  d.radius = radius;
  return d;
}

int Domain::dimension() const { return kind == DomainKind::interval ? 1 : 2; }

double Domain::diameter() const {
  switch (kind) {
    case DomainKind::interval: return hi[0] - lo[0];
    case DomainKind::rectangle: return distance(lo, hi);
    case DomainKind::disc: return 2.0 * radius;
  }
  return 0.0;
}

double Domain::measure() const {
  switch (kind) {
    case DomainKind::interval: return hi[0] - lo[0];
    case DomainKind::rectangle: return (hi[0] - lo[0]) * (hi[1] - lo[1]);
    case DomainKind::disc: return std::numbers::pi * radius * radius;
  }
  return 0.0;
}

double Domain::signed_distance(const Vec2& x) const {
  switch (kind) {
    case DomainKind::interval:
      return std::max(lo[0] - x[0], x[0] - hi[0]);
    case DomainKind::rectangle: {
      const double dx = std::max(lo[0] - x[0], x[0] - hi[0]);
      const double dy = std::max(lo[1] - x[1], x[1] - hi[1]);
      if (dx <= 0.0 && dy <= 0.0) return std::max(dx, dy);
      return std::hypot(std::max(dx, 0.0), std::max(dy, 0.0));
    }
    case DomainKind::disc:
      return distance(x, center) - radius;
  }
  return 0.0;
}

std::string to_string(RegionLabel label) {
  switch (label) {
    case RegionLabel::d_interior: return "D_interior";
    case RegionLabel::annulus: return "annulus";
    case RegionLabel::interface_boundary: return "interface";
    case RegionLabel::outer_boundary: return "outer_boundary";
  }
  return "?";
}

double ContactComponent::measure() const {
  return kind == Kind::point ? 0.0 : distance(a, b);
}

namespace {

void check_d_inside(const Domain& omega, const Domain& d, double tol) {
  if (d.dimension() != omega.dimension())
    throw std::invalid_argument("geometry: dimension mismatch between Omega and D");
  // Sufficient checks per supported shape pair; D must sit inside Omega's
  // closure (touching the boundary is allowed).
  if (omega.kind == DomainKind::interval) {
    if (d.lo[0] < omega.lo[0] - tol || d.hi[0] > omega.hi[0] + tol)
      throw std::invalid_argument("geometry: D not contained in Omega");
    return;
  }
  if (omega.kind == DomainKind::rectangle && d.kind == DomainKind::rectangle) {
    if (d.lo[0] < omega.lo[0] - tol || d.lo[1] < omega.lo[1] - tol ||
        d.hi[0] > omega.hi[0] + tol || d.hi[1] > omega.hi[1] + tol)
      throw std::invalid_argument("geometry: D not contained in Omega");
    return;
  }
  if (omega.kind == DomainKind::rectangle && d.kind == DomainKind::disc) {
    if (d.center[0] - d.radius < omega.lo[0] - tol ||
        d.center[1] - d.radius < omega.lo[1] - tol ||
        d.center[0] + d.radius > omega.hi[0] + tol ||
        d.center[1] + d.radius > omega.hi[1] + tol)
      throw std::invalid_argument("geometry: D not contained in Omega");
    return;
  }
  if (omega.kind == DomainKind::disc && d.kind == DomainKind::disc) {
    if (distance(omega.center, d.center) + d.radius > omega.radius + tol)
      throw std::invalid_argument("geometry: D not contained in Omega");
    return;
  }
  throw std::invalid_argument("geometry: unsupported Omega/D shape pair");
}

}  // namespace

Geometry::Geometry(const Domain& omega_, std::optional<Domain> d_)
    : omega(omega_), d(std::move(d_)) {
  if (!(omega.measure() > 0.0))
    throw std::invalid_argument("geometry: Omega must have positive measure");
  tolerance = 1e-9 * omega.diameter();
  if (d) {
    if (!(d->measure() > 0.0))
      throw std::invalid_argument("geometry: D must have positive measure");
    check_d_inside(omega, *d, tolerance);
  }
}

int Geometry::dimension() const { return omega.dimension(); }

RegionLabel classify_point(const Geometry& g, const Vec2& x) {
  const double so = g.omega.signed_distance(x);
  if (so > g.tolerance)
    throw std::invalid_argument("classify_point: point lies outside Omega");
  if (so >= -g.tolerance) return RegionLabel::outer_boundary;
  if (!g.d) return RegionLabel::annulus;
  const double sd = g.d->signed_distance(x);
  if (sd < -g.tolerance) return RegionLabel::d_interior;
  if (sd <= g.tolerance) return RegionLabel::interface_boundary;
  return RegionLabel::annulus;
}

namespace {

// Overlap of [a0,a1] with [b0,b1]; empty -> nullopt.
std::optional<std::pair<double, double>> overlap(double a0, double a1, double b0,
                                                 double b1) {
  const double lo = std::max(a0, b0), hi = std::min(a1, b1);
  if (hi < lo) return std::nullopt;
  return std::make_pair(lo, hi);
}

void push_contact(std::vector<ContactComponent>& out, double lo, double hi,
                  bool vertical, double coord) {
  ContactComponent c;
  if (hi - lo <= 0.0) {
    c.kind = ContactComponent::Kind::point;
    c.a = vertical ? Vec2{coord, lo} : Vec2{lo, coord};
    c.b = c.a;
  } else {
    c.kind = ContactComponent::Kind::segment;
    c.a = vertical ? Vec2{coord, lo} : Vec2{lo, coord};
    c.b = vertical ? Vec2{coord, hi} : Vec2{hi, coord};
  }
  out.push_back(c);
}

}  // namespace

std::vector<ContactComponent> contact_set(const Geometry& g) {
  std::vector<ContactComponent> out;
  if (!g.d) return out;
  const double tol = g.tolerance;
  const Domain& om = g.omega;
  const Domain& d = *g.d;

  if (om.kind == DomainKind::interval) {
    if (std::abs(d.lo[0] - om.lo[0]) <= tol)
      out.push_back({ContactComponent::Kind::point, {om.lo[0], 0.0}, {om.lo[0], 0.0}});
    if (std::abs(d.hi[0] - om.hi[0]) <= tol)
      out.push_back({ContactComponent::Kind::point, {om.hi[0], 0.0}, {om.hi[0], 0.0}});
    return out;
  }

  if (om.kind == DomainKind::rectangle && d.kind == DomainKind::rectangle) {
    // A side of D resting on the matching side of Omega.
    if (std::abs(d.lo[0] - om.lo[0]) <= tol)
      push_contact(out, d.lo[1], d.hi[1], true, om.lo[0]);
    if (std::abs(d.hi[0] - om.hi[0]) <= tol)
      push_contact(out, d.lo[1], d.hi[1], true, om.hi[0]);
    if (std::abs(d.lo[1] - om.lo[1]) <= tol) {
      auto ov = overlap(d.lo[0], d.hi[0], om.lo[0], om.hi[0]);
      if (ov) push_contact(out, ov->first, ov->second, false, om.lo[1]);
    }
    if (std::abs(d.hi[1] - om.hi[1]) <= tol) {
      auto ov = overlap(d.lo[0], d.hi[0], om.lo[0], om.hi[0]);
      if (ov) push_contact(out, ov->first, ov->second, false, om.hi[1]);
    }
    return out;
  }

  if (om.kind == DomainKind::rectangle && d.kind == DomainKind::disc) {
    // Tangency of the disc with a side shows up as an isolated point.
    auto tangent_point = [&](double gap, const Vec2& p) {
      if (std::abs(gap) <= tol)
        out.push_back({ContactComponent::Kind::point, p, p});
    };
    tangent_point(d.center[0] - d.radius - om.lo[0], {om.lo[0], d.center[1]});
    tangent_point(om.hi[0] - d.center[0] - d.radius, {om.hi[0], d.center[1]});
    tangent_point(d.center[1] - d.radius - om.lo[1], {d.center[0], om.lo[1]});
    tangent_point(om.hi[1] - d.center[1] - d.radius, {d.center[0], om.hi[1]});
    return out;
  }

  if (om.kind == DomainKind::disc && d.kind == DomainKind::disc) {
    const double sep = distance(om.center, d.center);
    if (std::abs(sep + d.radius - om.radius) <= tol && sep > 0.0) {
      // Internal tangency along the line of centers.
      Vec2 dir{(d.center[0] - om.center[0]) / sep, (d.center[1] - om.center[1]) / sep};
      Vec2 p{om.center[0] + om.radius * dir[0], om.center[1] + om.radius * dir[1]};
      out.push_back({ContactComponent::Kind::point, p, p});
    }
    return out;
  }

  throw std::invalid_argument("contact_set: unsupported Omega/D shape pair");
}

bool contact_empty(const Geometry& g) { return contact_set(g).empty(); }

InterfaceSet interface_samples(const Geometry& g, int resolution) {
  if (resolution < 1) throw std::invalid_argument("interface_samples: resolution < 1");
  InterfaceSet set;
  if (!g.d) {
    set.no_interface = true;
    return set;
  }
  const double tol = g.tolerance;
  const Domain& om = g.omega;
  const Domain& d = *g.d;

  if (om.kind == DomainKind::interval) {
    // Endpoints of D that lie strictly inside Omega; counting measure.
    if (d.lo[0] > om.lo[0] + tol)
      set.samples.push_back({{d.lo[0], 0.0}, {-1.0, 0.0}, 1.0});
    if (d.hi[0] < om.hi[0] - tol)
      set.samples.push_back({{d.hi[0], 0.0}, {1.0, 0.0}, 1.0});
    set.no_interface = set.samples.empty();
    return set;
  }

  if (om.kind == DomainKind::rectangle && d.kind == DomainKind::rectangle) {
    struct Side {
      bool interior;    // not resting on the matching Omega side
      bool vertical;
      double coord, s0, s1;
      Vec2 normal;
    };
    const Side sides[4] = {
        {std::abs(d.lo[0] - om.lo[0]) > tol, true, d.lo[0], d.lo[1], d.hi[1], {-1.0, 0.0}},
        {std::abs(d.hi[0] - om.hi[0]) > tol, true, d.hi[0], d.lo[1], d.hi[1], {1.0, 0.0}},
        {std::abs(d.lo[1] - om.lo[1]) > tol, false, d.lo[1], d.lo[0], d.hi[0], {0.0, -1.0}},
        {std::abs(d.hi[1] - om.hi[1]) > tol, false, d.hi[1], d.lo[0], d.hi[0], {0.0, 1.0}},
    };
    double total_len = 0.0;
    for (const auto& s : sides)
      if (s.interior) total_len += s.s1 - s.s0;
    if (total_len <= 0.0) {
      set.no_interface = true;
      return set;
    }
    for (const auto& s : sides) {
      if (!s.interior) continue;
      const double len = s.s1 - s.s0;
      // Distribute samples by length, at least one per interior side.
      int k = std::max(1, static_cast<int>(std::lround(resolution * len / total_len)));
      const double w = len / k;
      for (int i = 0; i < k; ++i) {
        const double t = s.s0 + (i + 0.5) * w;
        Vec2 p = s.vertical ? Vec2{s.coord, t} : Vec2{t, s.coord};
        set.samples.push_back({p, s.normal, w});
      }
    }
    return set;
  }

  if (d.kind == DomainKind::disc) {
    // Full circle; midpoint rule in angle. An isolated tangency point has
    // zero arc measure, so no exclusion is needed.
    const double dtheta = 2.0 * std::numbers::pi / resolution;
    for (int i = 0; i < resolution; ++i) {
      const double th = (i + 0.5) * dtheta;
      Vec2 nrm{std::cos(th), std::sin(th)};
      Vec2 p{d.center[0] + d.radius * nrm[0], d.center[1] + d.radius * nrm[1]};
      if (om.signed_distance(p) >= -tol) continue;  // skip contact points
      set.samples.push_back({p, nrm, d.radius * dtheta});
    }
    return set;
  }

  throw std::invalid_argument("interface_samples: unsupported Omega/D shape pair");
}

std::vector<Vec2> sample_contact(const Geometry& g, int per_component) {
  if (per_component < 1)
    throw std::invalid_argument("sample_contact: per_component < 1");
  std::vector<Vec2> pts;
  for (const auto& c : contact_set(g)) {
    if (c.kind == ContactComponent::Kind::point) {
      pts.push_back(c.a);
      continue;
    }
    for (int i = 0; i < per_component; ++i) {
      const double t = (i + 0.5) / per_component;
      pts.push_back({c.a[0] + t * (c.b[0] - c.a[0]), c.a[1] + t * (c.b[1] - c.a[1])});
    }
  }
  return pts;
}

}  // namespace pxinf
