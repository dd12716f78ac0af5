#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "pxinf/diagnostics.hpp"
#include "pxinf/minimizer.hpp"

using namespace pxinf;

namespace {

const Geometry& line_geometry() {
  static const Geometry g(Domain::interval(0.0, 1.0), Domain::interval(0.0, 0.5));
  return g;
}

const Geometry& disc_geometry() {
  static const Geometry g(Domain::rectangle({0.0, 0.0}, {1.0, 1.0}),
                          Domain::disc({0.5, 0.5}, 0.25));
  return g;
}

DiscreteField fill(const Grid& grid, const std::function<double(const Vec2&)>& f) {
  DiscreteField u = DiscreteField::zeros(grid);
  for (int k = 0; k < grid.node_count(); ++k) u.values[k] = f(grid.node(k));
  return u;
}

}  // namespace

TEST_CASE("finite-exponent residual reduces to the plain Laplacian near p = 2") {
  // constant p kills the log term; p - 2 = 1e-12 leaves the five-point
  // Laplacian up to that factor
  const Geometry& g = disc_geometry();
  const ExponentField p = ExponentField::constant(g, 2.0 + 1e-12);
  const ScalarField u = [](const Vec2& x) {
    return std::sin(1.3 * x[0]) * std::cos(0.7 * x[1]) + 0.5 * x[0] * x[1];
  };
  const double h = 1.0 / 128.0;
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> coord(0.1, 0.9);
  for (int k = 0; k < 50; ++k) {
    const Vec2 x{coord(rng), coord(rng)};
    const double five_point =
        (u({x[0] + h, x[1]}) + u({x[0] - h, x[1]}) + u({x[0], x[1] + h}) +
         u({x[0], x[1] - h}) - 4.0 * u(x)) /
        (h * h);
    const double r = pxlap_residual(u, 2, p, x, h);
    CHECK(r == doctest::Approx(-five_point).epsilon(1e-8));
  }
}

TEST_CASE("finite-exponent residual on affine fields") {
  const Geometry& g = disc_geometry();

  // unit slope: every term carries a zero factor
  const ExponentField affine_p = ExponentField::affine(g, 3.0, {1.0, 0.0});
  const ScalarField unit = [](const Vec2& x) { return x[0] + 0.25; };
  CHECK(std::abs(pxlap_residual(unit, 2, affine_p, {0.3, 0.6}, 1.0 / 128.0)) <=
        1e-9);

  // slope 2 against a varying exponent: only the log term survives
  const ScalarField steep = [](const Vec2& x) { return 2.0 * x[0]; };
  const Vec2 x0{0.3, 0.6};
  const double pc = affine_p.finite_part(x0);
  const double exact =
      -std::pow(2.0, pc - 2.0) * std::log(2.0) * dot({2.0, 0.0}, affine_p.grad(x0));
  const double r_h = pxlap_residual(steep, 2, affine_p, x0, 1.0 / 128.0);
  const double r_h2 = pxlap_residual(steep, 2, affine_p, x0, 1.0 / 256.0);
  CHECK(r_h == doctest::Approx(exact).epsilon(1e-3));
  CHECK(std::abs(r_h2 - exact) <= std::abs(r_h - exact) + 1e-12);
  CHECK(std::abs(exact) > 1.0);  // genuinely nonzero

  // degenerate gradient: the convention returns 0
  const ScalarField flat = [](const Vec2&) { return 4.0; };
  CHECK(pxlap_residual(flat, 2, affine_p, x0, 1.0 / 128.0) == 0.0);
}

TEST_CASE("infinity-Laplacian residual matches symbolic values") {
  const ScalarField affine = [](const Vec2& x) { return 3.0 * x[0] - x[1]; };
  CHECK(std::abs(inflap_residual(affine, 2, {0.4, 0.4}, 1.0 / 64.0)) <= 1e-9);

  // u = x^2: u_x^2 u_xx = (2x)^2 * 2
  const ScalarField sq = [](const Vec2& x) { return x[0] * x[0]; };
  CHECK(inflap_residual(sq, 2, {0.5, 0.5}, 1.0 / 64.0) ==
        doctest::Approx(2.0).epsilon(1e-9));

  // quartic mix, Richardson: the O(h^2) error contracts about fourfold
  const ScalarField quartic = [](const Vec2& x) {
    return std::pow(x[0], 4) + std::pow(x[1], 4) + x[0] * x[0] * x[1] * x[1];
  };
  const auto exact_at = [](const Vec2& x) {
    const double ux = 4.0 * std::pow(x[0], 3) + 2.0 * x[0] * x[1] * x[1];
    const double uy = 4.0 * std::pow(x[1], 3) + 2.0 * x[0] * x[0] * x[1];
    const double uxx = 12.0 * x[0] * x[0] + 2.0 * x[1] * x[1];
    const double uyy = 12.0 * x[1] * x[1] + 2.0 * x[0] * x[0];
    const double uxy = 4.0 * x[0] * x[1];
    return ux * ux * uxx + 2.0 * ux * uy * uxy + uy * uy * uyy;
  };
  const Vec2 x0{0.3, 0.7};
  const double e1 = std::abs(inflap_residual(quartic, 2, x0, 1.0 / 32.0) - exact_at(x0));
  const double e2 = std::abs(inflap_residual(quartic, 2, x0, 1.0 / 64.0) - exact_at(x0));
  CHECK(e1 > 1e-8);  // the step is genuinely resolved, not exact
  CHECK(e2 <= e1 / 3.0 + 1e-12);
}

TEST_CASE("transmission verdicts on reference interface profiles") {
  const Grid grid(line_geometry(), 257);
  const InterfaceSet set = interface_samples(line_geometry(), 4);
  REQUIRE(set.samples.size() == 1);
  const InterfaceSample s = set.samples[0];
  const double delta = 0.05, scale = 1.0;

  // rising limit: slope 1 on D reaches the band
  const DiscreteField rising = fill(grid, [](const Vec2& x) {
    return x[0] <= 0.5 ? x[0] : 0.5 + 0.5 * (x[0] - 0.5);
  });
  CHECK(transmission_check(rising, s, delta, scale).satisfied);

  // flattening limit: |grad| = 0.6 outside the band but the annulus is flat
  const DiscreteField flattening =
      fill(grid, [](const Vec2& x) { return std::min(0.6 * x[0], 0.3); });
  const TransmissionRecord fr = transmission_check(flattening, s, delta, scale);
  CHECK(fr.satisfied);
  CHECK(fr.grad_d == doctest::Approx(0.6).epsilon(1e-6));
  CHECK(std::abs(fr.normal_deriv_annulus) <= delta * scale);

  // steep through-flow: both factors clearly nonzero
  const DiscreteField steep = fill(grid, [](const Vec2& x) { return 2.0 * x[0]; });
  const TransmissionRecord sr = transmission_check(steep, s, delta, scale);
  CHECK(!sr.satisfied);
  CHECK(sr.grad_d == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(sr.normal_deriv_annulus == doctest::Approx(2.0).epsilon(1e-6));

  // verdicts and data are invariant under adding a constant
  DiscreteField shifted = steep;
  for (double& v : shifted.values) v += 11.25;
  const TransmissionRecord sh = transmission_check(shifted, s, delta, scale);
  CHECK(sh.satisfied == sr.satisfied);
  CHECK(sh.grad_d == doctest::Approx(sr.grad_d).epsilon(1e-9));
  DiscreteField shifted_flat = flattening;
  for (double& v : shifted_flat.values) v -= 4.5;
  CHECK(transmission_check(shifted_flat, s, delta, scale).satisfied);
}

TEST_CASE("trace estimate: exact pairs, symmetry, inclusion monotonicity") {
  std::vector<Vec2> pts{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  std::vector<double> vals{0.0, 2.0, 0.5};
  const TraceEstimate e = trace_lipschitz_estimate(pts, vals);
  CHECK(e.estimate == doctest::Approx(2.0));
  CHECK(((e.value_a == 0.0 && e.value_b == 2.0) ||
         (e.value_a == 2.0 && e.value_b == 0.0)));

  // permutation invariance
  std::vector<Vec2> perm{pts[2], pts[0], pts[1]};
  std::vector<double> pvals{vals[2], vals[0], vals[1]};
  CHECK(trace_lipschitz_estimate(perm, pvals).estimate == doctest::Approx(2.0));

  // adding a point can only raise the estimate
  pts.push_back({0.5, 0.0});
  vals.push_back(1.9);
  CHECK(trace_lipschitz_estimate(pts, vals).estimate >= 2.0);

  // coincident points are rejected
  std::vector<Vec2> dup{{0.0, 0.0}, {0.0, 0.0}};
  std::vector<double> dvals{0.0, 1.0};
  CHECK_THROWS_AS(trace_lipschitz_estimate(dup, dvals), std::invalid_argument);
  std::vector<Vec2> single{{0.0, 0.0}};
  std::vector<double> svals{1.0};
  CHECK_THROWS_AS(trace_lipschitz_estimate(single, svals), std::invalid_argument);
}

TEST_CASE("trace estimate pruning agrees with the quadratic scan") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  std::vector<Vec2> pts;
  std::vector<double> vals;
  for (int k = 0; k < 120; ++k) {
    pts.push_back({coord(rng), coord(rng)});
    vals.push_back(std::sin(7.0 * pts.back()[0]) + coord(rng));
  }
  double brute = 0.0;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      brute = std::max(brute, std::abs(vals[i] - vals[j]) / distance(pts[i], pts[j]));
  CHECK(trace_lipschitz_estimate(pts, vals).estimate ==
        doctest::Approx(brute).epsilon(1e-13));
}

TEST_CASE("feasibility verdicts respect their definitions") {
  // D interior to Omega: constant extensions exist whatever the datum
  const FeasibilityReport clear = assess_feasibility(
      disc_geometry(), BoundaryDatum::function([](const Vec2& x) {
        return 5.0 * x[0];
      }),
      256);
  CHECK(clear.contact_is_empty);
  CHECK(clear.verdict == FeasibilityVerdict::nonempty_guaranteed);

  // contact segment with a datum of slope 2 along it: provably empty
  const Geometry touching(Domain::rectangle({0.0, 0.0}, {1.0, 1.0}),
                          Domain::rectangle({0.0, 0.0}, {0.5, 1.0}));
  const FeasibilityReport steep = assess_feasibility(
      touching, BoundaryDatum::function([](const Vec2& x) { return 2.0 * x[1]; }),
      256);
  CHECK(!steep.contact_is_empty);
  CHECK(steep.trace.estimate > 1.01);
  CHECK(steep.verdict == FeasibilityVerdict::empty_guaranteed);

  // gentle datum on the same contact: the screen cannot decide
  const FeasibilityReport gentle = assess_feasibility(
      touching, BoundaryDatum::function([](const Vec2& x) { return 0.5 * x[1]; }),
      256);
  CHECK(gentle.verdict == FeasibilityVerdict::inconclusive);
  CHECK(gentle.trace.estimate <= 1.01);
}

TEST_CASE("check report: unique samples and recomputable aggregates") {
  const Grid grid(line_geometry(), 129);
  const ExponentField p = ExponentField::constant(line_geometry(), 4.0);
  const BoundaryDatum f = BoundaryDatum::endpoints(0.0, 0.75);
  SolveConfig c;
  c.gradient_tolerance = 1e-8 * 0.75;
  auto [u, stats] = solve_n(grid, truncate(p, 32.0), f, std::nullopt, c);
  REQUIRE(stats.converged);

  const CheckReport report = run_checks(u, p, 8, 0.05, 0.75);
  REQUIRE(!report.rows.empty());

  double max_px = 0.0, max_inf = 0.0;
  int trans_total = 0, trans_sat = 0;
  std::set<std::pair<double, std::string>> seen;
  for (const CheckRow& row : report.rows) {
    CHECK(seen.insert({row.point[0], row.kind}).second);  // no duplicates
    if (row.kind == "pxlap") {
      CHECK(row.region == RegionLabel::annulus);
      max_px = std::max(max_px, std::abs(row.value));
    } else if (row.kind == "inflap") {
      CHECK(row.region == RegionLabel::d_interior);
      max_inf = std::max(max_inf, std::abs(row.value));
    } else {
      CHECK(row.kind == "transmission");
      ++trans_total;
      trans_sat += row.verdict == "satisfied";
    }
  }
  CHECK(max_px == report.max_pxlap);
  CHECK(max_inf == report.max_inflap);
  CHECK(trans_total == report.transmission_total);
  CHECK(trans_sat == report.transmission_satisfied);
  CHECK(report.transmission_satisfied <= report.transmission_total);
}
