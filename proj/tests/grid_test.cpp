#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "pxinf/grid.hpp"

using namespace pxinf;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("uniform grid bookkeeping on an interval") {
  const Geometry g(Domain::interval(0.0, 1.0), Domain::interval(0.0, 0.5));
  const Grid grid(g, 101);
  CHECK(grid.dimension() == 1);
  CHECK(grid.spacing() == doctest::Approx(0.01));
  CHECK(grid.node_count() == 101);
  CHECK(grid.cell_count() == 100);
  CHECK(grid.node(0)[0] == doctest::Approx(0.0));
  CHECK(grid.node(100)[0] == doctest::Approx(1.0));

  double total = 0.0;
  for (const Cell& c : grid.cells()) total += c.measure;
  CHECK(total == doctest::Approx(1.0));

  CHECK(grid.is_dirichlet(0));
  CHECK(grid.is_dirichlet(100));
  CHECK(grid.free_count() == 99);
}

TEST_CASE("square grid bookkeeping and boundary flags") {
  const Geometry g(Domain::rectangle({0.0, 0.0}, {1.0, 1.0}));
  const int n = 17;
  const Grid grid(g, n);
  CHECK(grid.dimension() == 2);
  CHECK(grid.node_count() == n * n);
  CHECK(grid.cell_count() == (n - 1) * (n - 1));

  int dirichlet = 0;
  for (int k = 0; k < grid.node_count(); ++k) dirichlet += grid.is_dirichlet(k);
  CHECK(dirichlet == 4 * (n - 1));
  CHECK(grid.free_count() + dirichlet == grid.node_count());

  double total = 0.0;
  for (const Cell& c : grid.cells()) total += c.measure;
  CHECK(total == doctest::Approx(1.0));

  // node_index round trip
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Vec2 x = grid.node(grid.node_index(i, j));
      CHECK(x[0] == doctest::Approx(i / double(n - 1)));
      CHECK(x[1] == doctest::Approx(j / double(n - 1)));
    }
}

TEST_CASE("flat D boundaries snap to cell faces within half a spacing") {
  const Geometry g(Domain::interval(0.0, 1.0), Domain::interval(0.0, 0.5));

  // 257 nodes: h = 1/256 and 0.5 is already a face
  const Grid aligned(g, 257);
  CHECK(aligned.snap_distance() == doctest::Approx(0.0));
  CHECK(aligned.d_snapped()->hi[0] == doctest::Approx(0.5));

  // 256 nodes: h = 1/255 and 0.5 falls mid-cell; the snapped face is the
  // nearest multiple of h, no farther than h/2
  const Grid offset(g, 256);
  const double h = offset.spacing();
  const double face = offset.d_snapped()->hi[0];
  CHECK(offset.snap_distance() <= 0.5 * h + 1e-15);
  CHECK(std::abs(face - 0.5) == doctest::Approx(offset.snap_distance()));
  CHECK(std::abs(face / h - std::round(face / h)) <= 1e-9);

  // cells take their label from the snapped geometry
  for (int c = 0; c < offset.cell_count(); ++c) {
    const Cell& cell = offset.cell(c);
    const bool inside = cell.centroid[0] < face;
    CHECK(cell.label == (inside ? RegionLabel::d_interior : RegionLabel::annulus));
  }
}

TEST_CASE("disc D cells are classified by centroid without snapping") {
  const Geometry g(Domain::rectangle({0.0, 0.0}, {1.0, 1.0}),
                   Domain::disc({0.5, 0.5}, 0.25));
  const Grid grid(g, 33);
  CHECK(grid.snap_distance() == 0.0);
  int d_cells = 0;
  for (int c = 0; c < grid.cell_count(); ++c) {
    const Cell& cell = grid.cell(c);
    const bool inside = g.d->signed_distance(cell.centroid) < 0.0;
    CHECK(cell.label == (inside ? RegionLabel::d_interior : RegionLabel::annulus));
    d_cells += inside;
  }
  // area of the disc ~ pi/16 of the square
  CHECK(d_cells > 0.8 * M_PI / 16.0 * grid.cell_count());
  CHECK(d_cells < 1.2 * M_PI / 16.0 * grid.cell_count());
}

TEST_CASE("interpolation reproduces bilinear fields and cell gradients affine ones") {
  const Geometry g(Domain::rectangle({0.0, 0.0}, {1.0, 1.0}));
  const Grid grid(g, 9);
  DiscreteField u = DiscreteField::zeros(grid);
  const auto f = [](const Vec2& x) {
    return 0.3 + 1.7 * x[0] - 0.4 * x[1] + 2.0 * x[0] * x[1];
  };
  for (int k = 0; k < grid.node_count(); ++k) u.values[k] = f(grid.node(k));

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const Vec2 x{coord(rng), coord(rng)};
    CHECK(u.interpolate(x) == doctest::Approx(f(x)).epsilon(1e-12));
  }

  DiscreteField v = DiscreteField::zeros(grid);
  for (int k = 0; k < grid.node_count(); ++k) {
    const Vec2 x = grid.node(k);
    v.values[k] = 2.0 * x[0] - 3.0 * x[1] + 1.0;
  }
  for (int c = 0; c < grid.cell_count(); ++c) {
    const Vec2 gr = cell_gradient(v, c);
    CHECK(gr[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(gr[1] == doctest::Approx(-3.0).epsilon(1e-12));
  }
}

TEST_CASE("boundary data: endpoints, arc-length tables and callables") {
  const Geometry line(Domain::interval(0.0, 1.0));
  const Grid lg(line, 11);
  const BoundaryDatum ep = BoundaryDatum::endpoints(0.0, 0.75);
  CHECK(ep.eval(lg, 0) == doctest::Approx(0.0));
  CHECK(ep.eval(lg, 10) == doctest::Approx(0.75));
  CHECK(datum_range(lg, ep) == doctest::Approx(0.75));

  const Geometry sq(Domain::rectangle({0.0, 0.0}, {1.0, 1.0}));
  const Grid sg(sq, 17);
  // trace of 0.75 x, counterclockwise from the low corner
  const BoundaryDatum table = BoundaryDatum::arclength_table(
      {{0.0, 0.0}, {1.0, 0.75}, {2.0, 0.75}, {3.0, 0.0}, {4.0, 0.0}});
  CHECK(table.eval_point(sq.omega, {0.5, 0.0}) == doctest::Approx(0.375));
  CHECK(table.eval_point(sq.omega, {1.0, 0.3}) == doctest::Approx(0.75));
  CHECK(table.eval_point(sq.omega, {0.25, 1.0}) == doctest::Approx(0.1875));
  CHECK(table.eval_point(sq.omega, {0.0, 0.6}) == doctest::Approx(0.0));
  for (int k = 0; k < sg.node_count(); ++k) {
    if (!sg.is_dirichlet(k)) continue;
    CHECK(table.eval(sg, k) == doctest::Approx(0.75 * sg.node(k)[0]));
  }

  const BoundaryDatum fn = BoundaryDatum::function(
      [](const Vec2& x) { return x[0] - x[1]; });
  CHECK(fn.eval_point(sq.omega, {1.0, 0.25}) == doctest::Approx(0.75));

  // dimension mismatches and malformed tables are rejected
  CHECK_THROWS_AS(table.validate(lg), std::invalid_argument);
  CHECK_THROWS_AS(ep.validate(sg), std::invalid_argument);
  const BoundaryDatum unsorted = BoundaryDatum::arclength_table(
      {{0.0, 0.0}, {2.0, 1.0}, {1.0, 0.5}, {4.0, 0.0}});
  CHECK_THROWS_AS(unsorted.validate(sg), std::invalid_argument);
  const BoundaryDatum short_table =
      BoundaryDatum::arclength_table({{0.0, 0.0}, {2.0, 1.0}});
  CHECK_THROWS_AS(short_table.validate(sg), std::invalid_argument);
}

TEST_CASE("impose_dirichlet touches exactly the boundary nodes") {
  const Geometry sq(Domain::rectangle({0.0, 0.0}, {1.0, 1.0}));
  const Grid grid(sq, 9);
  DiscreteField u = DiscreteField::zeros(grid);
  for (double& v : u.values) v = -5.0;
  const BoundaryDatum table = BoundaryDatum::arclength_table(
      {{0.0, 0.0}, {1.0, 0.75}, {2.0, 0.75}, {3.0, 0.0}, {4.0, 0.0}});
  impose_dirichlet(u, table);
  for (int k = 0; k < grid.node_count(); ++k) {
    if (grid.is_dirichlet(k))
      CHECK(u.values[k] == doctest::Approx(0.75 * grid.node(k)[0]));
    else
      CHECK(u.values[k] == -5.0);
  }
}

TEST_CASE("solution CSV round trips and is byte-stable") {
  const Geometry g(Domain::interval(0.0, 1.0), Domain::interval(0.0, 0.5));
  const Grid grid(g, 33);
  DiscreteField u = DiscreteField::zeros(grid);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  for (double& v : u.values) v = val(rng);

  const auto dir = std::filesystem::temp_directory_path() / "pxinf_grid_test";
  std::filesystem::create_directories(dir);
  const auto a = dir / "a.csv";
  const auto b = dir / "b.csv";
  write_solution_csv(a, u);
  write_solution_csv(b, u);
  CHECK(slurp(a) == slurp(b));

  const DiscreteField back = read_solution_csv(a, grid);
  REQUIRE(back.values.size() == u.values.size());
  for (size_t k = 0; k < u.values.size(); ++k)
    CHECK(back.values[k] == u.values[k]);  // 17 digits: exact round trip

  std::filesystem::remove_all(dir);
}
