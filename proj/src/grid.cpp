#include "pxinf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pxinf/io.hpp"

namespace pxinf {

namespace {

double snap_coord(double v, double origin, double h, double* worst) {
  const double k = std::round((v - origin) / h);
  const double snapped = origin + k * h;
  *worst = std::max(*worst, std::abs(snapped - v));
  return snapped;
}

}  // namespace

Grid::Grid(const Geometry& geometry, int nodes_per_side) : geometry_(geometry) {
  if (nodes_per_side < 3)
    throw std::invalid_argument("build_grid: need at least 3 nodes per side");
  const Domain& om = geometry.omega;
  if (om.kind == DomainKind::disc)
    throw std::invalid_argument("build_grid: disc-shaped Omega is not griddable");

  dim_ = om.dimension();
  nodes_per_side_ = nodes_per_side;
  const double wx = om.hi[0] - om.lo[0];
  if (dim_ == 2) {
    const double wy = om.hi[1] - om.lo[1];
    if (std::abs(wx - wy) > 1e-12 * std::max(wx, wy))
      throw std::invalid_argument("build_grid: rectangle sides must match (square cells)");
  }
  h_ = wx / (nodes_per_side - 1);
  node_count_ = dim_ == 1 ? nodes_per_side : nodes_per_side * nodes_per_side;

  // Snap a flat D onto cell faces; a disc D keeps its analytic shape.
  if (geometry.d) {
    const Domain& d = *geometry.d;
    if (d.kind == DomainKind::disc) {
      d_snapped_ = d;
      snap_distance_ = 0.0;
    } else {
      double worst = 0.0;
      Domain s = d;
      s.lo[0] = snap_coord(d.lo[0], om.lo[0], h_, &worst);
      s.hi[0] = snap_coord(d.hi[0], om.lo[0], h_, &worst);
      if (dim_ == 2) {
        s.lo[1] = snap_coord(d.lo[1], om.lo[1], h_, &worst);
        s.hi[1] = snap_coord(d.hi[1], om.lo[1], h_, &worst);
      }
      if (!(s.hi[0] > s.lo[0]) || (dim_ == 2 && !(s.hi[1] > s.lo[1])))
        throw std::invalid_argument("build_grid: D collapses under snapping; refine grid");
      if (worst > h_)
        throw std::invalid_argument("build_grid: snap distance exceeds h");
      d_snapped_ = s;
      snap_distance_ = worst;
    }
  }

  const int nc = nodes_per_side - 1;
  const double measure = dim_ == 1 ? h_ : h_ * h_;
  auto label_of = [&](const Vec2& c) {
    if (!d_snapped_) return RegionLabel::annulus;
    // Centroids sit at half-offsets, snapped faces at whole offsets, so the
    // signed distance cannot be an exact tie for flat shapes.
    return d_snapped_->signed_distance(c) <= 0.0 ? RegionLabel::d_interior
                                                 : RegionLabel::annulus;
  };
  if (dim_ == 1) {
    cells_.reserve(nc);
    for (int i = 0; i < nc; ++i) {
      Vec2 c{om.lo[0] + (i + 0.5) * h_, 0.0};
      cells_.push_back({c, measure, label_of(c)});
    }
  } else {
    cells_.reserve(static_cast<size_t>(nc) * nc);
    for (int j = 0; j < nc; ++j)
      for (int i = 0; i < nc; ++i) {
        Vec2 c{om.lo[0] + (i + 0.5) * h_, om.lo[1] + (j + 0.5) * h_};
        cells_.push_back({c, measure, label_of(c)});
      }
  }

  dirichlet_.assign(node_count_, false);
  if (dim_ == 1) {
    dirichlet_[0] = dirichlet_[node_count_ - 1] = true;
  } else {
    for (int j = 0; j < nodes_per_side_; ++j)
      for (int i = 0; i < nodes_per_side_; ++i)
        if (i == 0 || j == 0 || i == nodes_per_side_ - 1 || j == nodes_per_side_ - 1)
          dirichlet_[node_index(i, j)] = true;
  }
  for (int k = 0; k < node_count_; ++k)
    if (!dirichlet_[k]) free_nodes_.push_back(k);
}

std::array<int, 4> Grid::cell_nodes(int c) const {
  if (dim_ == 1) return {c, c + 1, -1, -1};
  const int nc = nodes_per_side_ - 1;
  const int i = c % nc, j = c / nc;
  return {node_index(i, j), node_index(i + 1, j), node_index(i, j + 1),
          node_index(i + 1, j + 1)};
}

Vec2 Grid::node(int idx) const {
  const Domain& om = geometry_.omega;
  if (dim_ == 1) return {om.lo[0] + idx * h_, 0.0};
  const int i = idx % nodes_per_side_, j = idx / nodes_per_side_;
  return {om.lo[0] + i * h_, om.lo[1] + j * h_};
}

Grid build_grid(const Geometry& geometry, int nodes_per_side) {
  return Grid(geometry, nodes_per_side);
}

DiscreteField DiscreteField::zeros(const Grid& g) {
  DiscreteField f;
  f.grid = &g;
  f.values.assign(g.node_count(), 0.0);
  return f;
}

double DiscreteField::interpolate(const Vec2& x) const {
  const Grid& g = *grid;
  const Domain& om = g.geometry().omega;
  const double h = g.spacing();
  const int nc = g.nodes_per_side() - 1;
  auto locate = [&](double v, double origin) {
    int i = static_cast<int>(std::floor((v - origin) / h));
    return std::clamp(i, 0, nc - 1);
  };
  if (g.dimension() == 1) {
    const int i = locate(x[0], om.lo[0]);
    const double t = (x[0] - (om.lo[0] + i * h)) / h;
    return (1.0 - t) * values[i] + t * values[i + 1];
  }
  const int i = locate(x[0], om.lo[0]);
  const int j = locate(x[1], om.lo[1]);
  const double tx = (x[0] - (om.lo[0] + i * h)) / h;
  const double ty = (x[1] - (om.lo[1] + j * h)) / h;
  const double a = values[g.node_index(i, j)];
  const double b = values[g.node_index(i + 1, j)];
  const double c = values[g.node_index(i, j + 1)];
  const double d = values[g.node_index(i + 1, j + 1)];
  return (1.0 - ty) * ((1.0 - tx) * a + tx * b) + ty * ((1.0 - tx) * c + tx * d);
}

Vec2 cell_gradient(const DiscreteField& u, int cell_index) {
  const Grid& g = *u.grid;
  const double h = g.spacing();
  const auto n = g.cell_nodes(cell_index);
  if (g.dimension() == 1)
    return {(u.values[n[1]] - u.values[n[0]]) / h, 0.0};
  const double a = u.values[n[0]], b = u.values[n[1]];
  const double c = u.values[n[2]], d = u.values[n[3]];
  // Gradient of the bilinear interpolant at the centroid: averaged corner
  // differences, exact on affine fields.
  return {((b - a) + (d - c)) / (2.0 * h), ((c - a) + (d - b)) / (2.0 * h)};
}

BoundaryDatum BoundaryDatum::endpoints(double left, double right) {
  BoundaryDatum f;
  f.kind_ = Kind::endpoints;
  f.left_ = left;
  f.right_ = right;
  return f;
}

BoundaryDatum BoundaryDatum::arclength_table(std::vector<std::pair<double, double>> table) {
  BoundaryDatum f;
  f.kind_ = Kind::table;
  f.table_ = std::move(table);
  return f;
}

BoundaryDatum BoundaryDatum::function(std::function<double(const Vec2&)> fn) {
  BoundaryDatum f;
  f.kind_ = Kind::function;
  f.fn_ = std::move(fn);
  return f;
}

namespace {

// Counterclockwise arc length from the low corner of the rectangle.
double node_arclength(const Grid& g, int idx) {
  const Domain& om = g.geometry().omega;
  const double w = om.hi[0] - om.lo[0], hgt = om.hi[1] - om.lo[1];
  const int n = g.nodes_per_side();
  const int i = idx % n, j = idx / n;
  const Vec2 p = g.node(idx);
  if (j == 0) return p[0] - om.lo[0];                       // bottom
  if (i == n - 1) return w + (p[1] - om.lo[1]);             // right
  if (j == n - 1) return w + hgt + (om.hi[0] - p[0]);       // top
  return 2.0 * w + hgt + (om.hi[1] - p[1]);                 // left
}

double point_arclength(const Domain& om, const Vec2& p) {
  const double w = om.hi[0] - om.lo[0], hgt = om.hi[1] - om.lo[1];
  const double db = std::abs(p[1] - om.lo[1]);
  const double dr = std::abs(p[0] - om.hi[0]);
  const double dt = std::abs(p[1] - om.hi[1]);
  const double dl = std::abs(p[0] - om.lo[0]);
  const double dmin = std::min({db, dr, dt, dl});
  if (dmin == db) return p[0] - om.lo[0];
  if (dmin == dr) return w + (p[1] - om.lo[1]);
  if (dmin == dt) return w + hgt + (om.hi[0] - p[0]);
  return 2.0 * w + hgt + (om.hi[1] - p[1]);
}

double eval_table(const std::vector<std::pair<double, double>>& t, double s) {
  auto it = std::upper_bound(t.begin(), t.end(), s,
                             [](double v, const auto& e) { return v < e.first; });
  if (it == t.begin()) return t.front().second;
  if (it == t.end()) return t.back().second;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double span = hi.first - lo.first;
  if (span <= 0.0) return lo.second;
  const double a = (s - lo.first) / span;
  return (1.0 - a) * lo.second + a * hi.second;
}

}  // namespace

void BoundaryDatum::validate(const Grid& grid) const {
  switch (kind_) {
    case Kind::endpoints:
      if (grid.dimension() != 1)
        throw std::invalid_argument("datum: endpoint pair is a 1-D datum");
      return;
    case Kind::table: {
      if (grid.dimension() != 2)
        throw std::invalid_argument("datum: arc-length table is a 2-D datum");
      if (table_.size() < 2)
        throw std::invalid_argument("datum: table needs at least two points");
      if (!std::is_sorted(table_.begin(), table_.end(),
                          [](const auto& a, const auto& b) { return a.first < b.first; }))
        throw std::invalid_argument("datum: table must be sorted by arc length");
      const Domain& om = grid.geometry().omega;
      const double per = 2.0 * (om.hi[0] - om.lo[0] + om.hi[1] - om.lo[1]);
      const double eps = 1e-9 * per;
      if (table_.front().first > eps || table_.back().first < per - eps)
        throw std::invalid_argument("datum: table does not cover the full boundary");
      if (std::abs(table_.front().second - eval_table(table_, per)) >
          1e-9 * std::max(1.0, std::abs(table_.front().second)))
        throw std::invalid_argument("datum: table is discontinuous at the base corner");
      return;
    }
    case Kind::function:
      return;
  }
}

double BoundaryDatum::eval(const Grid& grid, int node_index) const {
  switch (kind_) {
    case Kind::endpoints:
      return node_index == 0 ? left_ : right_;
    case Kind::table:
      return eval_table(table_, node_arclength(grid, node_index));
    case Kind::function:
      return fn_(grid.node(node_index));
  }
  return 0.0;
}

double BoundaryDatum::eval_point(const Domain& omega, const Vec2& x) const {
  switch (kind_) {
    case Kind::endpoints: {
      const double mid = 0.5 * (omega.lo[0] + omega.hi[0]);
      return x[0] < mid ? left_ : right_;
    }
    case Kind::table:
      return eval_table(table_, point_arclength(omega, x));
    case Kind::function:
      return fn_(x);
  }
  return 0.0;
}

void impose_dirichlet(DiscreteField& u, const BoundaryDatum& f) {
  const Grid& g = *u.grid;
  f.validate(g);
  for (int k = 0; k < g.node_count(); ++k)
    if (g.is_dirichlet(k)) u.values[k] = f.eval(g, k);
}

double datum_range(const Grid& grid, const BoundaryDatum& f) {
  f.validate(grid);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int k = 0; k < grid.node_count(); ++k) {
    if (!grid.is_dirichlet(k)) continue;
    const double v = f.eval(grid, k);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

void write_solution_csv(const std::filesystem::path& path, const DiscreteField& u) {
  const Grid& g = *u.grid;
  std::string out = g.dimension() == 1 ? "x,u\n" : "x,y,u\n";
  for (int k = 0; k < g.node_count(); ++k) {
    const Vec2 p = g.node(k);
    out += format_g17(p[0]);
    if (g.dimension() == 2) {
      out += ',';
      out += format_g17(p[1]);
    }
    out += ',';
    out += format_g17(u.values[k]);
    out += '\n';
  }
  atomic_write_text(path, out);
}

DiscreteField read_solution_csv(const std::filesystem::path& path, const Grid& grid) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open solution file: " + path.string());
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty solution file: " + path.string());
  DiscreteField u = DiscreteField::zeros(grid);
  const double tol = 1e-9 * grid.spacing();
  int k = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (k >= grid.node_count())
      throw std::runtime_error("solution file has too many rows");
    std::istringstream ss(line);
    std::string tok;
    double coord[3] = {0, 0, 0};
    int nt = 0;
    while (std::getline(ss, tok, ',') && nt < 3) coord[nt++] = std::stod(tok);
    const int expect = grid.dimension() + 1;
    if (nt != expect) throw std::runtime_error("bad solution row: " + line);
    const Vec2 p = grid.node(k);
    if (std::abs(coord[0] - p[0]) > tol ||
        (grid.dimension() == 2 && std::abs(coord[1] - p[1]) > tol))
      throw std::runtime_error("solution file does not match the grid layout");
    u.values[k] = coord[expect - 1];
    ++k;
  }
  if (k != grid.node_count())
    throw std::runtime_error("solution file has too few rows");
  return u;
}

}  // namespace pxinf
