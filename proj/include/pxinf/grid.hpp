#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "pxinf/geometry.hpp"

namespace pxinf {

struct Cell {
  Vec2 centroid{0.0, 0.0};
  double measure = 0.0;
  RegionLabel label = RegionLabel::annulus;  // cells are D_interior or annulus
};

// Uniform tensor grid over an interval or rectangle. Nodal unknowns live at
// grid points; the energy is assembled cell by cell. A flat D is snapped to
// the nearest cell faces so the exponent jump is resolved exactly; a disc D
// is classified per cell centroid.
class Grid {
 public:
  Grid(const Geometry& geometry, int nodes_per_side);

  int dimension() const { return dim_; }
  int nodes_per_side() const { return nodes_per_side_; }
  double spacing() const { return h_; }
  int node_count() const { return node_count_; }
  int cell_count() const { return static_cast<int>(cells_.size()); }

  const Geometry& geometry() const { return geometry_; }
  const std::optional<Domain>& d_snapped() const { return d_snapped_; }
  double snap_distance() const { return snap_distance_; }

  const std::vector<Cell>& cells() const { return cells_; }
  const Cell& cell(int c) const { return cells_[c]; }

  // Corner node ids of a cell: 1-D {i, i+1}; 2-D {a, b, c, d} for
  // (i,j), (i+1,j), (i,j+1), (i+1,j+1).
  std::array<int, 4> cell_nodes(int c) const;

  Vec2 node(int idx) const;
  int node_index(int i, int j) const { return j * nodes_per_side_ + i; }

  bool is_dirichlet(int node) const { return dirichlet_[node]; }
  const std::vector<int>& free_nodes() const { return free_nodes_; }
  int free_count() const { return static_cast<int>(free_nodes_.size()); }

 private:
  Geometry geometry_;
  int dim_ = 1;
  int nodes_per_side_ = 0;
  double h_ = 0.0;
  int node_count_ = 0;
  std::optional<Domain> d_snapped_;
  double snap_distance_ = 0.0;
  std::vector<Cell> cells_;
  std::vector<bool> dirichlet_;
  std::vector<int> free_nodes_;
};

Grid build_grid(const Geometry& geometry, int nodes_per_side);

struct DiscreteField {
  const Grid* grid = nullptr;
  std::vector<double> values;

  static DiscreteField zeros(const Grid& g);
  // Piecewise (bi)linear interpolation; x must lie in Omega's closure.
  double interpolate(const Vec2& x) const;
};

Vec2 cell_gradient(const DiscreteField& u, int cell_index);

// Boundary datum: endpoint pair in 1-D, a piecewise-linear table in boundary
// arc length (counterclockwise from the low corner) in 2-D, or an arbitrary
// callable trace for analytic data.
class BoundaryDatum {
 public:
  static BoundaryDatum endpoints(double left, double right);
  static BoundaryDatum arclength_table(std::vector<std::pair<double, double>> table);
  static BoundaryDatum function(std::function<double(const Vec2&)> f);

  double eval(const Grid& grid, int node_index) const;
  // Trace value at an arbitrary point of the outer boundary (feasibility
  // scans sample the contact set, not grid nodes).
  double eval_point(const Domain& omega, const Vec2& x) const;
  void validate(const Grid& grid) const;

  enum class Kind { endpoints, table, function };
  Kind kind() const { return kind_; }
  const std::vector<std::pair<double, double>>& table() const { return table_; }
  std::pair<double, double> endpoint_values() const { return {left_, right_}; }

 private:
  Kind kind_ = Kind::endpoints;
  double left_ = 0.0, right_ = 0.0;
  std::vector<std::pair<double, double>> table_;
  std::function<double(const Vec2&)> fn_;
};

// Overwrite Dirichlet nodes with the datum trace; interior untouched.
void impose_dirichlet(DiscreteField& u, const BoundaryDatum& f);

// max - min of the imposed trace, the natural scale for tolerances.
double datum_range(const Grid& grid, const BoundaryDatum& f);

void write_solution_csv(const std::filesystem::path& path, const DiscreteField& u);
DiscreteField read_solution_csv(const std::filesystem::path& path, const Grid& grid);

}  // namespace pxinf
