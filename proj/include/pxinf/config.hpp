#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "pxinf/exponent.hpp"
#include "pxinf/grid.hpp"
#include "pxinf/oracle1d.hpp"

namespace pxinf {

struct ToleranceConfig {
  double gradient_rtol = 1e-8;      // times the datum range
  double sweep_rtol = 1e-3;         // times the datum range
  double blowup_margin = 0.05;
  int max_iterations = 20000;
  double transmission_delta = 0.05;
};

// Everything a run needs, in plain serializable form. Geometry, exponent and
// grid objects are built from it on demand (see Problem below).
struct ProblemConfig {
  Domain omega = Domain::interval(0.0, 1.0);
  std::optional<Domain> d;

  ExponentForm exponent_form = ExponentForm::constant;
  double exponent_offset = 4.0;
  Vec2 exponent_slope{0.0, 0.0};   // affine
  double exponent_rate = 0.0;      // radial_affine
  Vec2 exponent_center{0.0, 0.0};  // radial_affine

  // endpoints (1-D) or arc-length table (2-D)
  bool datum_is_table = false;
  double datum_left = 0.0, datum_right = 0.0;
  std::vector<std::pair<double, double>> datum_table;

  int nodes_per_side = 65;
  std::vector<int> schedule{4, 8, 16, 32, 64, 128};
  ToleranceConfig tolerances;

  BoundaryDatum make_datum() const;
};

// All structural errors found in a config document, reported together.
struct ConfigError : std::runtime_error {
  explicit ConfigError(std::vector<std::string> errors);
  std::vector<std::string> errors;
};

ProblemConfig parse_config_text(const std::string& json_text);
ProblemConfig parse_config_file(const std::filesystem::path& path);
std::string config_to_json(const ProblemConfig& config);

// Owning bundle of the live objects a config describes; the members
// reference each other, so they live behind stable pointers.
struct Problem {
  std::unique_ptr<Geometry> geometry;
  std::unique_ptr<ExponentField> exponent;
  std::unique_ptr<Grid> grid;
  BoundaryDatum datum;
  ProblemConfig config;
};

Problem instantiate(const ProblemConfig& config);

// Canonical 1-D reduction for the closed-form oracle; requires the interval
// geometry with D anchored at the left end and an endpoint datum with
// u(0) = 0.
Oracle1DProblem to_oracle_problem(const ProblemConfig& config);

// Named scenarios. The two *_trace presets are feasibility-only inputs and
// expand to point/value tables rather than solver configs.
std::vector<std::string> preset_names();
bool is_trace_preset(const std::string& name);
ProblemConfig make_preset(const std::string& name,
                          const std::map<std::string, std::string>& params = {});

struct TraceSet {
  std::vector<Vec2> points;
  std::vector<double> values;
};
TraceSet make_trace_set(const std::string& name, double resolution);

// Feasible comparison field for presets with a nonempty constraint set: the
// affine interpolant of the datum (slope at most 1 inside D by construction).
// Returns false for presets without one.
bool preset_competitor(const std::string& name, const Grid& grid, DiscreteField* out);

}  // namespace pxinf
