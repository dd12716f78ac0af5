#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pxinf/config.hpp"
#include "pxinf/diagnostics.hpp"

namespace pxinf {

namespace {

constexpr double kPi = std::numbers::pi;

double param_double(const std::map<std::string, std::string>& params,
                    const std::string& key, double fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  size_t used = 0;
  double value = std::stod(it->second, &used);
  if (used != it->second.size())
    throw std::invalid_argument("parameter " + key + ": cannot parse '" +
                                it->second + "' as a number");
  return value;
}

int param_int(const std::map<std::string, std::string>& params,
              const std::string& key, int fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  size_t used = 0;
  int value = std::stoi(it->second, &used);
  if (used != it->second.size())
    throw std::invalid_argument("parameter " + key + ": cannot parse '" +
                                it->second + "' as an integer");
  return value;
}

void reject_unknown(const std::map<std::string, std::string>& params,
                    std::initializer_list<const char*> allowed,
                    const std::string& preset) {
  for (const auto& [key, value] : params) {
    bool known = false;
    for (const char* a : allowed)
      if (key == a) known = true;
    if (!known)
      throw std::invalid_argument("preset " + preset + " has no parameter '" +
                                  key + "'");
  }
}

// hat profile on the unit circle, zero at angles 0 and pi
double hat_value(double theta) {
  double a = std::fmod(std::abs(theta), 2.0 * kPi);
  if (a > kPi) a = 2.0 * kPi - a;
  return std::min(a, kPi - a);
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"oned_case1",   "oned_case2",      "oned_boundary",
          "strip_slope2", "interior_disc",   "half_disc_trace",
          "tangent_balls_trace"};
}

bool is_trace_preset(const std::string& name) {
  return name == "half_disc_trace" || name == "tangent_balls_trace";
}

ProblemConfig make_preset(const std::string& name,
                          const std::map<std::string, std::string>& params) {
  if (is_trace_preset(name))
    throw std::invalid_argument("preset " + name +
                                " is feasibility-only and has no solver config");

  ProblemConfig c;
  if (name == "oned_case1" || name == "oned_case2" || name == "oned_boundary") {
    reject_unknown(params, {"xi", "f1", "p", "nodes"}, name);
    const double default_f1 =
        name == "oned_case1" ? 0.75 : (name == "oned_case2" ? 0.3 : 0.5);
    const double xi = param_double(params, "xi", 0.5);
    const double f1 = param_double(params, "f1", default_f1);
    c.omega = Domain::interval(0.0, 1.0);
    c.d = Domain::interval(0.0, xi);
    c.exponent_form = ExponentForm::constant;
    c.exponent_offset = param_double(params, "p", 4.0);
    c.datum_is_table = false;
    c.datum_left = 0.0;
    c.datum_right = f1;
    c.nodes_per_side = param_int(params, "nodes", 256);
    c.schedule = {4, 8, 16, 32, 64, 128};
    c.tolerances.max_iterations = 50000;
    return c;
  }

  if (name == "strip_slope2") {
    reject_unknown(params, {"nodes", "p"}, name);
    c.omega = Domain::rectangle({0.0, 0.0}, {1.0, 1.0});
    c.d = Domain::rectangle({0.0, 0.0}, {0.5, 1.0});
    c.exponent_form = ExponentForm::constant;
    c.exponent_offset = param_double(params, "p", 4.0);
    c.datum_is_table = true;
    // trace of 2y on the unit square, by perimeter arc length
    c.datum_table = {{0.0, 0.0}, {1.0, 0.0}, {2.0, 2.0}, {3.0, 2.0}, {4.0, 0.0}};
    c.nodes_per_side = param_int(params, "nodes", 65);
    c.schedule = {4, 8, 16, 32, 64, 128};
    return c;
  }

  if (name == "interior_disc") {
    reject_unknown(params, {"nodes", "p"}, name);
    c.omega = Domain::rectangle({0.0, 0.0}, {1.0, 1.0});
    c.d = Domain::disc({0.5, 0.5}, 0.25);
    c.exponent_form = ExponentForm::constant;
    c.exponent_offset = param_double(params, "p", 4.0);
    c.datum_is_table = true;
    // trace of 0.75 x on the unit square
    c.datum_table = {{0.0, 0.0}, {1.0, 0.75}, {2.0, 0.75}, {3.0, 0.0}, {4.0, 0.0}};
    c.nodes_per_side = param_int(params, "nodes", 65);
    // sup_n |u_{2n} - u_n| decays like 1/n here; the sweep verdict needs the
    // tail below sweep_rtol times the datum range, which takes n ~ 1000.
    c.schedule = {4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048};
    return c;
  }

  throw std::invalid_argument("unknown preset '" + name + "'");
}

TraceSet make_trace_set(const std::string& name, double resolution) {
  if (!(resolution > 0.0 && resolution < 0.5))
    throw std::invalid_argument("trace resolution must lie in (0, 0.5)");
  TraceSet set;

  if (name == "half_disc_trace") {
    // Omega = unit disc, D = right half disc. The reported set is the
    // boundary of Omega \ D: the left half circle carries the given hat
    // datum, the diameter carries the midpoint Lipschitz extension of the
    // contact values on the right half circle.
    std::vector<Vec2> contact_points;
    std::vector<double> contact_values;
    const int khalf = static_cast<int>(std::floor(kPi / 2.0 / resolution));
    for (int k = -khalf; k <= khalf; ++k) {
      const double theta = k * resolution;
      contact_points.push_back({std::cos(theta), std::sin(theta)});
      contact_values.push_back(hat_value(theta));
    }
    const double lip =
        trace_lipschitz_estimate(contact_points, contact_values).estimate;

    const int kleft = static_cast<int>(std::floor(kPi / resolution));
    for (int k = 1; k < kleft; ++k) {
      const double theta = kPi / 2.0 + k * resolution;
      set.points.push_back({std::cos(theta), std::sin(theta)});
      set.values.push_back(hat_value(theta));
    }
    const int kdiam = static_cast<int>(std::floor(2.0 / resolution));
    for (int k = 0; k < kdiam; ++k) {
      const double y = -1.0 + (k + 0.5) * resolution;
      if (y >= 1.0) break;
      const Vec2 x{0.0, y};
      double upper = std::numeric_limits<double>::infinity();
      double lower = -std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < contact_points.size(); ++i) {
        const double d = distance(x, contact_points[i]);
        upper = std::min(upper, contact_values[i] + lip * d);
        lower = std::max(lower, contact_values[i] - lip * d);
      }
      set.points.push_back(x);
      set.values.push_back(0.5 * (upper + lower));
    }
    return set;
  }

  if (name == "tangent_balls_trace") {
    // Omega = unit disc, D = disc of radius 1/2 tangent from inside at
    // (1, 0). Outer circle carries the hat datum (zero at the tangency
    // point), the inner circle carries the zero extension. The tangency
    // point itself is excluded from both families.
    const int kouter = static_cast<int>(std::floor(kPi / resolution));
    for (int k = -kouter; k <= kouter; ++k) {
      if (k == 0) continue;
      const double theta = k * resolution;
      set.points.push_back({std::cos(theta), std::sin(theta)});
      set.values.push_back(hat_value(theta));
    }
    const int kinner = static_cast<int>(std::floor(kPi / (2.0 * resolution)));
    for (int k = -kinner; k <= kinner; ++k) {
      if (k == 0) continue;
      const double phi = 2.0 * k * resolution;
      set.points.push_back({0.5 + 0.5 * std::cos(phi), 0.5 * std::sin(phi)});
      set.values.push_back(0.0);
    }
    return set;
  }

  throw std::invalid_argument("unknown trace preset '" + name + "'");
}

bool preset_competitor(const std::string& name, const Grid& grid,
                       DiscreteField* out) {
  double slope = 0.0;
  if (name == "oned_case1")
    slope = 0.75;
  else if (name == "oned_case2")
    slope = 0.3;
  else if (name == "oned_boundary")
    slope = 0.5;
  else if (name == "interior_disc")
    slope = 0.75;
  else
    return false;

  *out = DiscreteField::zeros(grid);
  for (int i = 0; i < grid.node_count(); ++i)
    out->values[i] = slope * grid.node(i)[0];
  return true;
}

}  // namespace pxinf
