#include "pxinf/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pxinf {

using nlohmann::json;

namespace {

// Collects structural complaints as "path: message" lines.
struct Checker {
  std::vector<std::string> errors;

  void fail(const std::string& path, const std::string& message) {
    errors.push_back(path + ": " + message);
  }

  void check_keys(const json& obj, const std::string& path,
                  std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      bool known = false;
      for (const char* key : allowed)
        if (it.key() == key) known = true;
      if (!known) fail(path + "." + it.key(), "unknown key");
    }
  }

  const json* member(const json& obj, const std::string& path, const char* key,
                     bool required) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) fail(path + "." + key, "missing");
      return nullptr;
    }
    return &*it;
  }

  bool number(const json& value, const std::string& path, double* out) {
    if (!value.is_number()) {
      fail(path, "expected a number");
      return false;
    }
    *out = value.get<double>();
    return true;
  }

  bool integer(const json& value, const std::string& path, int* out) {
    if (!value.is_number_integer()) {
      fail(path, "expected an integer");
      return false;
    }
    *out = value.get<int>();
    return true;
  }

  bool point(const json& value, const std::string& path, Vec2* out) {
    if (!value.is_array() || value.size() != 2 || !value[0].is_number() ||
        !value[1].is_number()) {
      fail(path, "expected [x, y]");
      return false;
    }
    (*out)[0] = value[0].get<double>();
    (*out)[1] = value[1].get<double>();
    return true;
  }

  bool domain(const json& value, const std::string& path, Domain* out) {
    if (!value.is_object()) {
      fail(path, "expected an object");
      return false;
    }
    const json* kind = member(value, path, "kind", true);
    if (!kind) return false;
    if (!kind->is_string()) {
      fail(path + ".kind", "expected a string");
      return false;
    }
    const std::string k = kind->get<std::string>();
    if (k == "interval") {
      check_keys(value, path, {"kind", "bounds"});
      const json* bounds = member(value, path, "bounds", true);
      Vec2 ab{0.0, 0.0};
      if (!bounds || !point(*bounds, path + ".bounds", &ab)) return false;
      if (!(ab[0] < ab[1])) {
        fail(path + ".bounds", "lower bound must be below upper bound");
        return false;
      }
      *out = Domain::interval(ab[0], ab[1]);
      return true;
    }
    if (k == "rectangle") {
      check_keys(value, path, {"kind", "lo", "hi"});
      const json* lo = member(value, path, "lo", true);
      const json* hi = member(value, path, "hi", true);
      Vec2 a{0.0, 0.0}, b{0.0, 0.0};
      bool ok = lo && point(*lo, path + ".lo", &a);
      ok = (hi && point(*hi, path + ".hi", &b)) && ok;
      if (!ok) return false;
      if (!(a[0] < b[0] && a[1] < b[1])) {
        fail(path, "rectangle needs lo < hi in both coordinates");
        return false;
      }
      *out = Domain::rectangle(a, b);
      return true;
    }
    if (k == "disc") {
      check_keys(value, path, {"kind", "center", "radius"});
      const json* center = member(value, path, "center", true);
      const json* radius = member(value, path, "radius", true);
      Vec2 c{0.0, 0.0};
      double r = 0.0;
      bool ok = center && point(*center, path + ".center", &c);
      ok = (radius && number(*radius, path + ".radius", &r)) && ok;
      if (!ok) return false;
      if (!(r > 0.0)) {
        fail(path + ".radius", "radius must be positive");
        return false;
      }
      *out = Domain::disc(c, r);
      return true;
    }
    fail(path + ".kind", "unknown domain kind '" + k + "'");
    return false;
  }
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errs)
    : std::runtime_error([&errs] {
        std::string joined = "config errors:";
        for (const auto& e : errs) joined += "\n  " + e;
        return joined;
      }()),
      errors(std::move(errs)) {}

BoundaryDatum ProblemConfig::make_datum() const {
  if (datum_is_table) return BoundaryDatum::arclength_table(datum_table);
  return BoundaryDatum::endpoints(datum_left, datum_right);
}

ProblemConfig parse_config_text(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("not valid JSON: ") + e.what()});
  }

  Checker c;
  ProblemConfig out;
  if (!doc.is_object()) {
    throw ConfigError({"top level: expected an object"});
  }
  c.check_keys(doc, "$",
               {"geometry", "exponent", "datum", "grid", "schedule", "tolerances"});

  if (const json* geo = c.member(doc, "$", "geometry", true)) {
    if (!geo->is_object()) {
      c.fail("$.geometry", "expected an object");
    } else {
      c.check_keys(*geo, "$.geometry", {"omega", "d"});
      if (const json* om = c.member(*geo, "$.geometry", "omega", true))
        c.domain(*om, "$.geometry.omega", &out.omega);
      if (const json* d = c.member(*geo, "$.geometry", "d", false)) {
        Domain dd = Domain::interval(0.0, 1.0);
        if (c.domain(*d, "$.geometry.d", &dd)) out.d = dd;
      }
    }
  }

  if (const json* exp = c.member(doc, "$", "exponent", true)) {
    if (!exp->is_object()) {
      c.fail("$.exponent", "expected an object");
    } else if (const json* form = c.member(*exp, "$.exponent", "form", true)) {
      const std::string f = form->is_string() ? form->get<std::string>() : "";
      if (f == "constant") {
        c.check_keys(*exp, "$.exponent", {"form", "value"});
        out.exponent_form = ExponentForm::constant;
        if (const json* v = c.member(*exp, "$.exponent", "value", true))
          c.number(*v, "$.exponent.value", &out.exponent_offset);
      } else if (f == "affine") {
        c.check_keys(*exp, "$.exponent", {"form", "offset", "slope"});
        out.exponent_form = ExponentForm::affine;
        if (const json* v = c.member(*exp, "$.exponent", "offset", true))
          c.number(*v, "$.exponent.offset", &out.exponent_offset);
        if (const json* v = c.member(*exp, "$.exponent", "slope", true))
          c.point(*v, "$.exponent.slope", &out.exponent_slope);
      } else if (f == "radial_affine") {
        c.check_keys(*exp, "$.exponent", {"form", "offset", "rate", "center"});
        out.exponent_form = ExponentForm::radial_affine;
        if (const json* v = c.member(*exp, "$.exponent", "offset", true))
          c.number(*v, "$.exponent.offset", &out.exponent_offset);
        if (const json* v = c.member(*exp, "$.exponent", "rate", true))
          c.number(*v, "$.exponent.rate", &out.exponent_rate);
        if (const json* v = c.member(*exp, "$.exponent", "center", true))
          c.point(*v, "$.exponent.center", &out.exponent_center);
      } else {
        c.fail("$.exponent.form", "unknown form '" + f + "'");
      }
    }
  }

  if (const json* datum = c.member(doc, "$", "datum", true)) {
    if (!datum->is_object()) {
      c.fail("$.datum", "expected an object");
    } else if (const json* kind = c.member(*datum, "$.datum", "kind", true)) {
      const std::string k = kind->is_string() ? kind->get<std::string>() : "";
      if (k == "endpoints") {
        c.check_keys(*datum, "$.datum", {"kind", "left", "right"});
        out.datum_is_table = false;
        if (const json* v = c.member(*datum, "$.datum", "left", true))
          c.number(*v, "$.datum.left", &out.datum_left);
        if (const json* v = c.member(*datum, "$.datum", "right", true))
          c.number(*v, "$.datum.right", &out.datum_right);
      } else if (k == "table") {
        c.check_keys(*datum, "$.datum", {"kind", "points"});
        out.datum_is_table = true;
        if (const json* pts = c.member(*datum, "$.datum", "points", true)) {
          if (!pts->is_array()) {
            c.fail("$.datum.points", "expected an array of [s, value] pairs");
          } else {
            for (size_t i = 0; i < pts->size(); ++i) {
              Vec2 sv{0.0, 0.0};
              if (c.point((*pts)[i],
                          "$.datum.points[" + std::to_string(i) + "]", &sv))
                out.datum_table.emplace_back(sv[0], sv[1]);
            }
          }
        }
      } else {
        c.fail("$.datum.kind", "unknown kind '" + k + "'");
      }
    }
  }

  if (const json* grid = c.member(doc, "$", "grid", true)) {
    if (!grid->is_object()) {
      c.fail("$.grid", "expected an object");
    } else {
      c.check_keys(*grid, "$.grid", {"nodes_per_side"});
      if (const json* v = c.member(*grid, "$.grid", "nodes_per_side", true))
        c.integer(*v, "$.grid.nodes_per_side", &out.nodes_per_side);
    }
  }

  if (const json* sched = c.member(doc, "$", "schedule", false)) {
    if (!sched->is_array() || sched->empty()) {
      c.fail("$.schedule", "expected a non-empty array of integers");
    } else {
      out.schedule.clear();
      for (size_t i = 0; i < sched->size(); ++i) {
        int n = 0;
        if (c.integer((*sched)[i], "$.schedule[" + std::to_string(i) + "]", &n))
          out.schedule.push_back(n);
      }
    }
  }

  if (const json* tol = c.member(doc, "$", "tolerances", false)) {
    if (!tol->is_object()) {
      c.fail("$.tolerances", "expected an object");
    } else {
      c.check_keys(*tol, "$.tolerances",
                   {"gradient_rtol", "sweep_rtol", "blowup_margin",
                    "max_iterations", "transmission_delta"});
      auto& t = out.tolerances;
      if (const json* v = c.member(*tol, "$.tolerances", "gradient_rtol", false))
        c.number(*v, "$.tolerances.gradient_rtol", &t.gradient_rtol);
      if (const json* v = c.member(*tol, "$.tolerances", "sweep_rtol", false))
        c.number(*v, "$.tolerances.sweep_rtol", &t.sweep_rtol);
      if (const json* v = c.member(*tol, "$.tolerances", "blowup_margin", false))
        c.number(*v, "$.tolerances.blowup_margin", &t.blowup_margin);
      if (const json* v = c.member(*tol, "$.tolerances", "max_iterations", false))
        c.integer(*v, "$.tolerances.max_iterations", &t.max_iterations);
      if (const json* v =
              c.member(*tol, "$.tolerances", "transmission_delta", false))
        c.number(*v, "$.tolerances.transmission_delta", &t.transmission_delta);
    }
  }

  if (!c.errors.empty()) throw ConfigError(std::move(c.errors));
  return out;
}

ProblemConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file " + path.string()});
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

namespace {

json domain_to_json(const Domain& d) {
  switch (d.kind) {
    case DomainKind::interval:
      return {{"kind", "interval"}, {"bounds", {d.lo[0], d.hi[0]}}};
    case DomainKind::rectangle:
      return {{"kind", "rectangle"},
              {"lo", {d.lo[0], d.lo[1]}},
              {"hi", {d.hi[0], d.hi[1]}}};
    case DomainKind::disc:
      return {{"kind", "disc"},
              {"center", {d.center[0], d.center[1]}},
              {"radius", d.radius}};
  }
  throw std::logic_error("unreachable domain kind");
}

}  // namespace

std::string config_to_json(const ProblemConfig& config) {
  json doc;
  doc["geometry"]["omega"] = domain_to_json(config.omega);
  if (config.d) doc["geometry"]["d"] = domain_to_json(*config.d);

  switch (config.exponent_form) {
    case ExponentForm::constant:
      doc["exponent"] = {{"form", "constant"}, {"value", config.exponent_offset}};
      break;
    case ExponentForm::affine:
      doc["exponent"] = {{"form", "affine"},
                         {"offset", config.exponent_offset},
                         {"slope", {config.exponent_slope[0],
                                    config.exponent_slope[1]}}};
      break;
    case ExponentForm::radial_affine:
      doc["exponent"] = {{"form", "radial_affine"},
                         {"offset", config.exponent_offset},
                         {"rate", config.exponent_rate},
                         {"center", {config.exponent_center[0],
                                     config.exponent_center[1]}}};
      break;
  }

  if (config.datum_is_table) {
    json pts = json::array();
    for (const auto& [s, v] : config.datum_table) pts.push_back({s, v});
    doc["datum"] = {{"kind", "table"}, {"points", pts}};
  } else {
    doc["datum"] = {{"kind", "endpoints"},
                    {"left", config.datum_left},
                    {"right", config.datum_right}};
  }

  doc["grid"]["nodes_per_side"] = config.nodes_per_side;
  doc["schedule"] = config.schedule;
  doc["tolerances"] = {{"gradient_rtol", config.tolerances.gradient_rtol},
                       {"sweep_rtol", config.tolerances.sweep_rtol},
                       {"blowup_margin", config.tolerances.blowup_margin},
                       {"max_iterations", config.tolerances.max_iterations},
                       {"transmission_delta",
                        config.tolerances.transmission_delta}};
  return doc.dump(2) + "\n";
}

Problem instantiate(const ProblemConfig& config) {
  Problem problem;
  problem.config = config;
  problem.geometry = std::make_unique<Geometry>(config.omega, config.d);
  switch (config.exponent_form) {
    case ExponentForm::constant:
      problem.exponent = std::make_unique<ExponentField>(
          ExponentField::constant(*problem.geometry, config.exponent_offset));
      break;
    case ExponentForm::affine:
      problem.exponent = std::make_unique<ExponentField>(ExponentField::affine(
          *problem.geometry, config.exponent_offset, config.exponent_slope));
      break;
    case ExponentForm::radial_affine:
      problem.exponent =
          std::make_unique<ExponentField>(ExponentField::radial_affine(
              *problem.geometry, config.exponent_offset, config.exponent_rate,
              config.exponent_center));
      break;
  }
  problem.grid = std::make_unique<Grid>(*problem.geometry, config.nodes_per_side);
  problem.datum = config.make_datum();
  problem.datum.validate(*problem.grid);
  return problem;
}

Oracle1DProblem to_oracle_problem(const ProblemConfig& config) {
  const double tol = 1e-12;
  if (config.omega.kind != DomainKind::interval ||
      std::abs(config.omega.lo[0]) > tol || std::abs(config.omega.hi[0] - 1.0) > tol)
    throw std::invalid_argument("oracle needs Omega = (0, 1)");
  if (!config.d || std::abs(config.d->lo[0]) > tol)
    throw std::invalid_argument("oracle needs D = (0, xi) anchored at the left end");
  if (config.datum_is_table || std::abs(config.datum_left) > tol)
    throw std::invalid_argument("oracle needs an endpoint datum with u(0) = 0");

  Oracle1DProblem problem;
  problem.xi = config.d->hi[0];
  problem.f1 = config.datum_right;
  switch (config.exponent_form) {
    case ExponentForm::constant:
      problem.p_offset = config.exponent_offset;
      problem.p_slope = 0.0;
      break;
    case ExponentForm::affine:
      problem.p_offset = config.exponent_offset;
      problem.p_slope = config.exponent_slope[0];
      break;
    case ExponentForm::radial_affine: {
      // usable when |x - c| is affine on the annulus, i.e. the kink sits
      // outside (xi, 1)
      const double cx = config.exponent_center[0];
      if (std::abs(config.exponent_center[1]) > tol)
        throw std::invalid_argument("oracle: radial exponent center must be on the axis");
      if (cx <= problem.xi + tol) {
        problem.p_offset = config.exponent_offset - config.exponent_rate * cx;
        problem.p_slope = config.exponent_rate;
      } else if (cx >= 1.0 - tol) {
        problem.p_offset = config.exponent_offset + config.exponent_rate * cx;
        problem.p_slope = -config.exponent_rate;
      } else {
        throw std::invalid_argument(
            "oracle: radial exponent kink lies inside the annulus");
      }
      break;
    }
  }
  problem.validate();
  return problem;
}

}  // namespace pxinf
