#include "pxinf/runner.hpp"

#include <cmath>

#include <json.hpp>

#include "pxinf/config.hpp"
#include "pxinf/diagnostics.hpp"
#include "pxinf/io.hpp"
#include "pxinf/sweep.hpp"

namespace pxinf {

namespace {

using nlohmann::json;

json energy_json(const EnergyReport& e) {
  return {{"n", e.n},
          {"total", e.total},
          {"log_total", e.log_total},
          {"d_part", e.d_part},
          {"annulus_part", e.annulus_part},
          {"root", e.energy_root},
          {"d_root", e.d_root}};
}

json point_json(const Vec2& x) { return {x[0], x[1]}; }

const char* case_name(LimitCase c) {
  switch (c) {
    case LimitCase::rising: return "rising";
    case LimitCase::flattening: return "flattening";
    case LimitCase::boundary: return "boundary";
  }
  return "?";
}

bool has_d_cells(const Grid& grid) {
  for (const Cell& c : grid.cells())
    if (c.label == RegionLabel::d_interior) return true;
  return false;
}

double sup_grad_over_d(const DiscreteField& u) {
  double sup = 0.0;
  for (int c = 0; c < u.grid->cell_count(); ++c)
    if (u.grid->cell(c).label == RegionLabel::d_interior)
      sup = std::max(sup, norm(cell_gradient(u, c)));
  return sup;
}

SolveConfig solve_config_for(const ProblemConfig& cfg, const Grid& grid,
                             const BoundaryDatum& datum) {
  SolveConfig sc;
  sc.gradient_tolerance =
      cfg.tolerances.gradient_rtol * std::max(datum_range(grid, datum), 1e-12);
  sc.max_iterations = cfg.tolerances.max_iterations;
  return sc;
}

void write_json(const std::filesystem::path& path, const json& doc) {
  atomic_write_text(path, doc.dump(2) + "\n");
}

int run_solve(const ProblemConfig& cfg, const RunOptions& opt, std::ostream& log) {
  Problem pb = instantiate(cfg);
  const int n = opt.n.value_or(cfg.schedule.back());
  const TruncatedExponent pn = truncate(*pb.exponent, n);
  const SolveConfig sc = solve_config_for(cfg, *pb.grid, pb.datum);
  auto [u, stats] = solve_n(*pb.grid, pn, pb.datum, std::nullopt, sc);

  write_solution_csv(opt.out_dir / "solution.csv", u);
  atomic_write_text(opt.out_dir / "resolved_config.json", config_to_json(cfg));
  json doc{{"command", "solve"},
           {"n", n},
           {"iterations", stats.iterations},
           {"converged", stats.converged},
           {"stagnated", stats.stagnated},
           {"final_gradient_norm", stats.final_gradient_norm},
           {"line_search_failures", stats.line_search_failures},
           {"energy", energy_json(stats.final_energy)},
           {"limit_energy", eval_limit_energy(u, *pb.exponent)},
           {"grid",
            {{"nodes_per_side", cfg.nodes_per_side},
             {"spacing", pb.grid->spacing()},
             {"snap_distance", pb.grid->snap_distance()}}}};
  if (has_d_cells(*pb.grid)) doc["sup_grad_d"] = sup_grad_over_d(u);
  write_json(opt.out_dir / "stats.json", doc);

  log << "solve: n=" << n << " iterations=" << stats.iterations
      << (stats.converged ? " converged"
                          : (stats.stagnated ? " stagnated" : " NOT converged"))
      << " root=" << stats.final_energy.energy_root << "\n";
  return 0;
}

int run_sweep(const ProblemConfig& cfg, const RunOptions& opt, std::ostream& log) {
  Problem pb = instantiate(cfg);
  const SweepTolerances st{cfg.tolerances.sweep_rtol, cfg.tolerances.blowup_margin};
  const SolveConfig sc = solve_config_for(cfg, *pb.grid, pb.datum);
  const SweepResult res = sweep(*pb.grid, *pb.exponent, pb.datum, cfg.schedule, st, sc);

  write_sweep_csv(opt.out_dir / "sweep.csv", res.rows);
  write_solution_csv(opt.out_dir / "solution.csv", res.final_field);
  atomic_write_text(opt.out_dir / "resolved_config.json", config_to_json(cfg));

  json rows = json::array();
  for (size_t i = 0; i < res.rows.size(); ++i) {
    const SweepRow& r = res.rows[i];
    rows.push_back({{"n", r.n},
                    {"root", r.root},
                    {"d_root", r.d_root},
                    {"sup_grad_d", r.sup_grad_d},
                    {"sup_diff", r.sup_diff},
                    {"iterations", r.iterations},
                    {"converged", res.stats[i].converged},
                    {"stagnated", res.stats[i].stagnated}});
  }
  json doc{{"command", "sweep"},
           {"regime", to_string(res.regime)},
           {"warnings", res.warnings},
           {"limit_energy", eval_limit_energy(res.final_field, *pb.exponent)},
           {"rows", rows}};
  if (res.blowup_root_estimate) doc["blowup_root_estimate"] = *res.blowup_root_estimate;
  if (has_d_cells(*pb.grid))
    doc["lipschitz_excess"] = lipschitz_excess(res.final_field);
  write_json(opt.out_dir / "verdict.json", doc);

  log << "sweep: regime=" << to_string(res.regime);
  if (res.blowup_root_estimate) log << " root~" << *res.blowup_root_estimate;
  log << "\n";
  for (const auto& w : res.warnings) log << "warning: " << w << "\n";
  return 0;
}

int run_oracle(const ProblemConfig& cfg, const RunOptions& opt, std::ostream& log) {
  const Oracle1DProblem pb = to_oracle_problem(cfg);
  // point count of the curve; 1001 puts samples on every multiple of 1e-3
  const int points = opt.resolution.value_or(1025);
  if (points < 2) {
    log << "error: --resolution must be at least 2\n";
    return 1;
  }

  const Oracle1DLimit lim = solve_limit(pb);
  json doc{{"command", "oracle1d"},
           {"case", case_name(lim.kind)},
           {"xi", pb.xi},
           {"f1", pb.f1},
           {"c_inf", lim.c_inf},
           {"d_slope", lim.slope},
           {"limit_energy", limit_energy_exact(pb, lim)}};

  std::string csv = "x,u\n";
  if (opt.n) {
    const double c1 = solve_flux_constant(pb, *opt.n);
    doc["n"] = *opt.n;
    doc["c1"] = c1;
    doc["flux_root"] = flux_root(c1, *opt.n);
    for (int i = 0; i < points; ++i) {
      const double x = static_cast<double>(i) / (points - 1);
      csv += format_g17(x) + "," + format_g17(eval_un(pb, *opt.n, c1, x)) + "\n";
    }
  } else {
    for (int i = 0; i < points; ++i) {
      const double x = static_cast<double>(i) / (points - 1);
      csv += format_g17(x) + "," + format_g17(eval_u_infinity(pb, lim, x)) + "\n";
    }
  }
  atomic_write_text(opt.out_dir / "oracle.csv", csv);
  write_json(opt.out_dir / "oracle.json", doc);
  log << "oracle1d: case=" << case_name(lim.kind) << "\n";
  return 0;
}

int run_check(const ProblemConfig& cfg, const RunOptions& opt, std::ostream& log) {
  Problem pb = instantiate(cfg);
  const DiscreteField u = read_solution_csv(opt.out_dir / "solution.csv", *pb.grid);
  const int resolution = opt.resolution.value_or(256);
  const double scale = std::max(datum_range(*pb.grid, pb.datum), 1e-12);
  const CheckReport rep = run_checks(u, *pb.exponent, resolution,
                                     cfg.tolerances.transmission_delta, scale);
  write_check_csv(opt.out_dir / "check.csv", rep, pb.grid->dimension());
  write_json(opt.out_dir / "check.json",
             {{"command", "check"},
              {"max_pxlap_residual", rep.max_pxlap},
              {"max_inflap_residual", rep.max_inflap},
              {"transmission_satisfied", rep.transmission_satisfied},
              {"transmission_total", rep.transmission_total}});
  log << "check: pxlap<=" << rep.max_pxlap << " inflap<=" << rep.max_inflap
      << " transmission " << rep.transmission_satisfied << "/"
      << rep.transmission_total << "\n";
  return 0;
}

int run_feasibility(const RunOptions& opt, std::ostream& log) {
  json doc{{"command", "feasibility"}};
  FeasibilityVerdict verdict = FeasibilityVerdict::inconclusive;

  if (opt.preset && is_trace_preset(*opt.preset)) {
    double resolution = 1e-3;
    for (const auto& [key, value] : opt.params) {
      if (key != "resolution")
        throw std::invalid_argument("preset " + *opt.preset +
                                    " has no parameter '" + key + "'");
      resolution = std::stod(value);
    }
    if (opt.resolution)
      throw std::invalid_argument(
          "trace presets take --param resolution=..., not --resolution");
    const TraceSet set = make_trace_set(*opt.preset, resolution);
    const TraceEstimate est = trace_lipschitz_estimate(set.points, set.values);
    // the scanned set is a constructed trace, not the contact datum, so it
    // never proves the constraint set empty
    verdict = FeasibilityVerdict::inconclusive;
    doc["set"] = "constructed_trace";
    doc["preset"] = *opt.preset;
    doc["resolution"] = resolution;
    doc["point_count"] = set.points.size();
    doc["contact_empty"] = false;
    doc["estimate"] = est.estimate;
    doc["worst_pair"] = {{"a", point_json(est.a)},
                         {"b", point_json(est.b)},
                         {"value_a", est.value_a},
                         {"value_b", est.value_b}};
  } else {
    const ProblemConfig cfg = opt.config_path
                                  ? parse_config_file(*opt.config_path)
                                  : make_preset(*opt.preset, opt.params);
    const Geometry geo(cfg.omega, cfg.d);
    const BoundaryDatum datum = cfg.make_datum();
    const FeasibilityReport rep =
        assess_feasibility(geo, datum, opt.resolution.value_or(512));
    verdict = rep.verdict;
    doc["set"] = "contact_datum";
    doc["contact_empty"] = rep.contact_is_empty;
    doc["estimate"] = rep.trace.estimate;
    doc["worst_pair"] = {{"a", point_json(rep.trace.a)},
                         {"b", point_json(rep.trace.b)},
                         {"value_a", rep.trace.value_a},
                         {"value_b", rep.trace.value_b}};
  }

  doc["verdict"] = to_string(verdict);
  write_json(opt.out_dir / "feasibility.json", doc);
  log << "feasibility: verdict=" << to_string(verdict)
      << " estimate=" << doc["estimate"].get<double>() << "\n";

  if (opt.expect) {
    if (*opt.expect != "nonempty" && *opt.expect != "empty") {
      log << "error: --expect takes nonempty or empty\n";
      return 1;
    }
    const bool contradicted =
        (*opt.expect == "nonempty" && verdict == FeasibilityVerdict::empty_guaranteed) ||
        (*opt.expect == "empty" && verdict == FeasibilityVerdict::nonempty_guaranteed);
    if (contradicted) {
      log << "expectation '" << *opt.expect << "' contradicted by verdict "
          << to_string(verdict) << "\n";
      return 3;
    }
  }
  return 0;
}

}  // namespace

int run_command(const RunOptions& opt, std::ostream& log) {
  try {
    if (opt.out_dir.empty()) {
      log << "error: --out is required\n";
      return 1;
    }
    const bool have_config = opt.config_path.has_value();
    const bool have_preset = opt.preset.has_value();
    if (have_config == have_preset) {
      log << "error: pass exactly one of --config and --preset\n";
      return 1;
    }
    if (have_config && !opt.params.empty()) {
      log << "error: --param only applies to presets\n";
      return 1;
    }

    if (opt.command == "feasibility") return run_feasibility(opt, log);
    if (have_preset && is_trace_preset(*opt.preset)) {
      log << "error: preset " << *opt.preset
          << " is feasibility-only; use the feasibility command\n";
      return 1;
    }

    const ProblemConfig cfg = have_config ? parse_config_file(*opt.config_path)
                                          : make_preset(*opt.preset, opt.params);
    if (opt.command == "solve") return run_solve(cfg, opt, log);
    if (opt.command == "sweep") return run_sweep(cfg, opt, log);
    if (opt.command == "oracle1d") return run_oracle(cfg, opt, log);
    if (opt.command == "check") return run_check(cfg, opt, log);
    log << "error: unknown command '" << opt.command << "'\n";
    return 1;
  } catch (const ConfigError& e) {
    log << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace pxinf
