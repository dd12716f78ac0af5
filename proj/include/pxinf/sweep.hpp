#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pxinf/minimizer.hpp"

namespace pxinf {

struct SweepRow {
  int n = 0;
  double energy = 0.0;      // F_n(u_n), +inf once the double range is passed
  double log_energy = 0.0;
  double root = 0.0;        // F_n(u_n)^(1/n)
  double d_root = 0.0;      // D-part^(1/n)
  double sup_grad_d = 0.0;  // max cell |grad u| over D
  double sup_diff = 0.0;    // sup |u_n - previous iterate in the chain|
  int iterations = 0;
};

enum class SweepRegime { converged, energy_blowup, undecided };

std::string to_string(SweepRegime r);

struct SweepTolerances {
  double sweep_rtol = 1e-3;    // times the datum range
  double blowup_margin = 0.05;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<SolveStats> stats;
  std::vector<std::string> warnings;
  SweepRegime regime = SweepRegime::undecided;
  DiscreteField final_field;                  // last iterate of the chain
  std::optional<double> blowup_root_estimate;
};

// Warm-started run of solve_n along an increasing schedule of truncation
// levels, with the convergence-vs-blowup verdict of the record.
SweepResult sweep(const Grid& grid, const ExponentField& p, const BoundaryDatum& f,
                  const std::vector<int>& schedule, const SweepTolerances& tol,
                  const SolveConfig& solve_config);

// max over D cells of (|grad u| - 1)+ ; zero once the D constraint holds.
double lipschitz_excess(const DiscreteField& u);

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);

}  // namespace pxinf
