#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pxinf/exponent.hpp"
#include "pxinf/grid.hpp"

namespace pxinf {

// Residuals accept any point-evaluable field so that analytic test fields
// and interpolated grid solutions go through the same stencils.
using ScalarField = std::function<double(const Vec2&)>;

ScalarField field_evaluator(const DiscreteField& u);

// Strong-form residual of the finite-exponent operator in expanded form,
// central differences with the given step. Returns 0 when |grad u| falls
// under the 1e-8 floor (the operator degenerates there).
double pxlap_residual(const ScalarField& u, int dim, const ExponentField& p,
                      const Vec2& x, double step);

// Infinity-Laplacian residual <D2u grad u, grad u> by central differences.
double inflap_residual(const ScalarField& u, int dim, const Vec2& x, double step);

struct TransmissionRecord {
  InterfaceSample sample;
  double grad_d = 0.0;               // |grad u| one cell into D
  double grad_annulus = 0.0;         // |grad u| one cell into the annulus
  double normal_deriv_d = 0.0;
  double normal_deriv_annulus = 0.0;
  bool satisfied = false;
};

// Two-sided probe of the interface condition: satisfied when the attainable
// |grad u| range meets the band [1-delta, 1+delta] or the annulus-side normal
// derivative is below delta * scale.
TransmissionRecord transmission_check(const DiscreteField& u, const InterfaceSample& s,
                                      double delta, double scale);

struct TraceEstimate {
  double estimate = 0.0;
  Vec2 a{0.0, 0.0}, b{0.0, 0.0};  // worst pair
  double value_a = 0.0, value_b = 0.0;
};

// max over point pairs of |f(a)-f(b)| / |a-b| (exhaustive, with pruning).
TraceEstimate trace_lipschitz_estimate(std::span<const Vec2> points,
                                       std::span<const double> values);

enum class FeasibilityVerdict { nonempty_guaranteed, empty_guaranteed, inconclusive };

std::string to_string(FeasibilityVerdict v);

struct FeasibilityReport {
  bool contact_is_empty = false;
  TraceEstimate trace;
  FeasibilityVerdict verdict = FeasibilityVerdict::inconclusive;
};

// Existence screen for the constraint set: an empty contact set guarantees a
// feasible extension; a datum steeper than slope 1 on the contact set rules
// one out; anything else stays inconclusive.
FeasibilityReport assess_feasibility(const Geometry& g, const BoundaryDatum& f,
                                     int resolution);

struct CheckRow {
  Vec2 point{0.0, 0.0};
  RegionLabel region = RegionLabel::annulus;
  std::string kind;   // pxlap | inflap | transmission
  double value = 0.0;
  std::string verdict;  // satisfied | violated | -
};

struct CheckReport {
  std::vector<CheckRow> rows;
  double max_pxlap = 0.0;
  double max_inflap = 0.0;
  int transmission_total = 0;
  int transmission_satisfied = 0;
};

// Residuals on interior cell centroids (two cells clear of any boundary)
// plus the transmission test on analytic interface samples.
CheckReport run_checks(const DiscreteField& u, const ExponentField& p,
                       int interface_resolution, double delta, double scale);

void write_check_csv(const std::filesystem::path& path, const CheckReport& report,
                     int dim);

}  // namespace pxinf
