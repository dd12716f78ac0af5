#include "pxinf/energy.hpp"

#include <cmath>
#include <limits>

namespace pxinf {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Streaming log-sum-exp: keeps the running maximum and a shifted sum so the
// accumulation never overflows whatever the term magnitudes are.
struct LogAccumulator {
  double max_log = kNegInf;
  double shifted_sum = 0.0;

  void add(double log_term) {
    if (log_term == kNegInf) return;
    if (log_term <= max_log) {
      shifted_sum += std::exp(log_term - max_log);
    } else {
      shifted_sum = shifted_sum * std::exp(max_log - log_term) + 1.0;
      max_log = log_term;
    }
  }

  double log_value() const {
    if (max_log == kNegInf) return kNegInf;
    return max_log + std::log(shifted_sum);
  }
};

double log_add(double la, double lb) {
  if (la == kNegInf) return lb;
  if (lb == kNegInf) return la;
  const double m = std::max(la, lb);
  return m + std::log(std::exp(la - m) + std::exp(lb - m));
}

}  // namespace

EnergyReport eval_energy(const DiscreteField& u, const TruncatedExponent& p) {
  const Grid& g = *u.grid;
  LogAccumulator acc_d, acc_a;
  for (int c = 0; c < g.cell_count(); ++c) {
    const Cell& cell = g.cell(c);
    const Vec2 grad = cell_gradient(u, c);
    const double gmag = g.dimension() == 1 ? std::abs(grad[0]) : norm(grad);
    if (gmag == 0.0) continue;  // zero-gradient cells contribute nothing
    const double pc = cell.label == RegionLabel::d_interior
                          ? p.n()
                          : std::min(p.base().finite_part(cell.centroid), p.n());
    // measure * |g|^p / p, assembled in the log domain.
    const double log_term = std::log(cell.measure) + pc * std::log(gmag) - std::log(pc);
    (cell.label == RegionLabel::d_interior ? acc_d : acc_a).add(log_term);
  }

  EnergyReport r;
  r.n = p.n();
  r.log_d_part = acc_d.log_value();
  r.log_annulus_part = acc_a.log_value();
  r.log_total = log_add(r.log_d_part, r.log_annulus_part);
  r.d_part = std::exp(r.log_d_part);
  r.annulus_part = std::exp(r.log_annulus_part);
  r.total = std::exp(r.log_total);
  r.energy_root = r.log_total == kNegInf ? 0.0 : std::exp(r.log_total / r.n);
  r.d_root = r.log_d_part == kNegInf ? 0.0 : std::exp(r.log_d_part / r.n);
  return r;
}

EnergyGradient eval_energy_gradient(const DiscreteField& u, const TruncatedExponent& p) {
  const Grid& g = *u.grid;
  EnergyGradient out;
  std::vector<double> full(g.node_count(), 0.0);
  const double h = g.spacing();

  for (int c = 0; c < g.cell_count(); ++c) {
    const Cell& cell = g.cell(c);
    const Vec2 grad = cell_gradient(u, c);
    const double gmag = g.dimension() == 1 ? std::abs(grad[0]) : norm(grad);
    if (gmag == 0.0) continue;
    const double pc = cell.label == RegionLabel::d_interior
                          ? p.n()
                          : std::min(p.base().finite_part(cell.centroid), p.n());
    // w = measure * |g|^(p-2); evaluated via exp/log to detect overflow.
    const double log_w = std::log(cell.measure) + (pc - 2.0) * std::log(gmag);
    const double w = std::exp(log_w);
    if (!std::isfinite(w)) {
      out.overflow = true;
      continue;
    }
    const auto nodes = g.cell_nodes(c);
    if (g.dimension() == 1) {
      const double flux = w * grad[0] / h;
      full[nodes[0]] -= flux;
      full[nodes[1]] += flux;
    } else {
      const double fx = w * grad[0] / (2.0 * h);
      const double fy = w * grad[1] / (2.0 * h);
      full[nodes[0]] += -fx - fy;
      full[nodes[1]] += fx - fy;
      full[nodes[2]] += -fx + fy;
      full[nodes[3]] += fx + fy;
    }
  }

  out.values.reserve(g.free_count());
  for (int k : g.free_nodes()) out.values.push_back(full[k]);
  return out;
}

double eval_limit_energy(const DiscreteField& u, const ExponentField& p) {
  const Grid& g = *u.grid;
  LogAccumulator acc;
  for (int c = 0; c < g.cell_count(); ++c) {
    const Cell& cell = g.cell(c);
    if (cell.label == RegionLabel::d_interior) continue;
    const Vec2 grad = cell_gradient(u, c);
    const double gmag = g.dimension() == 1 ? std::abs(grad[0]) : norm(grad);
    if (gmag == 0.0) continue;
    const double pc = p.finite_part(cell.centroid);
    acc.add(std::log(cell.measure) + pc * std::log(gmag) - std::log(pc));
  }
  const double lv = acc.log_value();
  return lv == kNegInf ? 0.0 : std::exp(lv);
}

}  // namespace pxinf
