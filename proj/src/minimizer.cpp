#include "pxinf/minimizer.hpp"

#include <Eigen/Sparse>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pxinf {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<int> free_slot_map(const Grid& g) {
  std::vector<int> slot(g.node_count(), -1);
  const auto& fn = g.free_nodes();
  for (size_t s = 0; s < fn.size(); ++s) slot[fn[s]] = static_cast<int>(s);
  return slot;
}

std::vector<std::pair<int, int>> node_neighbors(const Grid& g, int node) {
  std::vector<std::pair<int, int>> nb;
  if (g.dimension() == 1) {
    nb = {{node - 1, 0}, {node + 1, 0}};
  } else {
    const int n = g.nodes_per_side();
    const int i = node % n, j = node / n;
    if (i > 0) nb.push_back({g.node_index(i - 1, j), 0});
    if (i < n - 1) nb.push_back({g.node_index(i + 1, j), 0});
    if (j > 0) nb.push_back({g.node_index(i, j - 1), 0});
    if (j < n - 1) nb.push_back({g.node_index(i, j + 1), 0});
  }
  return nb;
}

}  // namespace

DiscreteField initial_guess(const Grid& grid, const BoundaryDatum& f) {
  DiscreteField u = DiscreteField::zeros(grid);
  impose_dirichlet(u, f);

  // A constant trace extends to the exact constant; skip the solve so cell
  // gradients vanish identically.
  if (datum_range(grid, f) == 0.0) {
    const double c = u.values[0];
    std::fill(u.values.begin(), u.values.end(), c);
    return u;
  }

  const auto slot = free_slot_map(grid);
  const int m = grid.free_count();
  Eigen::SparseMatrix<double> A(m, m);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(m) * 5);

  for (int s = 0; s < m; ++s) {
    const int node = grid.free_nodes()[s];
    const auto nbs = node_neighbors(grid, node);
    trip.emplace_back(s, s, static_cast<double>(nbs.size()));
    for (const auto& [nb, _] : nbs) {
      if (slot[nb] >= 0)
        trip.emplace_back(s, slot[nb], -1.0);
      else
        b[s] += u.values[nb];
    }
  }
  A.setFromTriplets(trip.begin(), trip.end());

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("initial_guess: factorization failed");
  Eigen::VectorXd x = solver.solve(b);
  for (int s = 0; s < m; ++s) u.values[grid.free_nodes()[s]] = x[s];
  return u;
}

namespace {

// Diagonal of the exponent-2 stiffness matrix over free nodes.
std::vector<double> stiffness_diagonal(const Grid& g) {
  std::vector<double> full(g.node_count(), 0.0);
  const double h = g.spacing();
  for (int c = 0; c < g.cell_count(); ++c) {
    const double meas = g.cell(c).measure;
    const auto nodes = g.cell_nodes(c);
    if (g.dimension() == 1) {
      const double w = meas / (h * h);
      full[nodes[0]] += w;
      full[nodes[1]] += w;
    } else {
      const double w = meas * 2.0 / (4.0 * h * h);  // |dgx|^2 + |dgy|^2
      for (int k = 0; k < 4; ++k) full[nodes[k]] += w;
    }
  }
  std::vector<double> diag;
  diag.reserve(g.free_count());
  for (int k : g.free_nodes()) diag.push_back(full[k]);
  return diag;
}

// Armijo test E_trial <= E - c*t*q carried out on log energies so that it
// stays exact when the linear-scale totals have overflowed.
bool armijo_accept(double log_e, double log_e_trial, double ctq) {
  if (log_e == kNegInf) return false;
  if (ctq <= 0.0) return log_e_trial <= log_e;
  const double log_ctq = std::log(ctq);
  if (log_ctq >= log_e) return log_e_trial == kNegInf;
  const double rhs = log_e + std::log1p(-std::exp(log_ctq - log_e));
  return log_e_trial <= rhs;
}

// Newton machinery: the energy Hessian restricted to the free nodes has the
// per-cell form B^T (a I + a (p-2) e e^T) B with a = meas |g|^(p-2) and
// e = g/|g|; the sparsity pattern never changes, so the symbolic analysis is
// done once and only the factorization repeats.
struct NewtonContext {
  Eigen::SparseMatrix<double> H;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  std::vector<Eigen::Triplet<double>> trip;
  bool analyzed = false;
};

bool newton_direction(const Grid& g, const TruncatedExponent& p, const DiscreteField& u,
                      const std::vector<double>& grad_free,
                      const std::vector<double>& d2, const std::vector<int>& slot,
                      NewtonContext& ctx, std::vector<double>& direction) {
  const int m = g.free_count();
  const double h = g.spacing();
  ctx.trip.clear();

  for (int c = 0; c < g.cell_count(); ++c) {
    const Cell& cell = g.cell(c);
    const Vec2 grad = cell_gradient(u, c);
    const double gmag = g.dimension() == 1 ? std::abs(grad[0]) : norm(grad);
    const double pc = cell.label == RegionLabel::d_interior
                          ? p.n()
                          : std::min(p.base().finite_part(cell.centroid), p.n());
    double a = 0.0, ex = 0.0, ey = 0.0;
    if (gmag > 0.0) {
      a = std::exp(std::log(cell.measure) + (pc - 2.0) * std::log(gmag));
      if (!std::isfinite(a)) return false;
      ex = grad[0] / gmag;
      ey = grad[1] / gmag;
    } else if (std::abs(pc - 2.0) < 1e-14) {
      a = cell.measure;  // quadratic cell; curvature survives at zero gradient
    }
    const auto nodes = g.cell_nodes(c);
    if (g.dimension() == 1) {
      const double k = a * (pc - 1.0) / (h * h);
      const int s0 = slot[nodes[0]], s1 = slot[nodes[1]];
      if (s0 >= 0) ctx.trip.emplace_back(s0, s0, k);
      if (s1 >= 0) ctx.trip.emplace_back(s1, s1, k);
      if (s0 >= 0 && s1 >= 0) {
        ctx.trip.emplace_back(s0, s1, -k);
        ctx.trip.emplace_back(s1, s0, -k);
      }
    } else {
      static constexpr double sx[4] = {-1.0, 1.0, -1.0, 1.0};
      static constexpr double sy[4] = {-1.0, -1.0, 1.0, 1.0};
      const double m00 = a * (1.0 + (pc - 2.0) * ex * ex);
      const double m01 = a * (pc - 2.0) * ex * ey;
      const double m11 = a * (1.0 + (pc - 2.0) * ey * ey);
      const double inv = 1.0 / (4.0 * h * h);
      for (int r = 0; r < 4; ++r) {
        const int sr = slot[nodes[r]];
        if (sr < 0) continue;
        for (int cc = 0; cc < 4; ++cc) {
          const int sc = slot[nodes[cc]];
          if (sc < 0) continue;
          ctx.trip.emplace_back(
              sr, sc,
              inv * (m00 * sx[r] * sx[cc] + m01 * (sx[r] * sy[cc] + sy[r] * sx[cc]) +
                     m11 * sy[r] * sy[cc]));
        }
      }
    }
  }
  // Diagonal floor keeps the factorization definite where every adjacent
  // cell is flat; 1e-12 of the quadratic stiffness never distorts a healthy
  // Newton direction.
  for (int s = 0; s < m; ++s) ctx.trip.emplace_back(s, s, 1e-12 * d2[s]);

  ctx.H.resize(m, m);
  ctx.H.setFromTriplets(ctx.trip.begin(), ctx.trip.end());
  if (!ctx.analyzed) {
    ctx.ldlt.analyzePattern(ctx.H);
    ctx.analyzed = true;
  }
  ctx.ldlt.factorize(ctx.H);
  if (ctx.ldlt.info() != Eigen::Success) return false;
  const Eigen::Map<const Eigen::VectorXd> gv(grad_free.data(), m);
  const Eigen::VectorXd d = ctx.ldlt.solve(gv);
  if (!d.allFinite()) return false;
  direction.assign(d.data(), d.data() + m);
  return true;
}

}  // namespace

std::pair<DiscreteField, SolveStats> solve_n(const Grid& grid,
                                             const TruncatedExponent& p,
                                             const BoundaryDatum& f,
                                             const std::optional<DiscreteField>& warm_start,
                                             const SolveConfig& config) {
  if (!(config.gradient_tolerance > 0.0) || config.max_iterations < 0 ||
      !(config.armijo_constant > 0.0 && config.armijo_constant < 1.0) ||
      !(config.backtrack_factor > 0.0 && config.backtrack_factor < 1.0))
    throw std::invalid_argument("solve_n: invalid solver configuration");

  DiscreteField u = warm_start ? *warm_start : initial_guess(grid, f);
  if (warm_start) {
    if (u.grid != &grid || u.values.size() != static_cast<size_t>(grid.node_count()))
      throw std::invalid_argument("solve_n: warm start does not match the grid");
    impose_dirichlet(u, f);  // boundary values are authoritative
  }

  SolveStats stats;
  const int m = grid.free_count();
  const double hdim = std::pow(grid.spacing(), grid.dimension());
  const bool use_newton = config.preconditioner == SolveConfig::Preconditioner::newton;
  std::vector<double> precond;  // diagonal preconditioner and Newton fallback
  if (config.preconditioner != SolveConfig::Preconditioner::none)
    precond = stiffness_diagonal(grid);
  const auto slot = free_slot_map(grid);
  NewtonContext newton;

  EnergyReport energy = eval_energy(u, p);
  std::vector<double> direction(m);
  DiscreteField trial = u;
  double step = 1.0;

  for (int iter = 0;; ++iter) {
    EnergyGradient grad = eval_energy_gradient(u, p);
    if (grad.overflow) {
      // No usable direction; report honestly instead of guessing.
      ++stats.line_search_failures;
      stats.iterations = iter;
      stats.final_energy = energy;
      stats.final_gradient_norm = std::numeric_limits<double>::infinity();
      return {u, stats};
    }

    bool have_newton = false;
    if (use_newton)
      have_newton =
          newton_direction(grid, p, u, grad.values, precond, slot, newton, direction);
    double q = 0.0;
    if (have_newton) {
      for (int s = 0; s < m; ++s) q += grad.values[s] * direction[s];
    } else {
      for (int s = 0; s < m; ++s) {
        direction[s] = precond.empty() ? grad.values[s] : grad.values[s] / precond[s];
        q += grad.values[s] * direction[s];
      }
    }
    const double gnorm = std::sqrt(std::max(0.0, hdim * q));
    stats.final_gradient_norm = gnorm;
    stats.iterations = iter;
    if (gnorm <= config.gradient_tolerance) {
      stats.converged = true;
      stats.final_energy = energy;
      return {u, stats};
    }
    // Stationary within double precision: the model decrease of the step
    // about to be tried is t0*q/2 (exact for the local quadratic). Once that
    // falls below the representable resolution of the energy, acceptance
    // decisions only track rounding noise, so stop and say so.
    const double t0 = have_newton ? 1.0 : step;
    const double predicted = 0.5 * t0 * q;
    if (energy.log_total != kNegInf && predicted > 0.0 &&
        std::log(predicted) <= energy.log_total +
                                   std::log(4.0 * std::numeric_limits<double>::epsilon())) {
      stats.stagnated = true;
      stats.final_energy = energy;
      return {u, stats};
    }
    if (iter >= config.max_iterations) {
      stats.final_energy = energy;
      return {u, stats};
    }

    double t = t0;
    bool accepted = false;
    while (t > 1e-300) {
      trial.values = u.values;
      for (int s = 0; s < m; ++s)
        trial.values[grid.free_nodes()[s]] -= t * direction[s];
      bool finite = true;
      for (int s = 0; s < m && finite; ++s)
        finite = std::isfinite(trial.values[grid.free_nodes()[s]]);
      if (!finite) {
        ++stats.line_search_failures;
        t *= config.backtrack_factor;
        continue;
      }
      const EnergyReport trial_energy = eval_energy(trial, p);
      if (std::isnan(trial_energy.log_total)) {
        ++stats.line_search_failures;
        t *= config.backtrack_factor;
        continue;
      }
      if (armijo_accept(energy.log_total, trial_energy.log_total,
                        config.armijo_constant * t * q)) {
        u.values.swap(trial.values);
        energy = trial_energy;
        accepted = true;
        break;
      }
      t *= config.backtrack_factor;
    }
    if (!accepted) {
      ++stats.line_search_failures;
      stats.final_energy = energy;
      stats.iterations = iter + 1;
      return {u, stats};
    }
    // First-order steps keep a persistent, recovering step length; Newton
    // restarts from the unit step every iteration.
    if (!have_newton) step = std::min(t * 2.0, 1e12);
  }
}

}  // namespace pxinf
