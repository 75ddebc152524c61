#include "gcf/shrinker.hpp"

#include "gcf/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace gcf {

namespace {

constexpr int kFineSteps = 4096;

struct Phase {
  double h, dh;
};

Phase rhs(double alpha, const Phase& p) {
  if (!(p.h > 0.0)) throw TrajectoryError("shrinker trajectory reached h <= 0");
  return {p.dh, std::pow(p.h, -1.0 / alpha) - p.h};
}

}  // namespace

OdeTrajectory integrate_shrinker_ode(double alpha, double h0, double dh0, int steps) {
  if (!(alpha > 0.0)) throw ContractError("alpha must be positive");
  if (!(h0 > 0.0)) throw ContractError("h0 must be positive");
  if (steps < 16) throw ContractError("too few integration steps");
  OdeTrajectory t;
  t.alpha = alpha;
  t.theta.resize(steps + 1);
  t.h.resize(steps + 1);
  t.dh.resize(steps + 1);
  const double dt = 2.0 * std::numbers::pi / steps;
  Phase p{h0, dh0};
  t.theta[0] = 0.0;
  t.h[0] = h0;
  t.dh[0] = dh0;
  for (int s = 0; s < steps; ++s) {
    const Phase k1 = rhs(alpha, p);
    const Phase k2 = rhs(alpha, {p.h + 0.5 * dt * k1.h, p.dh + 0.5 * dt * k1.dh});
    const Phase k3 = rhs(alpha, {p.h + 0.5 * dt * k2.h, p.dh + 0.5 * dt * k2.dh});
    const Phase k4 = rhs(alpha, {p.h + dt * k3.h, p.dh + dt * k3.dh});
    p.h += dt / 6.0 * (k1.h + 2.0 * k2.h + 2.0 * k3.h + k4.h);
    p.dh += dt / 6.0 * (k1.dh + 2.0 * k2.dh + 2.0 * k3.dh + k4.dh);
    if (!(p.h > 0.0)) throw TrajectoryError("shrinker trajectory reached h <= 0");
    t.theta[s + 1] = (s + 1) * dt;
    t.h[s + 1] = p.h;
    t.dh[s + 1] = p.dh;
  }
  return t;
}

double shrinker_energy(double alpha, double h, double dh) {
  const double e = 1.0 - 1.0 / alpha;
  const double phi = std::abs(e) < 1e-14 ? std::log(h) : std::pow(h, e) / e;
  return 0.5 * dh * dh + 0.5 * h * h - phi;
}

double energy_drift(const OdeTrajectory& traj) {
  const double e0 = shrinker_energy(traj.alpha, traj.h[0], traj.dh[0]);
  double drift = 0.0;
  for (std::size_t k = 1; k < traj.h.size(); ++k) {
    drift = std::max(drift, std::abs(shrinker_energy(traj.alpha, traj.h[k], traj.dh[k]) - e0));
  }
  return drift;
}

ShrinkerSolution solve_shrinker_ode_n1(double alpha, double h0, double dh0, int grid_nodes,
                                       double closure_tolerance) {
  if (grid_nodes < 16 || kFineSteps % grid_nodes != 0) {
    throw ContractError("grid node count must divide 4096");
  }
  const OdeTrajectory fine = integrate_shrinker_ode(alpha, h0, dh0, kFineSteps);
  const OdeTrajectory coarse = integrate_shrinker_ode(alpha, h0, dh0, kFineSteps / 2);

  ShrinkerSolution sol;
  sol.alpha = alpha;
  sol.n = 1;
  sol.closure_defect = std::abs(fine.h.back() - fine.h.front()) +
                       std::abs(fine.dh.back() - fine.dh.front());
  sol.richardson_error = std::abs(fine.h.back() - coarse.h.back()) / 15.0;
  sol.closed = sol.closure_defect < closure_tolerance;

  const SphereGrid grid = build_grid(1, {grid_nodes});
  const int stride = kFineSteps / grid_nodes;
  std::vector<double> h(grid_nodes);
  for (int j = 0; j < grid_nodes; ++j) h[j] = fine.h[j * stride];
  sol.body = make_support(grid, std::move(h));
  sol.residual = sol.closed ? shrinker_residual(sol.body, alpha).max_abs
                            : std::numeric_limits<double>::quiet_NaN();
  return sol;
}

std::vector<SweepRow> shooting_sweep(double alpha, double h0_min, double h0_max, int count,
                                     int grid_nodes) {
  if (count < 1) throw ContractError("sweep needs at least one sample");
  if (!(h0_min > 0.0) || !(h0_max >= h0_min)) throw ContractError("invalid h0 range");
  std::vector<SweepRow> rows;
  rows.reserve(count);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int i = 0; i < count; ++i) {
    SweepRow row;
    row.h0 = count == 1 ? h0_min : h0_min + (h0_max - h0_min) * i / (count - 1);
    try {
      const ShrinkerSolution sol = solve_shrinker_ode_n1(alpha, row.h0, 0.0, grid_nodes);
      row.closure_defect = sol.closure_defect;
      row.residual = sol.residual;
      row.status = sol.closed ? "closed" : "open";
    } catch (const TrajectoryError&) {
      row.closure_defect = nan;
      row.residual = nan;
      row.status = "hits-zero";
    }
    rows.push_back(row);
  }
  return rows;
}

ScalarDiagnostics compute_w_f(const GeometryBundle& bundle, double alpha) {
  if (!(alpha > 0.0)) throw ContractError("alpha must be positive");
  const int n = bundle.dim;
  const std::size_t nodes = bundle.K.size();
  const double cw = (n * alpha - 1.0) / (2.0 * n * alpha);
  const double cf = (n * alpha - 1.0) / (2.0 * alpha);
  ScalarDiagnostics d;
  d.w.resize(nodes);
  d.f.resize(nodes);
  d.umbilicity.resize(nodes);
  d.grad_x_norm2.resize(nodes);
  d.w_max = d.f_max = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < nodes; ++k) {
    const double ka = std::pow(bundle.K[k], alpha);
    double inv_sum = 0.0;
    double dev = 0.0;
    const double mean = bundle.H[k] / n;
    for (int i = 0; i < n; ++i) {
      inv_sum += 1.0 / bundle.curvatures[k][i];
      dev = std::max(dev, std::abs(bundle.curvatures[k][i] - mean));
    }
    d.w[k] = ka / bundle.curvatures[k][0] - cw * bundle.x_norm2[k];
    d.f[k] = ka * inv_sum - cf * bundle.x_norm2[k];
    d.umbilicity[k] = dev / mean;
    double g2 = 0.0;
    for (int i = 0; i < n; ++i) g2 += bundle.x_lower(k, i) * bundle.x_upper(k, i);
    d.grad_x_norm2[k] = 2.0 * std::sqrt(std::max(g2, 0.0));
    if (d.w[k] > d.w_max) {
      d.w_max = d.w[k];
      d.argmax_w = k;
    }
    if (d.f[k] > d.f_max) {
      d.f_max = d.f[k];
      d.argmax_f = k;
    }
  }
  return d;
}

double bundle_shrinker_residual(const GeometryBundle& bundle, double alpha) {
  double r = 0.0;
  for (std::size_t k = 0; k < bundle.K.size(); ++k) {
    r = std::max(r, std::abs(bundle.support[k] - std::pow(bundle.K[k], alpha)));
  }
  return r;
}

UmbilicityReport umbilicity_at_max(const ScalarDiagnostics& diag, const GeometryBundle& bundle,
                                   double alpha) {
  UmbilicityReport rep;
  rep.node = diag.argmax_f;
  rep.umbilicity = diag.umbilicity[rep.node];
  rep.grad_x_norm2 = diag.grad_x_norm2[rep.node];
  rep.residual = bundle_shrinker_residual(bundle, alpha);
  rep.tolerance = std::max(1e-8, 10.0 * rep.residual);
  rep.applicable = rep.residual <= kUmbilicityApplicabilityLimit;
  rep.umbilic = rep.applicable && rep.umbilicity < rep.tolerance;
  rep.critical = rep.applicable && rep.grad_x_norm2 < rep.tolerance;
  return rep;
}

}  // namespace gcf
