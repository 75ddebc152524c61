#pragma once

#include "gcf/geometry.hpp"
#include "gcf/support.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace gcf {

/// Samples of an n = 1 shrinker trajectory h'' + h = h^(-1/alpha) on [0, 2 pi].
struct OdeTrajectory {
  double alpha = 0.0;
  std::vector<double> theta, h, dh;  // steps + 1 samples
};

/// Classical RK4 with `steps` uniform steps over one revolution. Throws TrajectoryError if h
/// reaches 0.
OdeTrajectory integrate_shrinker_ode(double alpha, double h0, double dh0, int steps = 4096);

/// h'^2/2 + h^2/2 - Phi(h) with Phi' = h^(-1/alpha); constant along exact trajectories.
double shrinker_energy(double alpha, double h, double dh);

/// Largest |E(theta) - E(0)| along a trajectory.
double energy_drift(const OdeTrajectory& traj);

struct ShrinkerSolution {
  double alpha = 0.0;
  int n = 1;
  SupportField body;            // trajectory sampled on the requested grid
  double residual = 0.0;        // max |h - K^alpha| on that grid
  double closure_defect = 0.0;  // |h(2pi) - h(0)| + |h'(2pi) - h'(0)|
  double richardson_error = 0.0;  // |h_4096(2pi) - h_2048(2pi)| / 15
  bool closed = false;          // closure_defect < closure_tolerance
};

/// Integrates from (h0, dh0) and samples onto `grid_nodes` angles (a divisor of 4096).
ShrinkerSolution solve_shrinker_ode_n1(double alpha, double h0, double dh0 = 0.0,
                                       int grid_nodes = 256, double closure_tolerance = 1e-9);

struct SweepRow {
  double h0 = 0.0;
  double closure_defect = 0.0;  // NaN when the trajectory hit h = 0
  double residual = 0.0;        // NaN unless closed
  std::string status;           // "closed", "open" or "hits-zero"
};

/// Shooting sweep over `count` evenly spaced h0 in [h0_min, h0_max] with h'(0) = 0.
std::vector<SweepRow> shooting_sweep(double alpha, double h0_min, double h0_max, int count,
                                     int grid_nodes = 256);

/// Pointwise w, f and umbilicity data of a convex body.
struct ScalarDiagnostics {
  std::vector<double> w, f;
  std::vector<double> umbilicity;     // max_i |lambda_i - H/n| / (H/n)
  std::vector<double> grad_x_norm2;   // |nabla |F|^2| in the metric
  double w_max = 0.0, f_max = 0.0;
  std::size_t argmax_w = 0, argmax_f = 0;  // ties resolved to the lowest node
};

ScalarDiagnostics compute_w_f(const GeometryBundle& bundle, double alpha);

/// max |<F, nu> - K^alpha| over the bundle.
double bundle_shrinker_residual(const GeometryBundle& bundle, double alpha);

/// Residuals above this make the umbilicity report inapplicable.
inline constexpr double kUmbilicityApplicabilityLimit = 0.1;

struct UmbilicityReport {
  std::size_t node = 0;        // argmax f
  double umbilicity = 0.0;     // U at node
  double grad_x_norm2 = 0.0;   // |nabla |F|^2| at node
  double residual = 0.0;       // shrinker residual of the input
  double tolerance = 0.0;      // max(1e-8, 10 * residual)
  bool applicable = false;
  bool umbilic = false;
  bool critical = false;       // |nabla |F|^2| below tolerance
};

UmbilicityReport umbilicity_at_max(const ScalarDiagnostics& diag, const GeometryBundle& bundle,
                                   double alpha);

}  // namespace gcf
