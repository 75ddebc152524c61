#pragma once

#include "gcf/geometry.hpp"
#include "gcf/support.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace gcf {

enum class Normalization { None, FixedVolume };

enum class InitialBody { Sphere, Ellipsoid, Perturbed, Random };

struct FlowConfig {
  int n = 2;
  double alpha = 1.0;
  std::vector<int> resolution{48, 96};
  double cfl = 0.9;
  Normalization normalization = Normalization::FixedVolume;
  /// Translate to the Steiner point after each rescale so the origin stays inside the body.
  bool recenter = true;
  /// Stop once lambda_max / lambda_min - 1 drops below this; <= 0 picks 1e-6 (n = 1) or 1e-2.
  double roundness_tolerance = 0.0;
  long max_steps = 1000000;
  double min_volume = 1e-8;
  long record_every = 1000;
  long snapshot_every = 0;  // 0 disables snapshots
  std::uint64_t seed = 1;
  InitialBody initial = InitialBody::Ellipsoid;
  std::array<double, 3> axes{1.3, 1.0, 0.8};
  double radius = 1.0;
  std::vector<double> harmonics;  // coefficients for InitialBody::Perturbed
};

struct FlowState {
  SupportField body;
  double time = 0.0;
  long step = 0;
  double scale = 1.0;  // product of all rescale factors applied so far
};

struct DiagnosticsRecord {
  long step = 0;
  double t = 0.0;
  double volume = 0.0;
  double k_min = 0.0, k_max = 0.0;
  double lambda_ratio = 0.0;
  double lambda_max = 0.0;  // max of the pinching field Lambda
  double residual_max = 0.0;
  double f_max = 0.0, w_max = 0.0;
  double umbilicity_at_fmax = 0.0;
  double grad_x_norm2_at_fmax = 0.0;
};

/// Largest stable explicit time step: cfl * min over nodes of 2 / (stencil bound of the
/// linearized operator alpha K^alpha W^-1 : nabla^2).
double stable_timestep(const SupportField& body, const RadiiField& radii, double alpha,
                       double cfl);

/// One explicit Euler step h' = h - dt K^alpha with dt from stable_timestep. The step is
/// retried with dt halved while the candidate loses convexity; CollapseError after 20 halvings.
FlowState step(const FlowState& state, const FlowConfig& config);

/// Same as step with a prescribed initial dt.
FlowState advance(const FlowState& state, const FlowConfig& config, double dt);

/// Rescale to the volume of the unit ball, optionally translating to the Steiner point first.
FlowState normalize(const FlowState& state, bool recenter = false);

/// Steiner point (n + 1) / |S^n| * integral of h nu.
Eigen::Vector3d steiner_point(const SupportField& body);

struct Roundness {
  std::vector<double> pinching;   // Lambda per node
  double pinching_max = 0.0;
  double ratio = 1.0;             // global lambda_max / lambda_min
  std::vector<char> in_v;         // Lambda < (10/9 - 9/10)^2
};

Roundness roundness(const GeometryBundle& bundle);

DiagnosticsRecord diagnose(const FlowState& state, double alpha);

SupportField initial_body(const FlowConfig& config);

struct FlowResult {
  std::vector<DiagnosticsRecord> records;
  FlowState final_state;
  std::string stop_reason;  // "round", "max-steps", "min-volume" or "collapse"
  bool converged = false;
};

/// Runs the flow. `on_snapshot` (optional) receives the state every snapshot_every steps.
FlowResult run(const FlowConfig& config,
               const std::function<void(const FlowState&)>& on_snapshot = {});

double default_roundness_tolerance(int n);

/// Global largest over smallest radius of curvature, equal to lambda_max / lambda_min.
double radii_ratio(const SupportField& body);

}  // namespace gcf
