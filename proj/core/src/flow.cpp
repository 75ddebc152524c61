#include "gcf/flow.hpp"

#include "gcf/bodies.hpp"
#include "gcf/error.hpp"
#include "gcf/shrinker.hpp"
#include "gcf/stencil.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

namespace gcf {

namespace {

constexpr int kMaxHalvings = 20;

bool admissible(const SupportField& body) {
  for (double v : body.h) {
    if (!(v > 0.0)) return false;
  }
  const RadiiField r = compute_radii(body);
  for (const auto& rr : r.radii) {
    if (!(rr[r.dim - 1] > 0.0)) return false;
  }
  return true;
}

void validate(const FlowConfig& c) {
  if (c.n != 1 && c.n != 2) throw ContractError("unsupported dimension");
  if (!(c.alpha > 0.0)) throw ContractError("alpha must be positive");
  if (!(c.cfl > 0.0 && c.cfl <= 1.0)) throw ContractError("cfl must lie in (0, 1]");
  if (c.max_steps < 0) throw ContractError("max_steps must be nonnegative");
}

}  // namespace

double radii_ratio(const SupportField& body) {
  const RadiiField r = compute_radii(body);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& rr : r.radii) {
    hi = std::max(hi, rr[0]);
    lo = std::min(lo, rr[r.dim - 1]);
  }
  return hi / lo;
}

double default_roundness_tolerance(int n) { return n == 1 ? 1e-6 : 1e-2; }

double stable_timestep(const SupportField& body, const RadiiField& radii, double alpha,
                       double cfl) {
  const SphereGrid& grid = body.grid;
  double dt = std::numeric_limits<double>::infinity();
  const double d0 = grid.dim() == 1 ? grid.d_longitude() : grid.d_colatitude();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Sym2& w = radii.w[k];
    double rate;
    if (grid.dim() == 1) {
      const double speed = alpha * std::pow(w.xx, -alpha) / w.xx;
      rate = kSecondStencilRadius * speed / (d0 * d0);
    } else {
      const double det = w.xx * w.yy - w.xy * w.xy;
      const double c = alpha * std::pow(det, -alpha) / det;  // alpha K^alpha / det W
      const double d11 = c * w.yy, d22 = c * w.xx, d12 = -c * w.xy;
      const double d1 = grid.sin_colatitude(grid.ring(k)) * grid.d_longitude();
      rate = kSecondStencilRadius * (d11 / (d0 * d0) + d22 / (d1 * d1)) +
             2.0 * kFirstStencilRadius * kFirstStencilRadius * std::abs(d12) / (d0 * d1);
    }
    dt = std::min(dt, 2.0 / rate);
  }
  return cfl * dt;
}

FlowState advance(const FlowState& state, const FlowConfig& config, double dt) {
  const RadiiField radii = radii_matrix(state.body);
  const auto det = radii_determinant(radii);
  std::vector<double> speed(det.size());
  for (std::size_t k = 0; k < det.size(); ++k) speed[k] = std::pow(det[k], -config.alpha);

  for (int attempt = 0; attempt <= kMaxHalvings; ++attempt, dt *= 0.5) {
    FlowState next = state;
    for (std::size_t k = 0; k < speed.size(); ++k) next.body.h[k] -= dt * speed[k];
    if (admissible(next.body)) {
      next.time += dt;
      next.step += 1;
      return next;
    }
  }
  throw CollapseError("step rejected after " + std::to_string(kMaxHalvings) +
                      " halvings of the time step");
}

FlowState step(const FlowState& state, const FlowConfig& config) {
  const RadiiField radii = radii_matrix(state.body);
  return advance(state, config, stable_timestep(state.body, radii, config.alpha, config.cfl));
}

Eigen::Vector3d steiner_point(const SupportField& body) {
  const SphereGrid& grid = body.grid;
  Eigen::Vector3d s = Eigen::Vector3d::Zero();
  std::vector<double> f(grid.size());
  for (int c = 0; c < 3; ++c) {
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = body.h[k] * grid.normal(k)[c];
    s[c] = grid.integrate(f);
  }
  return s * ((grid.dim() + 1) / grid.sphere_measure());
}

FlowState normalize(const FlowState& state, bool recenter) {
  FlowState out = state;
  const SphereGrid& grid = out.body.grid;
  if (recenter) {
    const Eigen::Vector3d s = steiner_point(out.body);
    for (std::size_t k = 0; k < grid.size(); ++k) out.body.h[k] -= s.dot(grid.normal(k));
  }
  const double v = enclosed_volume(out.body);
  if (!(v > 0.0)) throw ContractError("volume must be positive to normalize");
  const double c = std::pow(grid.ball_volume() / v, 1.0 / (grid.dim() + 1));
  for (double& x : out.body.h) x *= c;
  out.scale *= c;
  return out;
}

Roundness roundness(const GeometryBundle& bundle) {
  Roundness r;
  const std::size_t nodes = bundle.K.size();
  r.pinching.assign(nodes, 0.0);
  r.in_v.assign(nodes, 1);
  const double v_bound = std::pow(10.0 / 9.0 - 9.0 / 10.0, 2);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t k = 0; k < nodes; ++k) {
    double acc = 0.0;
    for (int i = 0; i < bundle.dim; ++i) {
      const double li = bundle.curvatures[k][i];
      lo = std::min(lo, li);
      hi = std::max(hi, li);
      for (int j = 0; j < bundle.dim; ++j) {
        const double lj = bundle.curvatures[k][j];
        const double t = li / lj - lj / li;
        acc += t * t;
      }
    }
    r.pinching[k] = acc;
    r.pinching_max = std::max(r.pinching_max, acc);
    r.in_v[k] = acc < v_bound ? 1 : 0;
  }
  r.ratio = hi / lo;
  return r;
}

DiagnosticsRecord diagnose(const FlowState& state, double alpha) {
  const GeometryBundle bundle = build_bundle(state.body);
  const Roundness round = roundness(bundle);
  const ScalarDiagnostics diag = compute_w_f(bundle, alpha);
  DiagnosticsRecord rec;
  rec.step = state.step;
  rec.t = state.time;
  rec.volume = enclosed_volume(state.body);
  rec.k_min = *std::min_element(bundle.K.begin(), bundle.K.end());
  rec.k_max = *std::max_element(bundle.K.begin(), bundle.K.end());
  rec.lambda_ratio = round.ratio;
  rec.lambda_max = round.pinching_max;
  rec.residual_max = shrinker_residual(state.body, alpha).max_abs;
  rec.f_max = diag.f_max;
  rec.w_max = diag.w_max;
  rec.umbilicity_at_fmax = diag.umbilicity[diag.argmax_f];
  rec.grad_x_norm2_at_fmax = diag.grad_x_norm2[diag.argmax_f];
  return rec;
}

SupportField initial_body(const FlowConfig& config) {
  const SphereGrid grid = build_grid(config.n, config.resolution);
  switch (config.initial) {
    case InitialBody::Sphere:
      return sphere_body(grid, config.radius);
    case InitialBody::Ellipsoid:
      return ellipsoid_body(grid, config.axes);
    case InitialBody::Perturbed:
      return harmonic_body(grid, config.harmonics);
    case InitialBody::Random: {
      std::mt19937_64 rng(config.seed);
      return random_convex_body(grid, rng);
    }
  }
  throw ContractError("unknown initial body");
}

namespace {

// Explicit Euler integrator for run(). W is kept alongside h and updated linearly (W is linear
// in h), so each step needs one stencil pass, on K^alpha. W is resynchronised from h
// periodically to bound drift.
class Integrator {
 public:
  static constexpr long kResyncEvery = 256;

  Integrator(const FlowConfig& config, FlowState state)
      : config_(config), state_(std::move(state)), grid_(state_.body.grid) {
    const std::size_t nodes = grid_.size();
    w_.resize(nodes);
    dw_.resize(nodes);
    wc_.resize(nodes);
    speed_.resize(nodes);
    hc_.resize(nodes);
    det_.resize(nodes);
    for (int c = 0; c < 3; ++c) {
      nu_[c].resize(nodes);
      for (std::size_t k = 0; k < nodes; ++k) nu_[c][k] = grid_.normal(k)[c];
      w_nu_[c].resize(nodes);
      frame_matrix(grid_, nu_[c], w_nu_[c], scratch_);
    }
    resync();
  }

  const FlowState& state() const { return state_; }

  void resync() { frame_matrix(grid_, state_.body.h, w_, scratch_); }

  // Fills K^alpha and the stable time step for the current body; returns the global largest
  // over smallest radius (+inf once convexity is lost).
  double prepare() {
    dt_ = speed_and_timestep();
    return ratio_;
  }

  // Requires prepare() on the current body.
  void step() {
    frame_matrix(grid_, speed_, dw_, scratch_);
    double dt = dt_;
    for (int attempt = 0; attempt <= kMaxHalvings; ++attempt, dt *= 0.5) {
      if (try_candidate(dt)) {
        state_.body.h.swap(hc_);
        w_.swap(wc_);
        state_.time += dt;
        state_.step += 1;
        return;
      }
    }
    throw CollapseError("step rejected after " + std::to_string(kMaxHalvings) +
                        " halvings of the time step");
  }

  // Translate to the Steiner point, then rescale to the volume of the unit ball.
  void normalize() {
    auto& h = state_.body.h;
    const std::size_t nodes = h.size();
    if (config_.recenter) {
      const double f = (grid_.dim() + 1) / grid_.sphere_measure();
      std::array<double, 3> s{};
      for (int c = 0; c < 3; ++c) s[c] = f * dot_weighted(h, nu_[c]);
      for (std::size_t k = 0; k < nodes; ++k) {
        h[k] -= s[0] * nu_[0][k] + s[1] * nu_[1][k] + s[2] * nu_[2][k];
        Sym2& w = w_[k];
        for (int c = 0; c < 3; ++c) {
          w.xx -= s[c] * w_nu_[c][k].xx;
          w.xy -= s[c] * w_nu_[c][k].xy;
          w.yy -= s[c] * w_nu_[c][k].yy;
        }
      }
    }
    const double v = volume();
    if (!(v > 0.0)) throw ContractError("volume must be positive to normalize");
    const double c = std::pow(grid_.ball_volume() / v, 1.0 / (grid_.dim() + 1));
    for (std::size_t k = 0; k < nodes; ++k) {
      h[k] *= c;
      w_[k].xx *= c;
      w_[k].xy *= c;
      w_[k].yy *= c;
    }
    state_.scale *= c;
  }

  double volume() const {
    const auto& h = state_.body.h;
    for (std::size_t k = 0; k < h.size(); ++k) det_[k] = h[k] * det(w_[k]);
    return grid_.integrate(det_) / (grid_.dim() + 1);
  }

 private:
  double det(const Sym2& w) const { return grid_.dim() == 1 ? w.xx : w.xx * w.yy - w.xy * w.xy; }

  double dot_weighted(const std::vector<double>& a, const std::vector<double>& b) const {
    const auto& wt = grid_.weights();
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) sum += wt[k] * a[k] * b[k];
    return sum;
  }

  // Fills speed_ = K^alpha and ratio_, returns the stable time step; mirrors stable_timestep.
  double speed_and_timestep() {
    const double alpha = config_.alpha;
    const bool unit = alpha == 1.0;
    const double d0 = grid_.dim() == 1 ? grid_.d_longitude() : grid_.d_colatitude();
    const double inv_d0sq = 1.0 / (d0 * d0);
    const int nl = grid_.n_longitude();
    double max_rate = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t k = 0; k < w_.size(); ++k) {
      const Sym2& w = w_[k];
      const double d = det(w);
      if (grid_.dim() == 1) {
        lo = std::min(lo, w.xx);
        hi = std::max(hi, w.xx);
      } else {
        const double mean = 0.5 * (w.xx + w.yy);
        const double hd = 0.5 * (w.xx - w.yy);
        const double gap = std::sqrt(hd * hd + w.xy * w.xy);
        lo = std::min(lo, mean - gap);
        hi = std::max(hi, mean + gap);
      }
      const double kp = unit ? 1.0 / d : std::exp(-alpha * std::log(d));
      speed_[k] = kp;
      const double c = alpha * kp / d;
      double rate;
      if (grid_.dim() == 1) {
        rate = kSecondStencilRadius * c * inv_d0sq;
      } else {
        const double d1 = grid_.sin_colatitude(static_cast<int>(k / nl)) * grid_.d_longitude();
        rate = kSecondStencilRadius * c * (w.yy * inv_d0sq + w.xx / (d1 * d1)) +
               2.0 * kFirstStencilRadius * kFirstStencilRadius * c * std::abs(w.xy) / (d0 * d1);
      }
      max_rate = std::max(max_rate, rate);
    }
    ratio_ = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    return config_.cfl * 2.0 / max_rate;
  }

  bool try_candidate(double dt) {
    const auto& h = state_.body.h;
    const bool two = grid_.dim() == 2;
    for (std::size_t k = 0; k < h.size(); ++k) {
      const double hv = h[k] - dt * speed_[k];
      if (!(hv > 0.0)) return false;
      hc_[k] = hv;
      Sym2& w = wc_[k];
      w.xx = w_[k].xx - dt * dw_[k].xx;
      if (two) {
        w.xy = w_[k].xy - dt * dw_[k].xy;
        w.yy = w_[k].yy - dt * dw_[k].yy;
        // A symmetric 2x2 matrix is positive definite iff its trace and determinant are.
        if (!(w.xx + w.yy > 0.0 && w.xx * w.yy - w.xy * w.xy > 0.0)) return false;
      } else if (!(w.xx > 0.0)) {
        return false;
      }
    }
    return true;
  }

  const FlowConfig& config_;
  FlowState state_;
  SphereGrid grid_;
  std::vector<Sym2> w_, dw_, wc_;
  std::vector<double> speed_, hc_, scratch_;
  mutable std::vector<double> det_;
  double dt_ = 0.0;
  double ratio_ = 0.0;
  std::array<std::vector<double>, 3> nu_;
  std::array<std::vector<Sym2>, 3> w_nu_;
};

}  // namespace

FlowResult run(const FlowConfig& config, const std::function<void(const FlowState&)>& on_snapshot) {
  validate(config);
  const bool fixed = config.normalization == Normalization::FixedVolume;
  const double tol =
      config.roundness_tolerance > 0.0 ? config.roundness_tolerance
                                       : default_roundness_tolerance(config.n);
  FlowResult res;
  FlowState initial{initial_body(config), 0.0, 0, 1.0};
  radii_matrix(initial.body);
  Integrator integ(config, std::move(initial));
  if (fixed) integ.normalize();

  auto emit = [&]() { res.records.push_back(diagnose(integ.state(), config.alpha)); };
  emit();
  if (on_snapshot && config.snapshot_every > 0) on_snapshot(integ.state());

  for (;;) {
    if (integ.prepare() - 1.0 < tol) {
      res.stop_reason = "round";
      res.converged = true;
      break;
    }
    if (integ.state().step >= config.max_steps) {
      res.stop_reason = "max-steps";
      break;
    }
    try {
      integ.step();
    } catch (const CollapseError&) {
      res.stop_reason = "collapse";
      break;
    }
    const long k = integ.state().step;
    if (k % Integrator::kResyncEvery == 0) integ.resync();
    if (fixed) {
      integ.normalize();
    } else if (integ.volume() < config.min_volume) {
      emit();
      res.stop_reason = "min-volume";
      break;
    }
    const bool at_record = config.record_every > 0 && k % config.record_every == 0;
    if (at_record || k >= config.max_steps) emit();
    if (on_snapshot && config.snapshot_every > 0 && k % config.snapshot_every == 0) {
      on_snapshot(integ.state());
    }
  }
  if (res.records.back().step != integ.state().step) emit();
  res.final_state = integ.state();
  return res;
}

}  // namespace gcf
