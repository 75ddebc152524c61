#include "gcf/support.hpp"

#include "gcf/error.hpp"
#include "gcf/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace gcf {

std::array<double, 2> symmetric_eigenvalues(const Sym2& m, int dim) {
  if (dim == 1) return {m.xx, m.xx};
  const double mean = 0.5 * (m.xx + m.yy);
  const double half_diff = 0.5 * (m.xx - m.yy);
  const double gap = std::hypot(half_diff, m.xy);
  if (2.0 * gap < 1e-12 * std::abs(m.xx + m.yy)) return {mean, mean};
  return {mean + gap, mean - gap};
}

SupportField make_support(const SphereGrid& grid, std::vector<double> h) {
  if (h.size() != grid.size()) {
    throw ContractError("support field has " + std::to_string(h.size()) + " values for " +
                        std::to_string(grid.size()) + " grid nodes");
  }
  return SupportField{grid, std::move(h)};
}

namespace {

inline double tap(std::span<const double> f, std::int32_t e) {
  return e >= 0 ? f[e] : f[-e - 1];
}

}  // namespace

void frame_matrix(const SphereGrid& grid, std::span<const double> h, std::span<Sym2> w,
                  std::vector<double>& scratch) {
  if (h.size() != grid.size() || w.size() != grid.size()) {
    throw ContractError("frame_matrix size mismatch");
  }
  const std::size_t nodes = grid.size();
  if (grid.dim() == 1) {
    const double d = grid.d_longitude();
    const double inv2 = 1.0 / (12.0 * d * d);
    for (std::size_t k = 0; k < nodes; ++k) {
      const auto& nb = grid.neighbors(k, 0);
      const double s = 16.0 * (h[nb[1]] + h[nb[2]]) - (h[nb[0]] + h[nb[3]]) - 30.0 * h[k];
      w[k] = {s * inv2 + h[k], 0.0, 0.0};
    }
    return;
  }

  const double dp = grid.d_colatitude();
  const double dt = grid.d_longitude();
  const double inv_p1 = 1.0 / (12.0 * dp), inv_p2 = 1.0 / (12.0 * dp * dp);
  const double inv_t1 = 1.0 / (12.0 * dt), inv_t2 = 1.0 / (12.0 * dt * dt);
  scratch.resize(nodes);
  // Longitude neighbours never cross a pole.
  for (std::size_t k = 0; k < nodes; ++k) {
    const auto& nb = grid.neighbors(k, 1);
    scratch[k] = (8.0 * (h[nb[2]] - h[nb[1]]) - (h[nb[3]] - h[nb[0]])) * inv_t1;
  }
  const std::span<const double> ht(scratch);
  const int nl = grid.n_longitude();
  for (std::size_t k = 0; k < nodes; ++k) {
    const int i = static_cast<int>(k / nl);
    const double s = grid.sin_colatitude(i);
    const double cot = grid.cos_colatitude(i) / s;
    const auto& np = grid.neighbors(k, 0);
    const auto& nt = grid.neighbors(k, 1);
    const double p0 = tap(h, np[0]), p1 = tap(h, np[1]), p2 = tap(h, np[2]), p3 = tap(h, np[3]);
    const double hp = (8.0 * (p2 - p1) - (p3 - p0)) * inv_p1;
    const double hpp = (16.0 * (p1 + p2) - (p0 + p3) - 30.0 * h[k]) * inv_p2;
    const double htt =
        (16.0 * (h[nt[1]] + h[nt[2]]) - (h[nt[0]] + h[nt[3]]) - 30.0 * h[k]) * inv_t2;
    const double hpt =
        (8.0 * (tap(ht, np[2]) - tap(ht, np[1])) - (tap(ht, np[3]) - tap(ht, np[0]))) * inv_p1;
    w[k].xx = hpp + h[k];
    w[k].xy = (hpt - cot * ht[k]) / s;
    w[k].yy = htt / (s * s) + cot * hp + h[k];
  }
}

RadiiField compute_radii(const SupportField& body) {
  const SphereGrid& grid = body.grid;
  RadiiField out;
  out.dim = grid.dim();
  out.w.resize(grid.size());
  out.radii.resize(grid.size());
  std::vector<double> scratch;
  frame_matrix(grid, body.h, out.w, scratch);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out.radii[k] = symmetric_eigenvalues(out.w[k], out.dim);
  }
  return out;
}

RadiiField radii_matrix(const SupportField& body) {
  if (body.h.size() != body.grid.size()) throw ContractError("support field size mismatch");
  for (std::size_t k = 0; k < body.h.size(); ++k) {
    if (!(body.h[k] > 0.0) || !std::isfinite(body.h[k])) {
      throw ConvexityError("support function not positive at node " + std::to_string(k) +
                               " (h = " + std::to_string(body.h[k]) + ")",
                           k, body.h[k]);
    }
  }
  RadiiField r = compute_radii(body);
  std::size_t worst = 0;
  double worst_value = std::numeric_limits<double>::infinity();
  const int last = r.dim - 1;
  for (std::size_t k = 0; k < r.radii.size(); ++k) {
    const double v = r.radii[k][last];
    if (!(v >= worst_value)) {
      worst_value = v;
      worst = k;
    }
  }
  if (!(worst_value > 0.0)) {
    throw ConvexityError("convexity failure: radius of curvature " + std::to_string(worst_value) +
                             " at node " + std::to_string(worst),
                         worst, worst_value);
  }
  return r;
}

std::vector<double> radii_determinant(const RadiiField& radii) {
  std::vector<double> det(radii.w.size());
  for (std::size_t k = 0; k < det.size(); ++k) {
    const Sym2& w = radii.w[k];
    det[k] = radii.dim == 1 ? w.xx : w.xx * w.yy - w.xy * w.xy;
  }
  return det;
}

std::vector<double> gauss_curvature_from_support(const SupportField& body) {
  auto det = radii_determinant(radii_matrix(body));
  for (double& d : det) d = 1.0 / d;
  return det;
}

ShrinkerResidual shrinker_residual(const SupportField& body, double alpha) {
  if (!(alpha > 0.0)) throw ContractError("alpha must be positive");
  const auto K = gauss_curvature_from_support(body);
  ShrinkerResidual r;
  r.field.resize(K.size());
  for (std::size_t k = 0; k < K.size(); ++k) {
    r.field[k] = body.h[k] - std::pow(K[k], alpha);
    r.max_abs = std::max(r.max_abs, std::abs(r.field[k]));
  }
  return r;
}

double enclosed_volume(const SupportField& body, const RadiiField& radii) {
  auto integrand = radii_determinant(radii);
  for (std::size_t k = 0; k < integrand.size(); ++k) integrand[k] *= body.h[k];
  return body.grid.integrate(integrand) / (body.grid.dim() + 1);
}

double enclosed_volume(const SupportField& body) {
  return enclosed_volume(body, radii_matrix(body));
}

ImmersionField embed(const SupportField& body) {
  const SphereGrid& grid = body.grid;
  radii_matrix(body);
  ImmersionField imm{grid, {}, {}};
  imm.x.resize(grid.size());
  imm.nu.resize(grid.size());
  if (grid.dim() == 1) {
    const auto ht = first_derivative(grid, body.h, 0);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      imm.nu[k] = grid.normal(k);
      imm.x[k] = body.h[k] * imm.nu[k] + ht[k] * grid.frame_vector(k, 1);
    }
    return imm;
  }
  const auto hp = first_derivative(grid, body.h, 0);
  const auto ht = first_derivative(grid, body.h, 1);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double s = grid.sin_colatitude(grid.ring(k));
    imm.nu[k] = grid.normal(k);
    imm.x[k] = body.h[k] * imm.nu[k] + hp[k] * grid.frame_vector(k, 0) +
               (ht[k] / s) * grid.frame_vector(k, 1);
  }
  return imm;
}

SupportField scaled(const SupportField& body, double c) {
  SupportField out = body;
  for (double& v : out.h) v *= c;
  return out;
}

}  // namespace gcf
