#include "gcf/bodies.hpp"

#include "gcf/error.hpp"

#include <Eigen/LU>

#include <cmath>
#include <limits>

namespace gcf {

namespace {

double harmonic_value(int n, int index, const Eigen::Vector3d& v, double theta) {
  if (n == 1) {
    const int k = index / 2 + 1;
    return index % 2 == 0 ? std::cos(k * theta) : std::sin(k * theta);
  }
  const double x = v.x(), y = v.y(), z = v.z();
  switch (index) {
    case 0: return x;
    case 1: return y;
    case 2: return z;
    case 3: return x * y;
    case 4: return y * z;
    case 5: return z * x;
    case 6: return x * x - y * y;
    case 7: return 3.0 * z * z - 1.0;
    case 8: return x * (x * x - 3.0 * y * y);
    case 9: return y * (3.0 * x * x - y * y);
    case 10: return x * y * z;
    case 11: return z * (x * x - y * y);
    case 12: return x * (5.0 * z * z - 1.0);
    case 13: return y * (5.0 * z * z - 1.0);
    case 14: return z * (5.0 * z * z - 3.0);
    default: throw ContractError("harmonic index out of range");
  }
}

}  // namespace

SupportField sphere_body(const SphereGrid& grid, double r) {
  if (!(r > 0.0)) throw ContractError("radius must be positive");
  return make_support(grid, std::vector<double>(grid.size(), r));
}

SupportField ellipse_body(const SphereGrid& grid, double a, double b, double rotation) {
  if (grid.dim() != 1) throw ContractError("ellipse body needs n = 1");
  if (!(a > 0.0 && b > 0.0)) throw ContractError("semi-axes must be positive");
  std::vector<double> h(grid.size());
  for (std::size_t k = 0; k < h.size(); ++k) {
    const double t = grid.longitude(static_cast<int>(k)) - rotation;
    const double c = std::cos(t), s = std::sin(t);
    h[k] = std::sqrt(a * a * c * c + b * b * s * s);
  }
  return make_support(grid, std::move(h));
}

SupportField ellipsoid_body(const SphereGrid& grid, const std::array<double, 3>& axes) {
  for (double v : axes) {
    if (!(v > 0.0)) throw ContractError("semi-axes must be positive");
  }
  std::vector<double> h(grid.size());
  for (std::size_t k = 0; k < h.size(); ++k) {
    const Eigen::Vector3d nu = grid.normal(k);
    double acc = 0.0;
    for (int c = 0; c < 3; ++c) acc += axes[c] * axes[c] * nu[c] * nu[c];
    h[k] = std::sqrt(acc);
  }
  return make_support(grid, std::move(h));
}

int harmonic_count(int n) {
  if (n == 1) return 8;
  if (n == 2) return 15;
  throw ContractError("unsupported dimension");
}

std::vector<double> harmonic_field(const SphereGrid& grid, int index) {
  if (index < 0 || index >= harmonic_count(grid.dim())) {
    throw ContractError("harmonic index out of range");
  }
  std::vector<double> f(grid.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double theta = grid.longitude(grid.column(k));
    f[k] = harmonic_value(grid.dim(), index, grid.normal(k), theta);
  }
  return f;
}

double min_radius(const SupportField& body) {
  for (double v : body.h) {
    if (!(v > 0.0)) return -std::numeric_limits<double>::infinity();
  }
  const RadiiField r = compute_radii(body);
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& rr : r.radii) lo = std::min(lo, rr[r.dim - 1]);
  return lo;
}

SupportField harmonic_body(const SphereGrid& grid, std::span<const double> coefficients,
                           double margin) {
  const int count = harmonic_count(grid.dim());
  if (static_cast<int>(coefficients.size()) > count) {
    throw ContractError("too many harmonic coefficients");
  }
  std::vector<double> p(grid.size(), 0.0);
  for (int i = 0; i < static_cast<int>(coefficients.size()); ++i) {
    if (coefficients[i] == 0.0) continue;
    const auto y = harmonic_field(grid, i);
    for (std::size_t k = 0; k < p.size(); ++k) p[k] += coefficients[i] * y[k];
  }
  double s = 1.0;
  for (int attempt = 0; attempt < 400; ++attempt, s *= 0.9) {
    std::vector<double> h(grid.size());
    for (std::size_t k = 0; k < h.size(); ++k) h[k] = 1.0 + s * p[k];
    SupportField body = make_support(grid, std::move(h));
    if (min_radius(body) >= margin) return body;
  }
  throw ContractError("could not shrink perturbation to a convex body");
}

std::vector<double> random_coefficients(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-0.2, 0.2);
  std::vector<double> c(harmonic_count(n));
  for (double& v : c) v = coef(rng);
  return c;
}

SupportField random_convex_body(const SphereGrid& grid, std::mt19937_64& rng) {
  return harmonic_body(grid, random_coefficients(grid.dim(), rng));
}

Eigen::Matrix2d random_chart(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> entry(-0.5, 0.5);
  for (;;) {
    Eigen::Matrix2d a = Eigen::Matrix2d::Identity();
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) a(i, j) += entry(rng);
    }
    if (std::abs(a.determinant()) >= 0.2) return a;
  }
}

}  // namespace gcf
