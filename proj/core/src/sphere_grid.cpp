#include "gcf/sphere_grid.hpp"

#include "gcf/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace gcf {

namespace {

constexpr int kMinNodesPerAxis = 16;

}  // namespace

std::vector<double> fejer_weights(int count) {
  std::vector<double> w(count);
  const double pi = std::numbers::pi;
  for (int k = 0; k < count; ++k) {
    const double t = (k + 0.5) * pi / count;
    double s = 0.0;
    for (int j = 1; j <= count / 2; ++j) {
      s += std::cos(2.0 * j * t) / (4.0 * j * j - 1.0);
    }
    w[k] = 2.0 / count * (1.0 - 2.0 * s);
  }
  return w;
}

SphereGrid build_grid(int n, std::initializer_list<int> resolution) {
  return build_grid(n, std::span<const int>(resolution.begin(), resolution.size()));
}

SphereGrid build_grid(int n, std::span<const int> resolution) {
  if (n != 1 && n != 2) {
    throw ContractError("unsupported dimension n=" + std::to_string(n) + " (expected 1 or 2)");
  }
  if (static_cast<int>(resolution.size()) != n) {
    throw ContractError("resolution needs " + std::to_string(n) + " node count(s), got " +
                        std::to_string(resolution.size()));
  }
  for (int r : resolution) {
    if (r < kMinNodesPerAxis) {
      throw ContractError("resolution too small: " + std::to_string(r) + " < " +
                          std::to_string(kMinNodesPerAxis) + " nodes per axis");
    }
  }

  const double pi = std::numbers::pi;
  SphereGrid g;
  g.dim_ = n;
  if (n == 1) {
    g.n_colat_ = 1;
    g.n_long_ = resolution[0];
    g.d_colat_ = 0.0;
    g.colat_ = {pi / 2};
    g.sin_colat_ = {1.0};
    g.cos_colat_ = {0.0};
  } else {
    g.n_colat_ = resolution[0];
    g.n_long_ = resolution[1];
    if (g.n_long_ % 2 != 0) {
      throw ContractError("longitude count must be even for pole-crossing stencils, got " +
                          std::to_string(g.n_long_));
    }
    g.d_colat_ = pi / g.n_colat_;
    for (int i = 0; i < g.n_colat_; ++i) {
      const double phi = (i + 0.5) * g.d_colat_;
      g.colat_.push_back(phi);
      g.sin_colat_.push_back(std::sin(phi));
      g.cos_colat_.push_back(std::cos(phi));
    }
  }
  g.d_long_ = 2.0 * pi / g.n_long_;
  for (int j = 0; j < g.n_long_; ++j) {
    const double th = j * g.d_long_;
    g.long_.push_back(th);
    g.sin_long_.push_back(std::sin(th));
    g.cos_long_.push_back(std::cos(th));
  }

  auto tables = std::make_shared<SphereGrid::Tables>();
  tables->weights.resize(g.size());
  if (n == 1) {
    std::fill(tables->weights.begin(), tables->weights.end(), g.d_long_);
  } else {
    const auto wf = fejer_weights(g.n_colat_);
    for (int i = 0; i < g.n_colat_; ++i) {
      for (int j = 0; j < g.n_long_; ++j) {
        tables->weights[g.index(i, j)] = wf[i] * g.d_long_;
      }
    }
  }

  const int nl = g.n_long_;
  const int nc = g.n_colat_;
  const int offsets[4] = {-2, -1, 1, 2};
  auto& along_long = tables->neighbors[n == 1 ? 0 : 1];
  along_long.resize(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const int i = g.ring(k), j = g.column(k);
    for (int a = 0; a < 4; ++a) {
      along_long[k][a] = static_cast<std::int32_t>(g.index(i, ((j + offsets[a]) % nl + nl) % nl));
    }
  }
  if (n == 2) {
    // Continuing a meridian past a pole lands on longitude theta + pi.
    auto& along_colat = tables->neighbors[0];
    along_colat.resize(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
      const int i = g.ring(k), j = g.column(k);
      for (int a = 0; a < 4; ++a) {
        const int ii = i + offsets[a];
        const int jj = (j + nl / 2) % nl;
        std::int32_t e;
        if (ii < 0) {
          e = -static_cast<std::int32_t>(g.index(-1 - ii, jj)) - 1;
        } else if (ii >= nc) {
          e = -static_cast<std::int32_t>(g.index(2 * nc - 1 - ii, jj)) - 1;
        } else {
          e = static_cast<std::int32_t>(g.index(ii, j));
        }
        along_colat[k][a] = e;
      }
    }
  }
  g.tables_ = std::move(tables);
  return g;
}

double SphereGrid::max_spacing() const noexcept { return std::max(d_colat_, d_long_); }

double SphereGrid::sphere_measure() const noexcept {
  return dim_ == 1 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi;
}

double SphereGrid::ball_volume() const noexcept {
  return dim_ == 1 ? std::numbers::pi : 4.0 * std::numbers::pi / 3.0;
}

Eigen::Vector3d SphereGrid::normal(std::size_t node) const noexcept {
  const int i = ring(node);
  const int j = column(node);
  if (dim_ == 1) return {cos_long_[j], sin_long_[j], 0.0};
  return {sin_colat_[i] * cos_long_[j], sin_colat_[i] * sin_long_[j], cos_colat_[i]};
}

Eigen::Vector3d SphereGrid::frame_vector(std::size_t node, int axis) const noexcept {
  const int i = ring(node);
  const int j = column(node);
  if (dim_ == 1 || axis == 1) return {-sin_long_[j], cos_long_[j], 0.0};
  return {cos_colat_[i] * cos_long_[j], cos_colat_[i] * sin_long_[j], -sin_colat_[i]};
}

Eigen::Vector3d SphereGrid::normal_derivative(std::size_t node, int axis) const noexcept {
  if (dim_ == 2 && axis == 1) return sin_colat_[ring(node)] * frame_vector(node, 1);
  return frame_vector(node, dim_ == 1 ? 1 : axis);
}

double SphereGrid::integrate(std::span<const double> f) const {
  // Neumaier summation keeps the unit-sphere checks at roundoff.
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double term = tables_->weights[k] * f[k];
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

}  // namespace gcf
