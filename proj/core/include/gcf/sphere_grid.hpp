#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace gcf {

/// Sampling grid on S^1 or S^2.
///
/// n = 1: `n_longitude()` uniform angles theta_j = 2*pi*j/N, weights 2*pi/N.
/// n = 2: half-offset latitude-longitude grid. Colatitudes phi_i = (i + 1/2)*pi/N_phi
/// (no node on a pole), longitudes theta_j = 2*pi*j/N_theta with N_theta even so that
/// theta + pi is always a grid longitude. Nodes are stored colatitude-major:
/// node = i * N_theta + j.
///
/// Quadrature is Fejer's first rule in cos(phi) times the trapezoid rule in theta; the
/// weights are positive and sum to |S^n| to roundoff.
class SphereGrid {
 public:
  SphereGrid() = default;

  int dim() const noexcept { return dim_; }
  int n_colatitude() const noexcept { return n_colat_; }
  int n_longitude() const noexcept { return n_long_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_colat_) * n_long_; }

  double d_colatitude() const noexcept { return d_colat_; }
  double d_longitude() const noexcept { return d_long_; }

  /// Largest spacing over the axes, in radians.
  double max_spacing() const noexcept;

  double colatitude(int i) const noexcept { return colat_[i]; }
  double longitude(int j) const noexcept { return long_[j]; }
  double sin_colatitude(int i) const noexcept { return sin_colat_[i]; }
  double cos_colatitude(int i) const noexcept { return cos_colat_[i]; }

  int ring(std::size_t node) const noexcept { return static_cast<int>(node / n_long_); }
  int column(std::size_t node) const noexcept { return static_cast<int>(node % n_long_); }
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * n_long_ + j;
  }

  const std::vector<double>& weights() const noexcept { return tables_->weights; }

  /// Stencil neighbours at offsets -2, -1, +1, +2 along `axis`. An entry e < 0 crosses a pole:
  /// the neighbour is node -e - 1 and its value picks up the parity sign.
  const std::array<std::int32_t, 4>& neighbors(std::size_t node, int axis) const noexcept {
    return tables_->neighbors[axis][node];
  }

  /// Measure of the unit sphere: 2*pi (n = 1) or 4*pi (n = 2).
  double sphere_measure() const noexcept;
  /// Volume of the unit ball B^{n+1}.
  double ball_volume() const noexcept;

  /// Outward unit normal (Gauss map) at a node. For n = 1 the z component is zero.
  Eigen::Vector3d normal(std::size_t node) const noexcept;
  /// Coordinate tangent vectors d(nu)/du^a: (d_phi nu, d_theta nu) for n = 2, (d_theta nu) for n = 1.
  Eigen::Vector3d normal_derivative(std::size_t node, int axis) const noexcept;
  /// Unit tangent e_a of the orthonormal sphere frame (e_phi, e_theta/|.|).
  Eigen::Vector3d frame_vector(std::size_t node, int axis) const noexcept;

  /// Quadrature sum of a nodal field.
  double integrate(std::span<const double> f) const;

  friend SphereGrid build_grid(int n, std::span<const int> resolution);

 private:
  int dim_ = 0;
  int n_colat_ = 0;
  int n_long_ = 0;
  double d_colat_ = 0.0;
  double d_long_ = 0.0;
  std::vector<double> colat_, sin_colat_, cos_colat_;
  std::vector<double> long_, sin_long_, cos_long_;
  struct Tables {
    std::vector<double> weights;
    std::array<std::vector<std::array<std::int32_t, 4>>, 2> neighbors;
  };
  std::shared_ptr<const Tables> tables_;
};

/// Builds a grid. `resolution` holds one count for n = 1 and (N_phi, N_theta) for n = 2.
/// Throws ContractError for n outside {1, 2}, fewer than 16 nodes per axis, or odd N_theta.
SphereGrid build_grid(int n, std::span<const int> resolution);
SphereGrid build_grid(int n, std::initializer_list<int> resolution);

/// Fejer first-rule weights for the nodes cos((k + 1/2) pi / N) on [-1, 1]; they sum to 2.
std::vector<double> fejer_weights(int count);

}  // namespace gcf
