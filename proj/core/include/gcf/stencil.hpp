#pragma once

#include "gcf/sphere_grid.hpp"

#include <span>
#include <vector>

namespace gcf {

/// Centered 4th-order finite differences on a SphereGrid.
///
/// Chart axes: for n = 1 axis 0 is the angle theta; for n = 2 axis 0 is the colatitude phi and
/// axis 1 is the longitude theta. Longitude stencils are periodic. Colatitude stencils reach
/// across a pole by continuing the meridian: the ghost at colatitude -phi is the node at
/// (phi, theta + pi) multiplied by `parity`. Orthonormal-frame components of a rank-r tensor
/// carry parity (-1)^r; scalars carry +1.
std::vector<double> first_derivative(const SphereGrid& grid, std::span<const double> f, int axis,
                                     int parity = 1);
std::vector<double> second_derivative(const SphereGrid& grid, std::span<const double> f,
                                      int axis, int parity = 1);
/// d_phi d_theta f (n = 2 only).
std::vector<double> mixed_derivative(const SphereGrid& grid, std::span<const double> f,
                                     int parity = 1);

/// Largest |symbol| of the first- and second-derivative stencils, times the squared spacing.
inline constexpr double kFirstStencilRadius = 1.3722240;
inline constexpr double kSecondStencilRadius = 16.0 / 3.0;

}  // namespace gcf
