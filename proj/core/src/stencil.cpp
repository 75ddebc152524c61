#include "gcf/stencil.hpp"

#include "gcf/error.hpp"

#include <cassert>
#include <cstdint>

namespace gcf {

namespace {

struct Taps {
  double m2, m1, p1, p2;
};

inline double tap(std::span<const double> f, std::int32_t e, double parity) {
  return e >= 0 ? f[e] : parity * f[-e - 1];
}

// Values of f at offsets -2, -1, +1, +2 along an axis from node k.
inline Taps gather(const SphereGrid& grid, std::span<const double> f, std::size_t k, int axis,
                   double parity) {
  const auto& nb = grid.neighbors(k, axis);
  return {tap(f, nb[0], parity), tap(f, nb[1], parity), tap(f, nb[2], parity),
          tap(f, nb[3], parity)};
}

double spacing(const SphereGrid& grid, int axis) {
  return (grid.dim() == 1 || axis == 1) ? grid.d_longitude() : grid.d_colatitude();
}

void check_axis(const SphereGrid& grid, int axis) {
  if (axis < 0 || axis >= grid.dim()) throw ContractError("stencil axis out of range");
}

}  // namespace

std::vector<double> first_derivative(const SphereGrid& grid, std::span<const double> f, int axis,
                                     int parity) {
  check_axis(grid, axis);
  assert(f.size() == grid.size());
  const double inv = 1.0 / (12.0 * spacing(grid, axis));
  std::vector<double> out(grid.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const Taps t = gather(grid, f, k, axis, parity);
    out[k] = (8.0 * (t.p1 - t.m1) - (t.p2 - t.m2)) * inv;
  }
  return out;
}

std::vector<double> second_derivative(const SphereGrid& grid, std::span<const double> f,
                                      int axis, int parity) {
  check_axis(grid, axis);
  assert(f.size() == grid.size());
  const double d = spacing(grid, axis);
  const double inv = 1.0 / (12.0 * d * d);
  std::vector<double> out(grid.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const Taps t = gather(grid, f, k, axis, parity);
    out[k] = (16.0 * (t.p1 + t.m1) - (t.p2 + t.m2) - 30.0 * f[k]) * inv;
  }
  return out;
}

std::vector<double> mixed_derivative(const SphereGrid& grid, std::span<const double> f,
                                     int parity) {
  if (grid.dim() != 2) throw ContractError("mixed derivative needs n = 2");
  const auto ft = first_derivative(grid, f, 1, parity);
  return first_derivative(grid, ft, 0, parity);
}

}  // namespace gcf
