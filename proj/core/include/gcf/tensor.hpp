#pragma once

#include "gcf/sphere_grid.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <vector>

namespace gcf {

/// Index position of a tensor slot.
enum class Slot : unsigned char { Co, Contra };

/// Tensor field of rank <= 4 in chart coordinates, one block of dim^rank components per node.
/// Component multi-indices are flattened most-significant-first: (i, j, k) -> (i*dim + j)*dim + k.
class TensorField {
 public:
  TensorField() = default;
  TensorField(int dim, std::vector<Slot> slots, std::size_t nodes);

  int dim() const noexcept { return dim_; }
  int rank() const noexcept { return static_cast<int>(slots_.size()); }
  int components() const noexcept { return ncomp_; }
  std::size_t nodes() const noexcept { return nodes_; }
  const std::vector<Slot>& slots() const noexcept { return slots_; }

  double& operator()(std::size_t node, int comp) { return data_[node * ncomp_ + comp]; }
  double operator()(std::size_t node, int comp) const { return data_[node * ncomp_ + comp]; }

  double& at(std::size_t node, int i, int j) { return (*this)(node, i * dim_ + j); }
  double at(std::size_t node, int i, int j) const { return (*this)(node, i * dim_ + j); }
  double& at(std::size_t node, int i, int j, int k) {
    return (*this)(node, (i * dim_ + j) * dim_ + k);
  }
  double at(std::size_t node, int i, int j, int k) const {
    return (*this)(node, (i * dim_ + j) * dim_ + k);
  }

  std::span<double> block(std::size_t node) { return {data_.data() + node * ncomp_, std::size_t(ncomp_)}; }
  std::span<const double> block(std::size_t node) const {
    return {data_.data() + node * ncomp_, std::size_t(ncomp_)};
  }

  /// Copies one component into a nodal scalar field.
  std::vector<double> component(int comp) const;

  /// Digit `slot` of the flattened component index.
  int digit(int comp, int slot) const noexcept;

 private:
  int dim_ = 0;
  int ncomp_ = 0;
  std::size_t nodes_ = 0;
  std::vector<Slot> slots_;
  std::vector<double> data_;
};

/// Scalar field wrapped as a rank-0 tensor.
TensorField scalar_tensor(int dim, std::span<const double> f);

/// Coordinate partial derivatives d_a T_{...}; the new leading slot is the derivative index.
/// Differencing is applied to orthonormal sphere-frame components, so fields that are constant
/// in that frame (the round metric, for instance) are differentiated exactly.
TensorField partial_derivatives(const SphereGrid& grid, const TensorField& t);

/// Levi-Civita covariant derivative with Christoffel symbols gamma(k, i, j) = Gamma^k_ij.
TensorField covariant_derivative(const SphereGrid& grid, const TensorField& t,
                                 const TensorField& gamma);

/// Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij) from a differenced metric.
TensorField christoffel_from_metric(const SphereGrid& grid, const TensorField& g,
                                    const TensorField& g_inv);

/// Pointwise norm induced by the metric (chart independent).
double tensor_norm(const TensorField& t, std::size_t node, const TensorField& g,
                   const TensorField& g_inv);

/// Pointwise a - b (same shape required).
TensorField difference(const TensorField& a, const TensorField& b);

/// Components in the chart u = A u': covariant slots pick up A, contravariant slots A^{-1}.
TensorField transform_chart(const TensorField& t, const Eigen::Matrix2d& a);

}  // namespace gcf
