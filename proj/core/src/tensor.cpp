#include "gcf/tensor.hpp"

#include "gcf/error.hpp"
#include "gcf/stencil.hpp"

#include <Eigen/LU>

#include <cmath>

namespace gcf {

namespace {

int ipow(int base, int e) {
  int r = 1;
  while (e-- > 0) r *= base;
  return r;
}

void require_same_shape(const TensorField& a, const TensorField& b) {
  if (a.dim() != b.dim() || a.slots() != b.slots() || a.nodes() != b.nodes()) {
    throw ContractError("tensor fields differ in shape");
  }
}

}  // namespace

TensorField::TensorField(int dim, std::vector<Slot> slots, std::size_t nodes)
    : dim_(dim), ncomp_(ipow(dim, static_cast<int>(slots.size()))), nodes_(nodes),
      slots_(std::move(slots)), data_(nodes_ * ncomp_, 0.0) {
  if (dim < 1 || dim > 2 || slots_.size() > 4) throw ContractError("unsupported tensor shape");
}

std::vector<double> TensorField::component(int comp) const {
  std::vector<double> f(nodes_);
  for (std::size_t k = 0; k < nodes_; ++k) f[k] = (*this)(k, comp);
  return f;
}

int TensorField::digit(int comp, int slot) const noexcept {
  const int shift = rank() - 1 - slot;
  for (int s = 0; s < shift; ++s) comp /= dim_;
  return comp % dim_;
}

TensorField scalar_tensor(int dim, std::span<const double> f) {
  TensorField t(dim, {}, f.size());
  for (std::size_t k = 0; k < f.size(); ++k) t(k, 0) = f[k];
  return t;
}

TensorField partial_derivatives(const SphereGrid& grid, const TensorField& t) {
  const int dim = t.dim();
  if (dim != grid.dim() || t.nodes() != grid.size()) throw ContractError("field/grid mismatch");
  std::vector<Slot> slots{Slot::Co};
  slots.insert(slots.end(), t.slots().begin(), t.slots().end());
  TensorField out(dim, std::move(slots), t.nodes());
  const int nc = t.components();
  const int parity = t.rank() % 2 == 0 ? 1 : -1;

  for (int comp = 0; comp < nc; ++comp) {
    // Net power of sin(phi) linking coordinate and frame components.
    int q = 0;
    if (dim == 2) {
      for (int s = 0; s < t.rank(); ++s) {
        if (t.digit(comp, s) == 1) q += t.slots()[s] == Slot::Co ? 1 : -1;
      }
    }
    std::vector<double> frame(t.nodes());
    for (std::size_t k = 0; k < t.nodes(); ++k) {
      const double s = dim == 2 ? grid.sin_colatitude(grid.ring(k)) : 1.0;
      frame[k] = t(k, comp) * std::pow(s, -q);
    }
    for (int axis = 0; axis < dim; ++axis) {
      const auto d = first_derivative(grid, frame, axis, parity);
      for (std::size_t k = 0; k < t.nodes(); ++k) {
        double v = d[k];
        if (dim == 2) {
          const int i = grid.ring(k);
          const double s = grid.sin_colatitude(i);
          v *= std::pow(s, q);
          if (axis == 0 && q != 0) v += q * grid.cos_colatitude(i) / s * t(k, comp);
        }
        out(k, axis * nc + comp) = v;
      }
    }
  }
  return out;
}

TensorField covariant_derivative(const SphereGrid& grid, const TensorField& t,
                                 const TensorField& gamma) {
  TensorField out = partial_derivatives(grid, t);
  const int dim = t.dim();
  const int nc = t.components();
  const int rank = t.rank();
  std::vector<int> stride(rank);
  for (int s = 0; s < rank; ++s) stride[s] = ipow(dim, rank - 1 - s);

  for (std::size_t node = 0; node < t.nodes(); ++node) {
    for (int k = 0; k < dim; ++k) {
      for (int comp = 0; comp < nc; ++comp) {
        double acc = 0.0;
        for (int s = 0; s < rank; ++s) {
          const int c = t.digit(comp, s);
          const int base = comp - c * stride[s];
          for (int l = 0; l < dim; ++l) {
            const double tl = t(node, base + l * stride[s]);
            if (t.slots()[s] == Slot::Co) {
              acc -= gamma.at(node, l, k, c) * tl;
            } else {
              acc += gamma.at(node, c, k, l) * tl;
            }
          }
        }
        out(node, k * nc + comp) += acc;
      }
    }
  }
  return out;
}

TensorField christoffel_from_metric(const SphereGrid& grid, const TensorField& g,
                                    const TensorField& g_inv) {
  const int dim = g.dim();
  const TensorField dg = partial_derivatives(grid, g);
  TensorField gamma(dim, {Slot::Contra, Slot::Co, Slot::Co}, g.nodes());
  for (std::size_t node = 0; node < g.nodes(); ++node) {
    for (int k = 0; k < dim; ++k) {
      for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
          double acc = 0.0;
          for (int l = 0; l < dim; ++l) {
            acc += g_inv.at(node, k, l) *
                   (dg.at(node, i, j, l) + dg.at(node, j, i, l) - dg.at(node, l, i, j));
          }
          gamma.at(node, k, i, j) = 0.5 * acc;
        }
      }
    }
  }
  return gamma;
}

double tensor_norm(const TensorField& t, std::size_t node, const TensorField& g,
                   const TensorField& g_inv) {
  const int nc = t.components();
  const int rank = t.rank();
  double acc = 0.0;
  for (int a = 0; a < nc; ++a) {
    const double ta = t(node, a);
    if (ta == 0.0) continue;
    for (int b = 0; b < nc; ++b) {
      double w = 1.0;
      for (int s = 0; s < rank; ++s) {
        const int ia = t.digit(a, s);
        const int ib = t.digit(b, s);
        w *= t.slots()[s] == Slot::Co ? g_inv.at(node, ia, ib) : g.at(node, ia, ib);
      }
      acc += w * ta * t(node, b);
    }
  }
  return std::sqrt(std::max(acc, 0.0));
}

TensorField difference(const TensorField& a, const TensorField& b) {
  require_same_shape(a, b);
  TensorField out = a;
  for (std::size_t k = 0; k < a.nodes(); ++k) {
    for (int c = 0; c < a.components(); ++c) out(k, c) -= b(k, c);
  }
  return out;
}

TensorField transform_chart(const TensorField& t, const Eigen::Matrix2d& a) {
  const int dim = t.dim();
  const Eigen::Matrix2d ainv = dim == 2 ? Eigen::Matrix2d(a.inverse())
                                        : Eigen::Matrix2d(Eigen::Matrix2d::Identity() / a(0, 0));
  const int nc = t.components();
  const int rank = t.rank();
  TensorField out(dim, t.slots(), t.nodes());
  for (std::size_t node = 0; node < t.nodes(); ++node) {
    for (int comp = 0; comp < nc; ++comp) {
      double acc = 0.0;
      for (int src = 0; src < nc; ++src) {
        double w = 1.0;
        for (int s = 0; s < rank && w != 0.0; ++s) {
          const int i = t.digit(comp, s);
          const int j = t.digit(src, s);
          // u = A u': d/du'^i = A^j_i d/du^j and du'^i = (A^{-1})^i_j du^j.
          w *= t.slots()[s] == Slot::Co ? a(j, i) : ainv(i, j);
        }
        acc += w * t(node, src);
      }
      out(node, comp) = acc;
    }
  }
  return out;
}

}  // namespace gcf
