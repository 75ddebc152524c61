#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gcf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Violated precondition or malformed input (bad dimension, resolution, option value).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// A body is not an admissible strictly convex support function at some node.
class ConvexityError : public Error {
 public:
  ConvexityError(const std::string& what, std::size_t node, double value)
      : Error(what), node_(node), value_(value) {}

  std::size_t node() const noexcept { return node_; }
  double value() const noexcept { return value_; }

 private:
  std::size_t node_;
  double value_;
};

/// The flow cannot take another step: the body is about to vanish or every retry lost convexity.
class CollapseError : public Error {
 public:
  using Error::Error;
};

/// The shrinker ODE trajectory reached h <= 0.
class TrajectoryError : public Error {
 public:
  using Error::Error;
};

}  // namespace gcf
