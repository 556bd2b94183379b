#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "adrflow/errors.hpp"

namespace adrflow {

/// Dense real coordinate vector. All public operations keep every coordinate
/// finite; constructors reject NaN and infinity.
class VectorN {
 public:
  VectorN() = default;
  explicit VectorN(std::vector<double> coords);
  VectorN(std::initializer_list<double> coords);

  static VectorN zeros(std::size_t dim);

  [[nodiscard]] std::size_t dim() const { return coords_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return coords_[i]; }
  [[nodiscard]] const std::vector<double>& coords() const { return coords_; }

  friend bool operator==(const VectorN& a, const VectorN& b) = default;

 private:
  std::vector<double> coords_;
};

VectorN add(const VectorN& x, const VectorN& y);
VectorN subtract(const VectorN& x, const VectorN& y);
VectorN scale(double c, const VectorN& x);
double dot(const VectorN& x, const VectorN& y);
double norm_sq(const VectorN& x);
double norm(const VectorN& x);
double distance(const VectorN& x, const VectorN& y);

/// eps*x + rho*y. Satisfies
///   norm_sq(eps*x + rho*y) == eps*(eps+rho)*norm_sq(x) + rho*(eps+rho)*norm_sq(y)
///                             - eps*rho*norm_sq(x-y).
VectorN averaged_combination(double eps, const VectorN& x, double rho, const VectorN& y);

}  // namespace adrflow
