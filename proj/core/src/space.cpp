#include "adrflow/space.hpp"

#include <cmath>
#include <utility>

namespace adrflow {

namespace {

void require_finite_scalar(double c, const char* what) {
  if (!std::isfinite(c)) {
    throw NonFiniteError(std::string(what) + " is not finite");
  }
}

void require_finite_coords(const std::vector<double>& coords) {
  for (double v : coords) {
    if (!std::isfinite(v)) {
      throw NonFiniteError("vector coordinate is not finite");
    }
  }
}

void require_same_dim(const VectorN& x, const VectorN& y, const char* op) {
  if (x.dim() != y.dim()) {
    throw DimensionError(std::string(op) + ": dimension mismatch (" + std::to_string(x.dim()) +
                         " vs " + std::to_string(y.dim()) + ")");
  }
}

}  // namespace

VectorN::VectorN(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) {
    throw DimensionError("VectorN requires at least one coordinate");
  }
  require_finite_coords(coords_);
}

VectorN::VectorN(std::initializer_list<double> coords)
    : VectorN(std::vector<double>(coords)) {}

VectorN VectorN::zeros(std::size_t dim) {
  return VectorN(std::vector<double>(dim, 0.0));
}

VectorN add(const VectorN& x, const VectorN& y) {
  require_same_dim(x, y, "add");
  std::vector<double> out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) out[i] = x[i] + y[i];
  return VectorN(std::move(out));
}

VectorN subtract(const VectorN& x, const VectorN& y) {
  require_same_dim(x, y, "subtract");
  std::vector<double> out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) out[i] = x[i] - y[i];
  return VectorN(std::move(out));
}

VectorN scale(double c, const VectorN& x) {
  require_finite_scalar(c, "scale factor");
  std::vector<double> out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) out[i] = c * x[i];
  return VectorN(std::move(out));
}

double dot(const VectorN& x, const VectorN& y) {
  require_same_dim(x, y, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) s += x[i] * y[i];
  return s;
}

double norm_sq(const VectorN& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) s += x[i] * x[i];
  return s;
}

double norm(const VectorN& x) { return std::sqrt(norm_sq(x)); }

double distance(const VectorN& x, const VectorN& y) { return norm(subtract(x, y)); }

VectorN averaged_combination(double eps, const VectorN& x, double rho, const VectorN& y) {
  require_finite_scalar(eps, "eps");
  require_finite_scalar(rho, "rho");
  require_same_dim(x, y, "averaged_combination");
  std::vector<double> out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) out[i] = eps * x[i] + rho * y[i];
  return VectorN(std::move(out));
}

}  // namespace adrflow
