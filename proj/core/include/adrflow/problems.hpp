#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "adrflow/operators.hpp"
#include "adrflow/space.hpp"

namespace adrflow {

/// A two-operator inclusion 0 in A(u) + B(u) with certified moduli and, when
/// available, a closed-form point of zer(A + B) plus an evaluable objective.
struct ProblemSpec {
  OperatorSpec spec_a;
  OperatorSpec spec_b;
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t dim = 0;
  std::optional<VectorN> analytic_solution;
  std::function<double(const VectorN&)> objective;  // null when not evaluable
  std::string label;
};

/// A = grad of (a/2)|x-p|^2, B = grad of (b/2)|x-q|^2; requires a + b > 0.
/// Solution (a*p + b*q)/(a + b).
ProblemSpec problem_quad_quad(double a, const VectorN& p, double b, const VectorN& q);

/// A = grad of (a/2)|x-p|^2 with a > 0, B = subdifferential of w*|x|_1.
/// Solution: coordinatewise soft threshold of p at w/a.
ProblemSpec problem_quad_l1(double a, const VectorN& p, double w);

/// A(x) = mA*x + cA, B(x) = mB*x + cB with symmetric matrices. Moduli are the
/// exact minimum eigenvalues and the Lipschitz constants the spectral radii.
/// Solution solves (mA + mB)x = -(cA + cB).
ProblemSpec problem_affine(const Eigen::MatrixXd& m_a, const VectorN& c_a,
                           const Eigen::MatrixXd& m_b, const VectorN& c_b);

/// Grid argmin of the objective over a per-coordinate box, refined by one
/// golden-section pass per coordinate. Supports dim <= 2 only.
VectorN brute_force_minimizer(const ProblemSpec& problem,
                              const std::vector<std::pair<double, double>>& box,
                              double resolution);

}  // namespace adrflow
