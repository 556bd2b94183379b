#include "adrflow/problems.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "adrflow/errors.hpp"

namespace adrflow {

namespace {

Eigen::VectorXd to_eigen(const VectorN& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.dim()));
  for (std::size_t i = 0; i < v.dim(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

VectorN from_eigen(const Eigen::VectorXd& v) {
  std::vector<double> out(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = v[i];
  return VectorN(std::move(out));
}

void require_symmetric(const Eigen::MatrixXd& m, const char* name) {
  if (m.rows() != m.cols()) {
    throw InvalidProblemError(std::string(name) + " must be square");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidProblemError(std::string(name) + " must be symmetric");
  }
}

OperatorSpec quadratic_operator(double a, const VectorN& p) {
  OperatorSpec spec = spec_from_prox(prox_quadratic(a, p));
  spec.direct_eval = [a, p](const VectorN& x) { return scale(a, subtract(x, p)); };
  spec.lipschitz_const = std::abs(a);
  return spec;
}

OperatorSpec affine_operator(const Eigen::MatrixXd& m, const VectorN& c, double modulus) {
  OperatorSpec spec;
  spec.monotonicity_modulus = modulus;
  const Eigen::VectorXd ce = to_eigen(c);
  spec.resolvent_oracle = [m, ce, modulus](double gamma, const VectorN& x) {
    if (!(1.0 + gamma * modulus > 0.0)) {
      throw InvalidParameterError("affine resolvent: 1 + gamma*alpha <= 0");
    }
    const Eigen::MatrixXd lhs =
        Eigen::MatrixXd::Identity(m.rows(), m.cols()) + gamma * m;
    return from_eigen(lhs.ldlt().solve(to_eigen(x) - gamma * ce));
  };
  spec.direct_eval = [m, ce](const VectorN& x) { return from_eigen(m * to_eigen(x) + ce); };
  spec.label = "affine";
  return spec;
}

}  // namespace

ProblemSpec problem_quad_quad(double a, const VectorN& p, double b, const VectorN& q) {
  if (p.dim() != q.dim()) {
    throw DimensionError("problem_quad_quad: p and q dimensions differ");
  }
  if (!(a + b > 0.0)) {
    throw InvalidProblemError("problem_quad_quad: requires a + b > 0, got " +
                              std::to_string(a + b));
  }
  ProblemSpec problem;
  problem.spec_a = quadratic_operator(a, p);
  problem.spec_b = quadratic_operator(b, q);
  problem.alpha = a;
  problem.beta = b;
  problem.dim = p.dim();
  problem.analytic_solution = scale(1.0 / (a + b), add(scale(a, p), scale(b, q)));
  problem.objective = [a, p, b, q](const VectorN& x) {
    return 0.5 * a * norm_sq(subtract(x, p)) + 0.5 * b * norm_sq(subtract(x, q));
  };
  problem.label = "quad_quad";
  return problem;
}

ProblemSpec problem_quad_l1(double a, const VectorN& p, double w) {
  if (!(a > 0.0)) throw InvalidProblemError("problem_quad_l1: a must be positive");
  if (!(w > 0.0)) throw InvalidProblemError("problem_quad_l1: w must be positive");
  ProblemSpec problem;
  problem.spec_a = quadratic_operator(a, p);
  const ProxFunction l1 = prox_l1(w);
  problem.spec_b = spec_from_prox(l1);
  problem.alpha = a;
  problem.beta = 0.0;
  problem.dim = p.dim();

  const double threshold = w / a;
  std::vector<double> sol(p.dim());
  for (std::size_t i = 0; i < p.dim(); ++i) {
    const double mag = std::abs(p[i]) - threshold;
    sol[i] = mag > 0.0 ? std::copysign(mag, p[i]) : 0.0;
  }
  problem.analytic_solution = VectorN(std::move(sol));
  problem.objective = [a, p, l1](const VectorN& x) {
    return 0.5 * a * norm_sq(subtract(x, p)) + l1.evaluate(x);
  };
  problem.label = "quad_l1";
  return problem;
}

ProblemSpec problem_affine(const Eigen::MatrixXd& m_a, const VectorN& c_a,
                           const Eigen::MatrixXd& m_b, const VectorN& c_b) {
  require_symmetric(m_a, "mA");
  require_symmetric(m_b, "mB");
  const auto n = static_cast<std::size_t>(m_a.rows());
  if (static_cast<std::size_t>(m_b.rows()) != n || c_a.dim() != n || c_b.dim() != n) {
    throw DimensionError("problem_affine: inconsistent dimensions");
  }

  // Symmetric matrices: the modulus is the exact minimum eigenvalue and the
  // Lipschitz constant the spectral radius.
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_a(m_a);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_b(m_b);
  const double alpha = eig_a.eigenvalues().minCoeff();
  const double beta = eig_b.eigenvalues().minCoeff();
  if (!(alpha + beta >= 0.0)) {
    throw InvalidProblemError("problem_affine: requires alpha + beta >= 0, got " +
                              std::to_string(alpha + beta));
  }

  ProblemSpec problem;
  problem.spec_a = affine_operator(m_a, c_a, alpha);
  problem.spec_a.lipschitz_const = eig_a.eigenvalues().cwiseAbs().maxCoeff();
  problem.spec_b = affine_operator(m_b, c_b, beta);
  problem.spec_b.lipschitz_const = eig_b.eigenvalues().cwiseAbs().maxCoeff();
  problem.alpha = alpha;
  problem.beta = beta;
  problem.dim = n;

  const Eigen::MatrixXd sum = m_a + m_b;
  const Eigen::VectorXd rhs = -(to_eigen(c_a) + to_eigen(c_b));
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(sum);
  if (!lu.isInvertible()) {
    throw InvalidProblemError("problem_affine: mA + mB is singular");
  }
  problem.analytic_solution = from_eigen(lu.solve(rhs));

  const Eigen::VectorXd ca_e = to_eigen(c_a);
  const Eigen::VectorXd cb_e = to_eigen(c_b);
  problem.objective = [m_a, ca_e, m_b, cb_e](const VectorN& x) {
    const Eigen::VectorXd xe = to_eigen(x);
    return 0.5 * xe.dot(m_a * xe) + ca_e.dot(xe) + 0.5 * xe.dot(m_b * xe) + cb_e.dot(xe);
  };
  problem.label = "affine";
  return problem;
}

namespace {

double eval_coordinate(const ProblemSpec& problem, VectorN point, std::size_t coord, double v) {
  std::vector<double> coords = point.coords();
  coords[coord] = v;
  return problem.objective(VectorN(std::move(coords)));
}

double golden_section(const ProblemSpec& problem, const VectorN& point, std::size_t coord,
                      double lo, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = eval_coordinate(problem, point, coord, x1);
  double f2 = eval_coordinate(problem, point, coord, x2);
  while (b - a > 1e-12) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = eval_coordinate(problem, point, coord, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = eval_coordinate(problem, point, coord, x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

VectorN brute_force_minimizer(const ProblemSpec& problem,
                              const std::vector<std::pair<double, double>>& box,
                              double resolution) {
  if (problem.dim > 2) {
    throw OracleScopeError("brute_force_minimizer: supports dim <= 2, got " +
                           std::to_string(problem.dim));
  }
  if (!problem.objective) {
    throw InvalidProblemError("brute_force_minimizer: problem has no evaluable objective");
  }
  if (box.size() != problem.dim) {
    throw DimensionError("brute_force_minimizer: box size does not match problem dimension");
  }
  if (!(resolution > 0.0)) {
    throw InvalidParameterError("brute_force_minimizer: resolution must be positive");
  }

  std::vector<std::size_t> counts(problem.dim);
  for (std::size_t d = 0; d < problem.dim; ++d) {
    if (!(box[d].second > box[d].first)) {
      throw InvalidParameterError("brute_force_minimizer: empty box interval");
    }
    counts[d] = static_cast<std::size_t>((box[d].second - box[d].first) / resolution) + 1;
  }

  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_point(problem.dim, 0.0);
  std::vector<double> point(problem.dim, 0.0);
  if (problem.dim == 1) {
    for (std::size_t i = 0; i < counts[0]; ++i) {
      point[0] = box[0].first + static_cast<double>(i) * resolution;
      const double v = problem.objective(VectorN(point));
      if (v < best) {
        best = v;
        best_point = point;
      }
    }
  } else {
    for (std::size_t i = 0; i < counts[0]; ++i) {
      point[0] = box[0].first + static_cast<double>(i) * resolution;
      for (std::size_t j = 0; j < counts[1]; ++j) {
        point[1] = box[1].first + static_cast<double>(j) * resolution;
        const double v = problem.objective(VectorN(point));
        if (v < best) {
          best = v;
          best_point = point;
        }
      }
    }
  }

  VectorN refined{VectorN(best_point)};
  for (std::size_t d = 0; d < problem.dim; ++d) {
    const double lo = std::max(box[d].first, refined[d] - 2.0 * resolution);
    const double hi = std::min(box[d].second, refined[d] + 2.0 * resolution);
    const double v = golden_section(problem, refined, d, lo, hi);
    std::vector<double> coords = refined.coords();
    coords[d] = v;
    refined = VectorN(std::move(coords));
  }
  return refined;
}

}  // namespace adrflow
