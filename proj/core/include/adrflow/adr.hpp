#pragma once

#include <string>
#include <vector>

#include "adrflow/operators.hpp"
#include "adrflow/space.hpp"

namespace adrflow {

/// Parameter tuple of the relaxed two-operator splitting
///   RR = R^mu_{delta B} o R^lambda_{gamma A},
/// with the linkage (lambda-1)(mu-1) = 1 and delta = (lambda-1)*gamma, and the
/// averaging weight epsilon of T^eps = (1-eps)*I + eps*RR. epsilon = 0 is
/// admitted (the un-averaged operator); epsilon = 1 is not.
struct DRParams {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 1.0;
  double delta = 1.0;
  double lam = 2.0;
  double mu = 2.0;
  double epsilon = 0.0;
};

/// Parameter regimes with distinct convergence guarantees.
enum class CaseTag { C1, C2, C3 };

std::string to_string(CaseTag tag);
CaseTag case_from_string(const std::string& s);

/// One named inequality (or equality-within-tolerance) evaluated by the
/// validator. `slack` is the satisfied margin: strict checks need slack > 0,
/// non-strict checks slack >= 0, equality checks carry slack = tol - |residual|.
struct ConditionCheck {
  std::string name;
  double slack = 0.0;
  bool strict = false;
  bool passed = false;
};

struct ValidationReport {
  CaseTag case_checked = CaseTag::C1;
  bool passed = false;
  std::vector<ConditionCheck> checks;

  [[nodiscard]] std::vector<ConditionCheck> violated_conditions() const;
};

/// Evaluate every inequality of the named case plus the shared linkage
/// constraints. Failures are reported with their slack, never thrown.
ValidationReport validate(const DRParams& params, CaseTag tag);

/// Build a C2 tuple from (alpha, beta, gamma, mu): lambda and delta are
/// derived exactly from mu so the equality constraints hold to rounding.
DRParams c2_params(double alpha, double beta, double gamma, double mu, double epsilon = 0.0);

/// R^mu_{delta B}(R^lambda_{gamma A}(x)).
VectorN apply_dr(const OperatorSpec& spec_a, const OperatorSpec& spec_b, const DRParams& params,
                 const VectorN& x);

/// T^eps(x) = (1-eps)*x + eps*RR(x).
VectorN apply_averaged(const OperatorSpec& spec_a, const OperatorSpec& spec_b,
                       const DRParams& params, const VectorN& x);

/// Fixed-point residual |RR(x) - x|.
double residual(const OperatorSpec& spec_a, const OperatorSpec& spec_b, const DRParams& params,
                const VectorN& x);

/// Shadow point J_{gamma A}(x). At a fixed point of RR this lands in
/// zer(A + B).
VectorN shadow(const OperatorSpec& spec_a, const DRParams& params, const VectorN& x);

/// Lipschitz constant of RR when A is single-valued and l-Lipschitz:
///   zeta = sqrt(1 - lam*(mu-1)^2*((lam-1)*(2+2*gamma*alpha) - lam)
///                  / (1 + 2*gamma*alpha + gamma^2*l^2)) < 1.
/// Requires a C2-valid tuple, mu != 2 + 2*gamma*alpha, and l >= |alpha|.
double lipschitz_zeta(const DRParams& params, double l);

/// Locate a fixed point of RR by averaged iteration from u0 until the
/// residual drops to `tol`. Uses params.epsilon when in (0,1), else 1/2.
VectorN find_fixed_point(const OperatorSpec& spec_a, const OperatorSpec& spec_b,
                         const DRParams& params, const VectorN& u0, double tol = 1e-12,
                         int max_iter = 1000000);

}  // namespace adrflow
