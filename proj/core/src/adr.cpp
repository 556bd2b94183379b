#include "adrflow/adr.hpp"

#include <cmath>
#include <limits>

#include "adrflow/errors.hpp"

namespace adrflow {

namespace {

constexpr double kEqualityTol = 1e-12;

ConditionCheck strict_check(std::string name, double slack) {
  return {std::move(name), slack, true, slack > 0.0};
}

ConditionCheck nonstrict_check(std::string name, double slack) {
  return {std::move(name), slack, false, slack >= 0.0};
}

ConditionCheck equality_check(std::string name, double residual_abs) {
  const double slack = kEqualityTol - std::abs(residual_abs);
  return {std::move(name), slack, false, slack >= 0.0};
}

void append_domain_checks(const DRParams& p, std::vector<ConditionCheck>& checks) {
  checks.push_back(strict_check("gamma_positive", p.gamma));
  checks.push_back(strict_check("delta_positive", p.delta));
  checks.push_back(strict_check("resolvent_domain_A", 1.0 + p.gamma * p.alpha));
  checks.push_back(strict_check("resolvent_domain_B", 1.0 + p.delta * p.beta));
}

double coupling_ratio(const DRParams& p) {
  return p.gamma * p.alpha * p.beta / (p.alpha + p.beta);
}

void require_linkage(const DRParams& p) {
  if (!(std::min(1.0 + p.gamma * p.alpha, 1.0 + p.delta * p.beta) > 0.0)) {
    throw InvalidParameterError("apply_dr: min{1+gamma*alpha, 1+delta*beta} <= 0");
  }
  if (std::abs((p.lam - 1.0) * (p.mu - 1.0) - 1.0) > kEqualityTol) {
    throw InvalidParameterError("apply_dr: (lambda-1)*(mu-1) != 1");
  }
  if (std::abs(p.delta - (p.lam - 1.0) * p.gamma) > kEqualityTol * std::max(1.0, p.gamma)) {
    throw InvalidParameterError("apply_dr: delta != (lambda-1)*gamma");
  }
}

void require_moduli_match(const OperatorSpec& spec_a, const OperatorSpec& spec_b,
                          const DRParams& p) {
  if (std::abs(spec_a.monotonicity_modulus - p.alpha) > kEqualityTol) {
    throw InvalidParameterError("apply_dr: operator A modulus " +
                                std::to_string(spec_a.monotonicity_modulus) +
                                " does not match params.alpha " + std::to_string(p.alpha));
  }
  if (std::abs(spec_b.monotonicity_modulus - p.beta) > kEqualityTol) {
    throw InvalidParameterError("apply_dr: operator B modulus " +
                                std::to_string(spec_b.monotonicity_modulus) +
                                " does not match params.beta " + std::to_string(p.beta));
  }
}

}  // namespace

std::string to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::C1: return "C1";
    case CaseTag::C2: return "C2";
    case CaseTag::C3: return "C3";
  }
  return "?";
}

CaseTag case_from_string(const std::string& s) {
  if (s == "C1" || s == "c1") return CaseTag::C1;
  if (s == "C2" || s == "c2") return CaseTag::C2;
  if (s == "C3" || s == "c3") return CaseTag::C3;
  throw ArgumentError("unknown case tag '" + s + "'");
}

std::vector<ConditionCheck> ValidationReport::violated_conditions() const {
  std::vector<ConditionCheck> out;
  for (const auto& c : checks) {
    if (!c.passed) out.push_back(c);
  }
  return out;
}

ValidationReport validate(const DRParams& p, CaseTag tag) {
  ValidationReport report;
  report.case_checked = tag;
  auto& checks = report.checks;

  switch (tag) {
    case CaseTag::C1: {
      append_domain_checks(p, checks);
      checks.push_back(equality_check("lambda_equals_2", p.lam - 2.0));
      checks.push_back(equality_check("mu_equals_2", p.mu - 2.0));
      checks.push_back(equality_check("gamma_equals_delta", p.gamma - p.delta));
      checks.push_back(strict_check("epsilon_above_0", p.epsilon));
      checks.push_back(strict_check("epsilon_below_1", 1.0 - p.epsilon));
      checks.push_back(strict_check("alpha_plus_beta_positive", p.alpha + p.beta));
      checks.push_back(
          strict_check("coupling_vs_epsilon", coupling_ratio(p) - (p.epsilon - 1.0)));
      break;
    }
    case CaseTag::C2: {
      append_domain_checks(p, checks);
      checks.push_back(nonstrict_check("lambda_ge_1", p.lam - 1.0));
      checks.push_back(nonstrict_check("mu_ge_1", p.mu - 1.0));
      checks.push_back(nonstrict_check("alpha_plus_beta_nonneg", p.alpha + p.beta));
      checks.push_back(strict_check("one_plus_2_gamma_alpha_positive", 1.0 + 2.0 * p.gamma * p.alpha));
      checks.push_back(nonstrict_check("mu_lower", p.mu - (2.0 - 2.0 * p.gamma * p.beta)));
      checks.push_back(nonstrict_check("mu_upper", (2.0 + 2.0 * p.gamma * p.alpha) - p.mu));
      checks.push_back(equality_check("lambda_mu_linkage", (p.lam - 1.0) * (p.mu - 1.0) - 1.0));
      checks.push_back(equality_check("delta_linkage", p.delta - (p.lam - 1.0) * p.gamma));
      break;
    }
    case CaseTag::C3: {
      append_domain_checks(p, checks);
      checks.push_back(equality_check("lambda_equals_2", p.lam - 2.0));
      checks.push_back(equality_check("mu_equals_2", p.mu - 2.0));
      checks.push_back(equality_check("gamma_equals_delta", p.gamma - p.delta));
      checks.push_back(strict_check("alpha_plus_beta_positive", p.alpha + p.beta));
      checks.push_back(strict_check("coupling_bound", coupling_ratio(p) + 1.0));
      break;
    }
  }

  report.passed = true;
  for (const auto& c : checks) {
    if (!c.passed || !std::isfinite(c.slack)) report.passed = false;
  }
  return report;
}

DRParams c2_params(double alpha, double beta, double gamma, double mu, double epsilon) {
  if (!(mu > 1.0)) {
    throw InvalidParameterError("c2_params: mu must exceed 1 to derive lambda, got " +
                                std::to_string(mu));
  }
  DRParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.gamma = gamma;
  const double lam_minus_1 = 1.0 / (mu - 1.0);
  p.lam = 1.0 + lam_minus_1;
  p.delta = lam_minus_1 * gamma;
  p.mu = mu;
  p.epsilon = epsilon;
  return p;
}

VectorN apply_dr(const OperatorSpec& spec_a, const OperatorSpec& spec_b, const DRParams& params,
                 const VectorN& x) {
  require_linkage(params);
  require_moduli_match(spec_a, spec_b, params);
  const VectorN mid = relaxed_resolvent(spec_a, params.gamma, params.lam, x);
  return relaxed_resolvent(spec_b, params.delta, params.mu, mid);
}

VectorN apply_averaged(const OperatorSpec& spec_a, const OperatorSpec& spec_b,
                       const DRParams& params, const VectorN& x) {
  if (!(params.epsilon >= 0.0) || !(params.epsilon < 1.0)) {
    throw InvalidParameterError("apply_averaged: epsilon must lie in [0,1), got " +
                                std::to_string(params.epsilon));
  }
  if (params.epsilon == 0.0) return x;
  return averaged_combination(1.0 - params.epsilon, x, params.epsilon,
                              apply_dr(spec_a, spec_b, params, x));
}

double residual(const OperatorSpec& spec_a, const OperatorSpec& spec_b, const DRParams& params,
                const VectorN& x) {
  return norm(subtract(apply_dr(spec_a, spec_b, params, x), x));
}

VectorN shadow(const OperatorSpec& spec_a, const DRParams& params, const VectorN& x) {
  return resolvent(spec_a, params.gamma, x);
}

double lipschitz_zeta(const DRParams& params, double l) {
  const ValidationReport report = validate(params, CaseTag::C2);
  if (!report.passed) {
    std::string names;
    for (const auto& c : report.violated_conditions()) names += " " + c.name;
    throw InvalidParameterError("lipschitz_zeta: params fail C2:" + names);
  }
  if (!(l >= std::abs(params.alpha))) {
    throw InvalidParameterError("lipschitz_zeta: l = " + std::to_string(l) +
                                " must be >= |alpha| = " + std::to_string(std::abs(params.alpha)));
  }
  const double top = 2.0 + 2.0 * params.gamma * params.alpha;
  if (!(params.mu < top)) {
    throw InvalidParameterError("lipschitz_zeta: requires mu < 2 + 2*gamma*alpha (mu = " +
                                std::to_string(params.mu) + ", bound = " + std::to_string(top) +
                                ")");
  }
  const double numer =
      params.lam * (params.mu - 1.0) * (params.mu - 1.0) * ((params.lam - 1.0) * top - params.lam);
  const double denom =
      1.0 + 2.0 * params.gamma * params.alpha + params.gamma * params.gamma * l * l;
  double radicand = 1.0 - numer / denom;
  if (radicand < 0.0) {
    if (radicand < -1e-12) {
      throw InvalidParameterError("lipschitz_zeta: negative radicand " +
                                  std::to_string(radicand));
    }
    radicand = 0.0;
  }
  return std::sqrt(radicand);
}

VectorN find_fixed_point(const OperatorSpec& spec_a, const OperatorSpec& spec_b,
                         const DRParams& params, const VectorN& u0, double tol, int max_iter) {
  const double eps = (params.epsilon > 0.0 && params.epsilon < 1.0) ? params.epsilon : 0.5;
  VectorN u = u0;
  for (int k = 0; k < max_iter; ++k) {
    const VectorN rr = apply_dr(spec_a, spec_b, params, u);
    if (norm(subtract(rr, u)) <= tol) return u;
    u = averaged_combination(1.0 - eps, u, eps, rr);
  }
  throw ConvergenceError("find_fixed_point: residual did not reach " + std::to_string(tol) +
                         " within " + std::to_string(max_iter) + " iterations");
}

}  // namespace adrflow
