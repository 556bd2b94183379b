#include "adrflow/operators.hpp"

#include <cmath>
#include <vector>

#include "adrflow/errors.hpp"

namespace adrflow {

VectorN resolvent(const OperatorSpec& spec, double gamma, const VectorN& x) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidParameterError("resolvent: gamma must be positive, got " + std::to_string(gamma));
  }
  const double domain = 1.0 + gamma * spec.monotonicity_modulus;
  if (!(domain > 0.0)) {
    throw InvalidParameterError("resolvent: 1 + gamma*alpha = " + std::to_string(domain) +
                                " <= 0 for operator '" + spec.label + "'");
  }
  if (!spec.resolvent_oracle) {
    throw InvalidParameterError("resolvent: operator '" + spec.label + "' has no oracle");
  }
  return spec.resolvent_oracle(gamma, x);
}

VectorN relaxed_resolvent(const OperatorSpec& spec, double gamma, double lam, const VectorN& x) {
  return averaged_combination(1.0 - lam, x, lam, resolvent(spec, gamma, x));
}

ProxFunction prox_quadratic(double a, const VectorN& p) {
  ProxFunction h;
  h.convexity_modulus = a;
  h.label = "quadratic(a=" + std::to_string(a) + ")";
  h.evaluate = [a, p](const VectorN& x) { return 0.5 * a * norm_sq(subtract(x, p)); };
  h.prox_oracle = [a, p](double tau, const VectorN& x) {
    const double denom = 1.0 + tau * a;
    if (!(denom > 0.0)) {
      throw InvalidParameterError("prox_quadratic: 1 + tau*a = " + std::to_string(denom) +
                                  " <= 0");
    }
    return scale(1.0 / denom, add(x, scale(tau * a, p)));
  };
  return h;
}

ProxFunction prox_l1(double weight) {
  if (!(weight > 0.0)) {
    throw InvalidParameterError("prox_l1: weight must be positive");
  }
  ProxFunction h;
  h.convexity_modulus = 0.0;
  h.label = "l1(w=" + std::to_string(weight) + ")";
  h.evaluate = [weight](const VectorN& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.dim(); ++i) s += std::abs(x[i]);
    return weight * s;
  };
  h.prox_oracle = [weight](double tau, const VectorN& x) {
    const double threshold = tau * weight;
    std::vector<double> out(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) {
      const double mag = std::abs(x[i]) - threshold;
      out[i] = mag > 0.0 ? std::copysign(mag, x[i]) : 0.0;
    }
    return VectorN(std::move(out));
  };
  return h;
}

OperatorSpec spec_from_prox(const ProxFunction& h) {
  OperatorSpec spec;
  spec.monotonicity_modulus = h.convexity_modulus;
  spec.resolvent_oracle = h.prox_oracle;
  spec.label = "subgrad(" + h.label + ")";
  return spec;
}

OperatorSpec zero_operator() {
  OperatorSpec spec;
  spec.monotonicity_modulus = 0.0;
  spec.resolvent_oracle = [](double, const VectorN& x) { return x; };
  spec.direct_eval = [](const VectorN& x) { return VectorN::zeros(x.dim()); };
  spec.lipschitz_const = 0.0;
  spec.label = "zero";
  return spec;
}

}  // namespace adrflow
