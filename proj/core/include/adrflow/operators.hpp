#pragma once

#include <functional>
#include <optional>
#include <string>

#include "adrflow/space.hpp"

namespace adrflow {

/// A maximally alpha-monotone operator presented through its resolvent oracle
/// (gamma, x) -> J_{gamma A}(x). The monotonicity modulus is a trusted
/// certificate: the library cannot verify maximality of a user-supplied
/// oracle. `direct_eval` is present only when the operator is single-valued
/// and is consumed by test oracles, never by the solver path.
struct OperatorSpec {
  std::function<VectorN(double, const VectorN&)> resolvent_oracle;
  double monotonicity_modulus = 0.0;
  std::optional<double> lipschitz_const;
  std::function<VectorN(const VectorN&)> direct_eval;
  std::string label;
};

/// An alpha-convex function with a proximity oracle
/// (tau, x) -> argmin_z evaluate(z) + (1/2 tau) |z - x|^2.
/// evaluate may return +infinity outside the effective domain.
struct ProxFunction {
  std::function<double(const VectorN&)> evaluate;
  double convexity_modulus = 0.0;
  std::function<VectorN(double, const VectorN&)> prox_oracle;
  std::string label;
};

/// J_{gamma A}(x). Requires gamma > 0 and 1 + gamma*alpha > 0; outside that
/// range the resolvent may be multivalued or empty and the call throws.
VectorN resolvent(const OperatorSpec& spec, double gamma, const VectorN& x);

/// (1 - lam)*x + lam*J_{gamma A}(x).
VectorN relaxed_resolvent(const OperatorSpec& spec, double gamma, double lam, const VectorN& x);

/// h(x) = (a/2)|x - p|^2 with modulus a. a < 0 gives the weakly convex case;
/// the prox (x + tau*a*p)/(1 + tau*a) is valid while 1 + tau*a > 0.
ProxFunction prox_quadratic(double a, const VectorN& p);

/// h(x) = weight * sum_i |x_i|, modulus 0. The prox is coordinatewise soft
/// thresholding; the tie at |x_i| == tau*weight maps to exactly 0.
ProxFunction prox_l1(double weight);

/// Wrap a prox oracle as an operator spec: the resolvent of the (Frechet)
/// subdifferential of h is the prox of h, with matching modulus.
OperatorSpec spec_from_prox(const ProxFunction& h);

/// The zero operator: modulus 0, resolvent = identity.
OperatorSpec zero_operator();

}  // namespace adrflow
