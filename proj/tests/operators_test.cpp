#include <doctest.h>

#include <cmath>
#include <random>

#include "adrflow/operators.hpp"
#include "support/test_oracles.hpp"

using namespace adrflow;
using doctest::Approx;

namespace {

OperatorSpec quad_spec(double a, const VectorN& p) {
  return spec_from_prox(prox_quadratic(a, p));
}

}  // namespace

TEST_CASE("resolvent of scalar operators") {
  // A = I: (I + A)^{-1} halves.
  CHECK(resolvent(quad_spec(1.0, VectorN{0.0}), 1.0, VectorN{4.0}) == VectorN{2.0});
  // Zero operator: resolvent is the identity for any admissible gamma.
  CHECK(resolvent(zero_operator(), 5.0, VectorN{3.0, -3.0}) == VectorN{3.0, -3.0});

  // A(x) = -0.5x: solve z + gamma*(-0.5 z) = x independently by bisection.
  const OperatorSpec weak = quad_spec(-0.5, VectorN{0.0});
  const double oracle = testing::bisect([](double z) { return z - 0.5 * z - 2.0; }, -10.0, 10.0);
  CHECK(oracle == Approx(4.0).epsilon(1e-12));
  CHECK(resolvent(weak, 1.0, VectorN{2.0})[0] == Approx(4.0).epsilon(1e-14));

  // 1 + gamma*alpha <= 0 leaves the single-valued regime.
  CHECK_THROWS_AS(resolvent(weak, 2.0, VectorN{1.0}), InvalidParameterError);
  CHECK_THROWS_AS(resolvent(weak, -1.0, VectorN{1.0}), InvalidParameterError);
}

TEST_CASE("relaxed resolvent endpoints") {
  const OperatorSpec ident = quad_spec(1.0, VectorN{0.0});
  const VectorN x{4.0};
  CHECK(relaxed_resolvent(ident, 1.0, 1.0, x) == resolvent(ident, 1.0, x));
  CHECK(relaxed_resolvent(ident, 1.0, 2.0, x) == VectorN{0.0});  // -x + 2*(x/2)
  CHECK(relaxed_resolvent(ident, 1.0, 0.0, x) == x);
}

TEST_CASE("prox_quadratic closed form") {
  const ProxFunction weak = prox_quadratic(-0.5, VectorN{1.0});
  // Grid-minimization oracle for the weakly convex case.
  const double oracle = testing::grid_argmin_1d(
      [](double z) { return -0.25 * (z - 1.0) * (z - 1.0) + 0.5 * (z - 2.0) * (z - 2.0); }, -5.0,
      8.0, 1e-4);
  CHECK(oracle == Approx(3.0).epsilon(1e-3));
  CHECK(weak.prox_oracle(1.0, VectorN{2.0})[0] == Approx(3.0).epsilon(1e-14));

  CHECK(prox_quadratic(1.0, VectorN{0.0}).prox_oracle(1.0, VectorN{4.0}) == VectorN{2.0});
  CHECK(prox_quadratic(0.0, VectorN{9.0}).prox_oracle(3.0, VectorN{7.0}) == VectorN{7.0});

  CHECK_THROWS_AS(weak.prox_oracle(2.0, VectorN{1.0}), InvalidParameterError);
}

TEST_CASE("prox_l1 soft thresholding") {
  const ProxFunction l1 = prox_l1(1.0);
  CHECK(l1.prox_oracle(1.0, VectorN{2.5}) == VectorN{1.5});
  CHECK(l1.prox_oracle(1.0, VectorN{0.5}) == VectorN{0.0});

  const ProxFunction l1w = prox_l1(2.0);
  const double oracle = testing::grid_argmin_1d(
      [](double z) { return 2.0 * std::abs(z) + (z + 3.0) * (z + 3.0); }, -5.0, 5.0, 1e-4);
  CHECK(oracle == Approx(-2.0).epsilon(1e-3));
  CHECK(l1w.prox_oracle(0.5, VectorN{-3.0}) == VectorN{-2.0});

  // Tie at the kink maps to exactly zero.
  CHECK(l1.prox_oracle(1.0, VectorN{1.0}) == VectorN{0.0});
  CHECK_THROWS_AS(prox_l1(0.0), InvalidParameterError);
}

TEST_CASE("spec_from_prox passes the modulus through") {
  CHECK(spec_from_prox(prox_quadratic(1.0, VectorN{0.0})).monotonicity_modulus == 1.0);
  CHECK(spec_from_prox(prox_l1(1.0)).monotonicity_modulus == 0.0);
  CHECK(spec_from_prox(prox_quadratic(-0.3, VectorN{2.0})).monotonicity_modulus == -0.3);

  const OperatorSpec half = spec_from_prox(prox_quadratic(1.0, VectorN{0.0}));
  CHECK(resolvent(half, 1.0, VectorN{4.0}) == VectorN{2.0});
}

TEST_CASE("firm consistency with the quadratic closed form") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> modulus(-0.4, 3.0);
  std::uniform_real_distribution<double> tau_dist(0.1, 2.0);
  for (int i = 0; i < 500; ++i) {
    const double a = modulus(rng);
    const double tau = tau_dist(rng);
    if (!(1.0 + tau * a > 1e-3)) continue;
    const VectorN p = testing::random_vector(rng, 3);
    const VectorN x = testing::random_vector(rng, 3);
    const OperatorSpec spec = spec_from_prox(prox_quadratic(a, p));
    const VectorN got = resolvent(spec, tau, x);
    const VectorN want = scale(1.0 / (1.0 + tau * a), add(x, scale(tau * a, p)));
    CHECK(distance(got, want) <= 1e-12 * std::max(1.0, norm(want)));
  }
}

TEST_CASE("resolvent contraction factor 1/(1+gamma*alpha)") {
  std::mt19937_64 rng(5);
  struct Entry {
    OperatorSpec spec;
    double alpha;
    double gamma;
  };
  const Entry catalog[] = {
      {quad_spec(1.0, VectorN{0.5, -2.0, 1.0}), 1.0, 1.0},
      {quad_spec(2.0, VectorN{1.0, 1.0, 0.0}), 2.0, 0.5},
      {quad_spec(-0.5, VectorN{0.0, 0.0, 3.0}), -0.5, 1.0},
      {spec_from_prox(prox_l1(1.5)), 0.0, 2.0},
  };
  for (const auto& entry : catalog) {
    const double bound = 1.0 / (1.0 + entry.gamma * entry.alpha);
    for (int i = 0; i < 500; ++i) {
      const VectorN x = testing::random_vector(rng, 3);
      const VectorN y = testing::random_vector(rng, 3);
      const double lhs = distance(resolvent(entry.spec, entry.gamma, x),
                                  resolvent(entry.spec, entry.gamma, y));
      CHECK(lhs <= bound * distance(x, y) + 1e-9);
    }
  }
}

TEST_CASE("relaxed resolvent inequality for nu >= 1") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> nu_dist(1.0, 3.0);
  const double alpha = -0.5;
  const double gamma = 1.0;
  const OperatorSpec spec = quad_spec(alpha, VectorN{1.0, -1.0});
  for (int i = 0; i < 1000; ++i) {
    const double nu = nu_dist(rng);
    const VectorN x = testing::random_vector(rng, 2);
    const VectorN y = testing::random_vector(rng, 2);
    const double lhs =
        norm_sq(subtract(relaxed_resolvent(spec, gamma, nu, x), relaxed_resolvent(spec, gamma, nu, y)));
    const double j_gap = norm_sq(subtract(resolvent(spec, gamma, x), resolvent(spec, gamma, y)));
    const double rhs = (1.0 - nu) * (1.0 - nu) * norm_sq(subtract(x, y)) +
                       nu * ((1.0 - nu) * (2.0 + 2.0 * gamma * alpha) + nu) * j_gap;
    CHECK(lhs <= rhs + 1e-9);
  }
}

TEST_CASE("prox output beats nearby perturbations") {
  std::mt19937_64 rng(17);
  const ProxFunction candidates[] = {prox_quadratic(-0.5, VectorN{1.0, 0.0}), prox_l1(1.0)};
  for (const auto& h : candidates) {
    const double tau = 0.8;
    for (int trial = 0; trial < 50; ++trial) {
      const VectorN x = testing::random_vector(rng, 2);
      const VectorN prox = h.prox_oracle(tau, x);
      const double at_prox = h.evaluate(prox) + norm_sq(subtract(prox, x)) / (2.0 * tau);
      for (int i = 0; i < 20; ++i) {
        VectorN d = testing::random_vector(rng, 2, -1.0, 1.0);
        d = scale(1e-3 / norm(d), d);
        const VectorN z = add(prox, d);
        const double at_z = h.evaluate(z) + norm_sq(subtract(z, x)) / (2.0 * tau);
        CHECK(at_prox <= at_z + 1e-9);
      }
    }
  }
}
