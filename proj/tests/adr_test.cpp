#include <doctest.h>

#include <cmath>
#include <random>

#include "adrflow/adr.hpp"
#include "adrflow/problems.hpp"
#include "support/test_oracles.hpp"

using namespace adrflow;
using doctest::Approx;

namespace {

ProblemSpec p1() { return problem_quad_quad(2.0, VectorN{1.0}, -0.5, VectorN{-1.0}); }

DRParams p1_c1_params(double epsilon = 0.25) {
  return DRParams{2.0, -0.5, 1.0, 1.0, 2.0, 2.0, epsilon};
}

double slack_of(const ValidationReport& report, const std::string& name) {
  for (const auto& c : report.checks) {
    if (c.name == name) return c.slack;
  }
  FAIL("check not found: ", name);
  return 0.0;
}

}  // namespace

TEST_CASE("validator on the desk tuples") {
  // alpha=2, beta=-0.5, gamma=delta=1, lambda=mu=2, eps=0.25:
  // coupling slack = -2/3 - (0.25 - 1) = 1/12.
  const ValidationReport pass = validate(p1_c1_params(0.25), CaseTag::C1);
  CHECK(pass.passed);
  CHECK(pass.violated_conditions().empty());
  CHECK(slack_of(pass, "coupling_vs_epsilon") ==
        Approx(-2.0 / 3.0 + 3.0 / 4.0).epsilon(1e-12));

  // Same tuple with eps=0.5 fails: -2/3 > -1/2 is false.
  const ValidationReport fail = validate(p1_c1_params(0.5), CaseTag::C1);
  CHECK_FALSE(fail.passed);
  REQUIRE(fail.violated_conditions().size() == 1);
  CHECK(fail.violated_conditions()[0].name == "coupling_vs_epsilon");
  CHECK(fail.violated_conditions()[0].slack == Approx(-2.0 / 3.0 + 1.0 / 2.0).epsilon(1e-12));

  // alpha=1, beta=0, gamma=delta=1, lambda=mu=2, eps=0: mu=2 in [2,4].
  const DRParams c2{1.0, 0.0, 1.0, 1.0, 2.0, 2.0, 0.0};
  const ValidationReport c2_report = validate(c2, CaseTag::C2);
  CHECK(c2_report.passed);
  CHECK(slack_of(c2_report, "mu_lower") == Approx(0.0));
  CHECK(slack_of(c2_report, "mu_upper") == Approx(2.0));
  CHECK(slack_of(c2_report, "one_plus_2_gamma_alpha_positive") == Approx(3.0));
}

TEST_CASE("c2_params derives lambda and delta exactly") {
  const DRParams p = c2_params(2.0, -0.5, 0.5, 3.0, 0.5);
  CHECK(p.lam == Approx(1.5).epsilon(1e-15));
  CHECK(p.delta == Approx(0.25).epsilon(1e-15));
  CHECK(std::abs((p.lam - 1.0) * (p.mu - 1.0) - 1.0) <= 1e-12);
  CHECK(std::abs(p.delta - (p.lam - 1.0) * p.gamma) <= 1e-12);
  CHECK(validate(p, CaseTag::C2).passed);
  CHECK_THROWS_AS(c2_params(1.0, 0.0, 1.0, 1.0), InvalidParameterError);
}

TEST_CASE("apply_dr composes the two relaxed resolvents") {
  // Both operators zero: with lambda=mu=2 each relaxed resolvent is the identity.
  const DRParams ident{0.0, 0.0, 1.0, 1.0, 2.0, 2.0, 0.5};
  const VectorN x{1.25, -7.5};
  CHECK(apply_dr(zero_operator(), zero_operator(), ident, x) == x);

  // A = I, B = 0, gamma=delta=1, lambda=mu=2: R1[4] = 0, then R2[0] = 0.
  const OperatorSpec a_ident = spec_from_prox(prox_quadratic(1.0, VectorN{0.0}));
  const DRParams half{1.0, 0.0, 1.0, 1.0, 2.0, 2.0, 0.5};
  CHECK(apply_dr(a_ident, zero_operator(), half, VectorN{4.0}) == VectorN{0.0});

  // Fixed point of the desk problem stays fixed.
  const ProblemSpec prob = p1();
  const DRParams params = p1_c1_params();
  const VectorN hat = find_fixed_point(prob.spec_a, prob.spec_b, params, VectorN{0.0});
  CHECK(hat[0] == Approx(3.0).epsilon(1e-10));
  CHECK(distance(apply_dr(prob.spec_a, prob.spec_b, params, hat), hat) <= 1e-12);

  // Moduli certificates must match the parameter tuple.
  CHECK_THROWS_AS(apply_dr(a_ident, zero_operator(), ident, x), InvalidParameterError);
}

TEST_CASE("apply_averaged interpolates toward RR") {
  const OperatorSpec a_ident = spec_from_prox(prox_quadratic(1.0, VectorN{0.0}));
  DRParams params{1.0, 0.0, 1.0, 1.0, 2.0, 2.0, 0.0};
  const VectorN x{4.0};
  CHECK(apply_averaged(a_ident, zero_operator(), params, x) == x);  // eps = 0
  params.epsilon = 0.5;
  CHECK(apply_averaged(a_ident, zero_operator(), params, x) == VectorN{2.0});  // midpoint to 0

  const ProblemSpec prob = p1();
  DRParams desk = p1_c1_params();
  const VectorN hat = find_fixed_point(prob.spec_a, prob.spec_b, desk, VectorN{0.0});
  for (double eps : {0.1, 0.4, 0.9}) {
    desk.epsilon = eps;
    CHECK(distance(apply_averaged(prob.spec_a, prob.spec_b, desk, hat), hat) <= 1e-11);
  }
  desk.epsilon = 1.0;
  CHECK_THROWS_AS(apply_averaged(prob.spec_a, prob.spec_b, desk, x), InvalidParameterError);
}

TEST_CASE("residual measures |RR(x) - x|") {
  const ProblemSpec prob = p1();
  const DRParams params = p1_c1_params();
  const VectorN hat = find_fixed_point(prob.spec_a, prob.spec_b, params, VectorN{0.0});
  CHECK(residual(prob.spec_a, prob.spec_b, params, hat) <= 1e-9);

  const DRParams ident{0.0, 0.0, 1.0, 1.0, 2.0, 2.0, 0.5};
  CHECK(residual(zero_operator(), zero_operator(), ident, VectorN{3.0, 4.0}) == 0.0);

  // Independent recomputation of both closed-form resolvents at x = 0:
  //   J_A(0) = (0 + 2*1)/3, R1 = -0 + 2*J_A, J_B(R1) = (R1 + 0.5)/0.5, RR = -R1 + 2*J_B.
  const double ja = (0.0 + 1.0 * 2.0 * 1.0) / (1.0 + 1.0 * 2.0);
  const double r1 = -0.0 + 2.0 * ja;
  const double jb = (r1 + 1.0 * (-0.5) * (-1.0)) / (1.0 - 1.0 * 0.5);
  const double rr = -r1 + 2.0 * jb;
  CHECK(rr == Approx(6.0).epsilon(1e-15));
  CHECK(residual(prob.spec_a, prob.spec_b, params, VectorN{0.0}) ==
        Approx(std::abs(rr - 0.0)).epsilon(1e-13));
}

TEST_CASE("shadow lands in zer(A+B) at fixed points") {
  const ProblemSpec prob = p1();
  const DRParams params = p1_c1_params();
  const VectorN hat = find_fixed_point(prob.spec_a, prob.spec_b, params, VectorN{0.0});
  CHECK(shadow(prob.spec_a, params, hat)[0] == Approx(5.0 / 3.0).epsilon(1e-9));

  CHECK(shadow(zero_operator(), params, VectorN{2.0, 3.0}) == VectorN{2.0, 3.0});

  // The shadow map is 1/(1+gamma*alpha)-Lipschitz.
  std::mt19937_64 rng(23);
  const double bound = 1.0 / (1.0 + params.gamma * params.alpha);
  for (int i = 0; i < 500; ++i) {
    const VectorN x = testing::random_vector(rng, 1);
    const VectorN y = testing::random_vector(rng, 1);
    CHECK(distance(shadow(prob.spec_a, params, x), shadow(prob.spec_a, params, y)) <=
          bound * distance(x, y) + 1e-9);
  }
}

TEST_CASE("fixed-point shadow solves the inclusion when both operators evaluate") {
  const ProblemSpec prob = p1();
  const DRParams params = p1_c1_params();
  const VectorN hat = find_fixed_point(prob.spec_a, prob.spec_b, params, VectorN{0.0});
  REQUIRE(residual(prob.spec_a, prob.spec_b, params, hat) <= 1e-12);
  const VectorN sh = shadow(prob.spec_a, params, hat);
  const VectorN sum = add(prob.spec_a.direct_eval(sh), prob.spec_b.direct_eval(sh));
  CHECK(norm(sum) <= 1e-6);
}

TEST_CASE("lipschitz_zeta matches the closed form and caps the quotient") {
  const DRParams params = c2_params(1.0, 0.0, 1.0, 2.0);
  // A = I, l = 1: the relaxed A-resolvent is the zero map, so RR is constant.
  CHECK(lipschitz_zeta(params, 1.0) == 0.0);
  CHECK(lipschitz_zeta(params, 2.0) == Approx(std::sqrt(3.0 / 7.0)).epsilon(1e-15));

  // Empirical quotient for the diag(1,2) affine operator certified with l=2.
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 0.0, 0.0, 2.0;
  const ProblemSpec prob =
      problem_affine(m, VectorN{0.0, 0.0}, Eigen::MatrixXd::Zero(2, 2), VectorN{0.0, 0.0});
  const DRParams affine_params = c2_params(1.0, 0.0, 1.0, 2.0);
  const double zeta = lipschitz_zeta(affine_params, *prob.spec_a.lipschitz_const);
  std::mt19937_64 rng(29);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const VectorN x = testing::random_vector(rng, 2);
    const VectorN y = testing::random_vector(rng, 2);
    const double gap = distance(x, y);
    if (gap <= 1e-12) continue;
    worst = std::max(worst, distance(apply_dr(prob.spec_a, prob.spec_b, affine_params, x),
                                     apply_dr(prob.spec_a, prob.spec_b, affine_params, y)) /
                                gap);
  }
  CHECK(worst <= zeta + 1e-6);

  // mu = 2 + 2*gamma*alpha is excluded by hypothesis.
  CHECK_THROWS_AS(lipschitz_zeta(c2_params(0.5, 0.0, 1.0, 3.0), 0.5), InvalidParameterError);
  // l below |alpha| is not a valid certificate.
  CHECK_THROWS_AS(lipschitz_zeta(params, 0.5), InvalidParameterError);
}

TEST_CASE("splitting inequalities hold on random pairs") {
  const ProblemSpec prob = p1();
  const DRParams params = c2_params(2.0, -0.5, 0.5, 3.0, 0.5);
  REQUIRE(validate(params, CaseTag::C2).passed);

  std::mt19937_64 rng(31);
  const double w1 = params.mu * (2.0 + 2.0 * params.gamma * params.alpha - params.mu);
  const double w2 = params.mu * (params.mu - (2.0 - 2.0 * params.gamma * params.beta));
  for (int i = 0; i < 1000; ++i) {
    const VectorN x = testing::random_vector(rng, 1);
    const VectorN y = testing::random_vector(rng, 1);

    const VectorN rrx = apply_dr(prob.spec_a, prob.spec_b, params, x);
    const VectorN rry = apply_dr(prob.spec_a, prob.spec_b, params, y);
    const VectorN jax = resolvent(prob.spec_a, params.gamma, x);
    const VectorN jay = resolvent(prob.spec_a, params.gamma, y);
    const VectorN jbx = resolvent(
        prob.spec_b, params.delta, relaxed_resolvent(prob.spec_a, params.gamma, params.lam, x));
    const VectorN jby = resolvent(
        prob.spec_b, params.delta, relaxed_resolvent(prob.spec_a, params.gamma, params.lam, y));

    const double rhs = norm_sq(subtract(x, y)) - w1 * norm_sq(subtract(jax, jay)) -
                       w2 * norm_sq(subtract(jbx, jby));
    CHECK(norm_sq(subtract(rrx, rry)) <= rhs + 1e-9);

    const double eps = params.epsilon;
    const VectorN tx = apply_averaged(prob.spec_a, prob.spec_b, params, x);
    const VectorN ty = apply_averaged(prob.spec_a, prob.spec_b, params, y);
    const VectorN ix = subtract(x, tx);
    const VectorN iy = subtract(y, ty);
    const double rhs_avg = norm_sq(subtract(x, y)) -
                           (1.0 - eps) / eps * norm_sq(subtract(ix, iy)) -
                           eps * w1 * norm_sq(subtract(jax, jay)) -
                           eps * w2 * norm_sq(subtract(jbx, jby));
    CHECK(norm_sq(subtract(tx, ty)) <= rhs_avg + 1e-9);
  }
}

TEST_CASE("identity decomposition of I - T^eps") {
  const ProblemSpec prob = p1();
  DRParams params = p1_c1_params();
  params.epsilon = 0.3;
  std::mt19937_64 rng(37);
  for (int i = 0; i < 500; ++i) {
    const VectorN x = testing::random_vector(rng, 1);
    const VectorN lhs =
        subtract(x, apply_averaged(prob.spec_a, prob.spec_b, params, x));
    const VectorN via_rr =
        scale(params.epsilon, subtract(x, apply_dr(prob.spec_a, prob.spec_b, params, x)));
    const VectorN ja = resolvent(prob.spec_a, params.gamma, x);
    const VectorN jb = resolvent(
        prob.spec_b, params.delta, relaxed_resolvent(prob.spec_a, params.gamma, params.lam, x));
    const VectorN via_j = scale(params.epsilon * params.mu, subtract(ja, jb));
    const double tol = 1e-12 * std::max(1.0, norm(x));
    CHECK(distance(lhs, via_rr) <= tol);
    CHECK(distance(lhs, via_j) <= tol);
  }
}

TEST_CASE("quasi-nonexpansiveness under C1 and nonexpansiveness under C2") {
  const ProblemSpec prob = p1();
  const DRParams c1 = p1_c1_params(0.25);
  const VectorN hat = find_fixed_point(prob.spec_a, prob.spec_b, c1, VectorN{0.0});
  std::mt19937_64 rng(41);
  for (int i = 0; i < 1000; ++i) {
    const VectorN x = testing::random_vector(rng, 1);
    CHECK(distance(apply_averaged(prob.spec_a, prob.spec_b, c1, x), hat) <=
          distance(x, hat) + 1e-9);
  }

  const DRParams c2 = c2_params(2.0, -0.5, 0.5, 3.0, 0.5);
  for (int i = 0; i < 1000; ++i) {
    const VectorN x = testing::random_vector(rng, 1);
    const VectorN y = testing::random_vector(rng, 1);
    CHECK(distance(apply_dr(prob.spec_a, prob.spec_b, c2, x),
                   apply_dr(prob.spec_a, prob.spec_b, c2, y)) <= distance(x, y) + 1e-9);
  }
}
