#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "adrflow/adr.hpp"
#include "adrflow/space.hpp"

namespace adrflow {

/// Time-varying relaxation schedule theta(t) on [t0, infinity).
/// Catalog kinds: constant Theta, power t^m with m > -1, and 1/t.
struct ThetaSchedule {
  enum class Kind { Constant, Power, Reciprocal };

  Kind kind = Kind::Constant;
  double theta_value = 1.0;  // Constant
  double power_m = 0.0;      // Power
  double t0 = 1.0;

  static ThetaSchedule constant(double theta, double t0 = 1.0);
  static ThetaSchedule power(double m, double t0 = 1.0);
  static ThetaSchedule reciprocal(double t0 = 1.0);  // requires t0 >= 1

  [[nodiscard]] double value(double t) const;
  /// Closed-form integral over [a, b].
  [[nodiscard]] double integral(double a, double b) const;
  /// Infimum over the unbounded horizon [t0, infinity).
  [[nodiscard]] double infimum() const;
  /// Infimum over [t0, t_hi]; the quantity to use for horizon-limited bounds.
  [[nodiscard]] double horizon_infimum(double t_hi) const;
  /// inf theta > 0 on the unbounded horizon.
  [[nodiscard]] bool unbounded_inf_positive() const { return infimum() > 0.0; }
};

/// Perturbation f(t). Zero, or t^{-p} * exp(-c*t) along a fixed unit
/// direction. The constructor accepts any p > 0; membership in L1 is a
/// property callers may query, not a construction constraint.
struct PerturbationSchedule {
  enum class Kind { Zero, PowerDecay };

  Kind kind = Kind::Zero;
  double p = 2.0;
  double c = 0.0;
  VectorN direction;  // unit vector; empty for Zero
  double t0 = 1.0;

  static PerturbationSchedule zero();
  static PerturbationSchedule power_decay(double p, double c, const VectorN& direction,
                                          double t0 = 1.0);

  [[nodiscard]] bool is_zero() const { return kind == Kind::Zero; }
  [[nodiscard]] double norm_at(double t) const;
  [[nodiscard]] VectorN value(double t, std::size_t dim) const;
  /// Integrability on [t0, infinity).
  [[nodiscard]] bool is_l1() const;
  /// Whether int theta(s) int_s^inf |f(tau)| dtau ds is finite (closed form
  /// for every catalog schedule pair).
  [[nodiscard]] bool iterated_integral_finite(const ThetaSchedule& theta) const;
};

/// Discretization step policy. Every produced step keeps the averaged weight
/// theta(t)*dt inside (0, 0.9]; 1.0 is the stability boundary and 0.9 leaves
/// margin for perturbations.
struct StepPolicy {
  enum class Kind { FixedDt, CappedEps };

  Kind kind = Kind::FixedDt;
  double value = 0.1;

  static StepPolicy fixed_dt(double dt);
  static StepPolicy capped_eps(double eps_cap);  // eps_cap in (0, 0.9]

  /// Step length at time t; throws StepPolicyError when the fixed step would
  /// exceed the weight cap.
  [[nodiscard]] double dt_at(const ThetaSchedule& theta, double t) const;
};

constexpr double kMaxKmWeight = 0.9;

struct RunMeta {
  DRParams params;
  std::optional<ThetaSchedule> theta;
  std::optional<PerturbationSchedule> perturbation;
  std::optional<StepPolicy> policy;
  std::size_t total_steps = 0;
  double wall_seconds = 0.0;
};

/// Time-sampled record of an integration or iteration run. `residuals[i]` is
/// recomputed from `states[i]`, never interpolated.
struct Trajectory {
  std::vector<double> times;
  std::vector<VectorN> states;
  std::vector<double> residuals;
  std::vector<VectorN> shadows;
  RunMeta meta;
};

/// Explicit-Euler step grid for [t0, t_end]: the final step is shortened to
/// land exactly on t_end.
struct StepGrid {
  std::vector<double> times;  // left endpoints t_k
  std::vector<double> dts;
  std::vector<double> eps;  // theta(t_k) * dt_k
};

StepGrid build_step_grid(const ThetaSchedule& theta, const StepPolicy& policy, double t0,
                         double t_end);

/// Materialized driving sequences for km_iterate that reproduce integrate()
/// arithmetic exactly: eps_k = theta(t_k)*dt_k and err_k = dt_k * f(t_k).
/// `errors` is empty when f is identically zero.
struct KmSequences {
  std::vector<double> times;
  std::vector<double> eps;
  std::vector<VectorN> errors;
};

KmSequences materialize_km_sequences(const ThetaSchedule& theta, const PerturbationSchedule& f,
                                     const StepPolicy& policy, double t_end, std::size_t dim);

/// Integrate du/dt = theta(t)*(RR(u) - u) + f(t) from u(t0) = u0 to t_end by
/// the explicit Euler recurrence
///   u_{k+1} = (1 - eps_k)*u_k + eps_k*RR(u_k) + dt_k*f(t_k),  eps_k = theta(t_k)*dt_k.
/// Sampled at every step up to 1000 steps, logarithmically thinned beyond.
Trajectory integrate(const OperatorSpec& spec_a, const OperatorSpec& spec_b,
                     const DRParams& params, const ThetaSchedule& theta,
                     const PerturbationSchedule& f, const VectorN& u0, double t_end,
                     const StepPolicy& policy);

/// Inexact Krasnosel'skii-Mann driver
///   u_{k+1} = (1 - eps_k)*u_k + eps_k*RR(u_k) + err_k.
/// Identical arithmetic to integrate() under aligned sequences; trajectory
/// times are the iteration indices. err_seq may be empty (no error term).
Trajectory km_iterate(const OperatorSpec& spec_a, const OperatorSpec& spec_b,
                      const DRParams& params, const std::vector<double>& eps_seq,
                      const std::vector<VectorN>& err_seq, const VectorN& u0, int k_max);

/// Half-step Richardson diagnostic: |u_dt(t_end) - u_{dt/2}(t_end)| for a
/// fixed-step run, as a discretization-error estimate.
double richardson_step_error(const OperatorSpec& spec_a, const OperatorSpec& spec_b,
                             const DRParams& params, const ThetaSchedule& theta,
                             const PerturbationSchedule& f, const VectorN& u0, double t_end,
                             double dt);

}  // namespace adrflow
