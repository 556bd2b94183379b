#include "adrflow/dynamics.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>

#include "adrflow/errors.hpp"

namespace adrflow {

namespace {

constexpr std::size_t kDenseSampleLimit = 1000;

// Records step index 0..n densely up to the limit, then with ~1% geometric
// spacing. The final index must be recorded by the caller.
class SampleThinner {
 public:
  bool should_record(std::size_t k) {
    if (k <= kDenseSampleLimit) return true;
    if (k >= next_) {
      next_ = std::max(next_ + 1, static_cast<std::size_t>(std::llround(next_ * 1.01)));
      return true;
    }
    return false;
  }

 private:
  std::size_t next_ = kDenseSampleLimit + 1;
};

void record_sample(Trajectory& traj, const OperatorSpec& spec_a, const OperatorSpec& spec_b,
                   const DRParams& params, double t, const VectorN& u) {
  traj.times.push_back(t);
  traj.states.push_back(u);
  traj.residuals.push_back(residual(spec_a, spec_b, params, u));
  traj.shadows.push_back(shadow(spec_a, params, u));
}

}  // namespace

ThetaSchedule ThetaSchedule::constant(double theta, double t0) {
  if (!(theta > 0.0)) throw InvalidParameterError("ThetaSchedule: Theta must be positive");
  if (!(t0 > 0.0)) throw InvalidParameterError("ThetaSchedule: t0 must be positive");
  return {Kind::Constant, theta, 0.0, t0};
}

ThetaSchedule ThetaSchedule::power(double m, double t0) {
  if (!(m > -1.0)) throw InvalidParameterError("ThetaSchedule: power exponent must exceed -1");
  if (!(t0 > 0.0)) throw InvalidParameterError("ThetaSchedule: t0 must be positive");
  return {Kind::Power, 0.0, m, t0};
}

ThetaSchedule ThetaSchedule::reciprocal(double t0) {
  if (!(t0 >= 1.0)) {
    throw InvalidParameterError("ThetaSchedule: reciprocal schedule requires t0 >= 1");
  }
  return {Kind::Reciprocal, 0.0, 0.0, t0};
}

double ThetaSchedule::value(double t) const {
  switch (kind) {
    case Kind::Constant: return theta_value;
    case Kind::Power: return std::pow(t, power_m);
    case Kind::Reciprocal: return 1.0 / t;
  }
  return 0.0;
}

double ThetaSchedule::integral(double a, double b) const {
  switch (kind) {
    case Kind::Constant: return theta_value * (b - a);
    case Kind::Power:
      return (std::pow(b, power_m + 1.0) - std::pow(a, power_m + 1.0)) / (power_m + 1.0);
    case Kind::Reciprocal: return std::log(b / a);
  }
  return 0.0;
}

double ThetaSchedule::infimum() const {
  switch (kind) {
    case Kind::Constant: return theta_value;
    case Kind::Power: return power_m >= 0.0 ? std::pow(t0, power_m) : 0.0;
    case Kind::Reciprocal: return 0.0;
  }
  return 0.0;
}

double ThetaSchedule::horizon_infimum(double t_hi) const {
  switch (kind) {
    case Kind::Constant: return theta_value;
    case Kind::Power: return power_m >= 0.0 ? std::pow(t0, power_m) : std::pow(t_hi, power_m);
    case Kind::Reciprocal: return 1.0 / t_hi;
  }
  return 0.0;
}

PerturbationSchedule PerturbationSchedule::zero() { return {}; }

PerturbationSchedule PerturbationSchedule::power_decay(double p, double c,
                                                       const VectorN& direction, double t0) {
  if (!(p > 0.0)) throw InvalidParameterError("PerturbationSchedule: p must be positive");
  if (!(c >= 0.0)) throw InvalidParameterError("PerturbationSchedule: c must be nonnegative");
  if (!(t0 > 0.0)) throw InvalidParameterError("PerturbationSchedule: t0 must be positive");
  const double len = norm(direction);
  if (!(len > 0.0)) {
    throw InvalidParameterError("PerturbationSchedule: direction must be nonzero");
  }
  PerturbationSchedule f;
  f.kind = Kind::PowerDecay;
  f.p = p;
  f.c = c;
  f.direction = scale(1.0 / len, direction);
  f.t0 = t0;
  return f;
}

double PerturbationSchedule::norm_at(double t) const {
  if (kind == Kind::Zero) return 0.0;
  return std::pow(t, -p) * std::exp(-c * t);
}

VectorN PerturbationSchedule::value(double t, std::size_t dim) const {
  if (kind == Kind::Zero) return VectorN::zeros(dim);
  if (direction.dim() != dim) {
    throw DimensionError("PerturbationSchedule: direction dimension " +
                         std::to_string(direction.dim()) + " vs state dimension " +
                         std::to_string(dim));
  }
  return scale(norm_at(t), direction);
}

bool PerturbationSchedule::is_l1() const {
  if (kind == Kind::Zero) return true;
  return c > 0.0 || p > 1.0;
}

bool PerturbationSchedule::iterated_integral_finite(const ThetaSchedule& theta) const {
  if (kind == Kind::Zero) return true;
  if (c > 0.0) return true;  // exponential tail dominates any catalog theta
  if (!(p > 1.0)) return false;
  // Inner tail is s^{1-p}/(p-1); the outer integrand is theta(s)*s^{1-p}.
  switch (theta.kind) {
    case ThetaSchedule::Kind::Constant: return p > 2.0;
    case ThetaSchedule::Kind::Power: return p > theta.power_m + 2.0;
    case ThetaSchedule::Kind::Reciprocal: return true;  // s^{-p} with p > 1
  }
  return false;
}

StepPolicy StepPolicy::fixed_dt(double dt) {
  if (!(dt > 0.0)) throw InvalidParameterError("StepPolicy: dt must be positive");
  return {Kind::FixedDt, dt};
}

StepPolicy StepPolicy::capped_eps(double eps_cap) {
  if (!(eps_cap > 0.0) || !(eps_cap <= kMaxKmWeight)) {
    throw InvalidParameterError("StepPolicy: eps_cap must lie in (0, 0.9], got " +
                                std::to_string(eps_cap));
  }
  return {Kind::CappedEps, eps_cap};
}

double StepPolicy::dt_at(const ThetaSchedule& theta, double t) const {
  const double th = theta.value(t);
  if (!(th > 0.0)) {
    throw StepPolicyError("step policy: theta(t) = " + std::to_string(th) + " at t = " +
                          std::to_string(t));
  }
  if (kind == Kind::FixedDt) {
    if (th * value > kMaxKmWeight) {
      throw StepPolicyError("step policy: theta(t)*dt = " + std::to_string(th * value) +
                            " exceeds " + std::to_string(kMaxKmWeight) + " at t = " +
                            std::to_string(t));
    }
    return value;
  }
  return value / th;
}

StepGrid build_step_grid(const ThetaSchedule& theta, const StepPolicy& policy, double t0,
                         double t_end) {
  if (!(t_end > t0)) {
    throw InvalidParameterError("build_step_grid: t_end must exceed t0");
  }
  StepGrid grid;
  double t = t0;
  while (t < t_end) {
    double dt = policy.dt_at(theta, t);
    double t_next = t + dt;
    if (t_next >= t_end) {
      dt = t_end - t;
      t_next = t_end;
    }
    if (!(dt > 0.0)) break;  // residual interval below rounding
    grid.times.push_back(t);
    grid.dts.push_back(dt);
    grid.eps.push_back(theta.value(t) * dt);
    t = t_next;
  }
  if (grid.times.empty()) {
    throw StepPolicyError("build_step_grid: produced no steps on [" + std::to_string(t0) + ", " +
                          std::to_string(t_end) + "]");
  }
  return grid;
}

KmSequences materialize_km_sequences(const ThetaSchedule& theta, const PerturbationSchedule& f,
                                     const StepPolicy& policy, double t_end, std::size_t dim) {
  const StepGrid grid = build_step_grid(theta, policy, theta.t0, t_end);
  KmSequences seq;
  seq.times = grid.times;
  seq.eps = grid.eps;
  if (!f.is_zero()) {
    seq.errors.reserve(grid.times.size());
    for (std::size_t k = 0; k < grid.times.size(); ++k) {
      seq.errors.push_back(scale(grid.dts[k], f.value(grid.times[k], dim)));
    }
  }
  return seq;
}

Trajectory integrate(const OperatorSpec& spec_a, const OperatorSpec& spec_b,
                     const DRParams& params, const ThetaSchedule& theta,
                     const PerturbationSchedule& f, const VectorN& u0, double t_end,
                     const StepPolicy& policy) {
  if (!f.is_zero() && std::abs(f.t0 - theta.t0) > 1e-12) {
    throw InvalidParameterError("integrate: theta and f disagree on t0");
  }
  const auto start = std::chrono::steady_clock::now();
  const StepGrid grid = build_step_grid(theta, policy, theta.t0, t_end);
  const std::size_t n = grid.times.size();

  Trajectory traj;
  traj.meta.params = params;
  traj.meta.theta = theta;
  traj.meta.perturbation = f;
  traj.meta.policy = policy;
  traj.meta.total_steps = n;

  SampleThinner thinner;
  VectorN u = u0;
  for (std::size_t k = 0; k < n; ++k) {
    const VectorN rr = apply_dr(spec_a, spec_b, params, u);
    if (thinner.should_record(k)) {
      traj.times.push_back(grid.times[k]);
      traj.states.push_back(u);
      traj.residuals.push_back(norm(subtract(rr, u)));
      traj.shadows.push_back(shadow(spec_a, params, u));
    }
    u = averaged_combination(1.0 - grid.eps[k], u, grid.eps[k], rr);
    if (!f.is_zero()) {
      u = add(u, scale(grid.dts[k], f.value(grid.times[k], u.dim())));
    }
  }
  record_sample(traj, spec_a, spec_b, params, t_end, u);

  traj.meta.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return traj;
}

Trajectory km_iterate(const OperatorSpec& spec_a, const OperatorSpec& spec_b,
                      const DRParams& params, const std::vector<double>& eps_seq,
                      const std::vector<VectorN>& err_seq, const VectorN& u0, int k_max) {
  if (k_max < 0) throw InvalidParameterError("km_iterate: k_max must be nonnegative");
  const auto n = static_cast<std::size_t>(k_max);
  if (eps_seq.size() < n) {
    throw InvalidParameterError("km_iterate: eps_seq shorter than k_max");
  }
  if (!err_seq.empty() && err_seq.size() < n) {
    throw InvalidParameterError("km_iterate: err_seq shorter than k_max");
  }
  const auto start = std::chrono::steady_clock::now();

  Trajectory traj;
  traj.meta.params = params;
  traj.meta.total_steps = n;

  SampleThinner thinner;
  VectorN u = u0;
  for (std::size_t k = 0; k < n; ++k) {
    const double eps = eps_seq[k];
    if (!(eps > 0.0) || !(eps <= 1.0)) {
      throw InvalidParameterError("km_iterate: eps_seq[" + std::to_string(k) +
                                  "] = " + std::to_string(eps) + " outside (0, 1]");
    }
    const VectorN rr = apply_dr(spec_a, spec_b, params, u);
    if (thinner.should_record(k)) {
      traj.times.push_back(static_cast<double>(k));
      traj.states.push_back(u);
      traj.residuals.push_back(norm(subtract(rr, u)));
      traj.shadows.push_back(shadow(spec_a, params, u));
    }
    u = averaged_combination(1.0 - eps, u, eps, rr);
    if (!err_seq.empty()) {
      u = add(u, err_seq[k]);
    }
  }
  record_sample(traj, spec_a, spec_b, params, static_cast<double>(n), u);

  traj.meta.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return traj;
}

double richardson_step_error(const OperatorSpec& spec_a, const OperatorSpec& spec_b,
                             const DRParams& params, const ThetaSchedule& theta,
                             const PerturbationSchedule& f, const VectorN& u0, double t_end,
                             double dt) {
  const Trajectory coarse =
      integrate(spec_a, spec_b, params, theta, f, u0, t_end, StepPolicy::fixed_dt(dt));
  const Trajectory fine =
      integrate(spec_a, spec_b, params, theta, f, u0, t_end, StepPolicy::fixed_dt(dt / 2.0));
  return distance(coarse.states.back(), fine.states.back());
}

}  // namespace adrflow
