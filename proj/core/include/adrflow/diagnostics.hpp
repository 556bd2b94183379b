#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>

#include "adrflow/dynamics.hpp"

namespace adrflow {

enum class RateModel { Exponential, PowerLaw };
enum class RatePrediction { KappaBased, ZetaBased, SqrtRegularity };

std::string to_string(RateModel model);
std::string to_string(RatePrediction provenance);

/// Fit the fixed-point residual series of a trajectory.
struct ResidualSeries {};
/// Fit |state - reference| against time.
struct DistanceSeries {
  VectorN reference;
};
using SeriesSpec = std::variant<ResidualSeries, DistanceSeries>;

struct FitWindow {
  double t_lo = 0.0;
  double t_hi = 0.0;
};

/// Fitted decay parameter with the generating model. For Exponential the
/// value is the rate r of C*exp(-r*t); for PowerLaw the exponent q of C*t^-q.
struct RateReport {
  RateModel model = RateModel::Exponential;
  double fitted_value = 0.0;
  double r_squared = 0.0;
  FitWindow window;
  std::optional<double> predicted_value;
  std::optional<RatePrediction> predicted_provenance;
  int used_samples = 0;
  int dropped_samples = 0;  // nonpositive values (and t <= 0 for PowerLaw)
};

/// Least-squares line on (t, ln v) over the window; fitted_value = -slope.
/// Requires at least 10 usable samples.
RateReport fit_exponential(const Trajectory& traj, const SeriesSpec& series, FitWindow window);

/// Least-squares line on (ln t, ln v); fitted_value = -slope, so 0.5 means
/// v ~ t^{-1/2}.
RateReport fit_power(const Trajectory& traj, const SeriesSpec& series, FitWindow window);

/// Local metric-subregularity modulus of I - RR around a located fixed point:
/// max over samples z in B(anchor, radius) of dist(z, Fix RR) / |RR(z) - z|.
/// Without a distance oracle the fixed point is assumed unique, so
/// dist(z, Fix RR) = |z - anchor|.
struct SubregularityEstimate {
  double kappa_hat = 0.0;
  double radius = 0.0;
  int samples = 0;
  VectorN anchor;
};

SubregularityEstimate estimate_kappa(
    const OperatorSpec& spec_a, const OperatorSpec& spec_b, const DRParams& params,
    const VectorN& anchor, double radius, int n_samples, std::uint64_t seed,
    const std::function<double(const VectorN&)>& fix_distance = nullptr);

/// Decay guarantees implied by the available moduli. kappa_exponent gives the
/// running exponent t -> (1/(2 kappa^2)) * int_{t0}^t theta; for a constant
/// schedule that is the rate Theta/(2 kappa^2), for the reciprocal schedule
/// the decay is the power law t^{-1/(2 kappa^2)}. zeta_rate is the constant
/// rate (1 - zeta)/2 * inf theta over the horizon.
struct PredictedRates {
  std::optional<double> kappa_constant_rate;
  std::optional<double> kappa_power_exponent;
  std::optional<double> zeta_rate;
  std::function<double(double)> kappa_exponent;  // null when kappa absent
};

PredictedRates predict_rate(const DRParams& params, const ThetaSchedule& theta,
                            std::optional<double> kappa, std::optional<double> zeta,
                            double horizon = std::numeric_limits<double>::infinity());

/// Largest observed ratio |op(x) - op(y)| / |x - y| over seeded random pairs
/// in B(center, radius).
double empirical_lipschitz(const std::function<VectorN(const VectorN&)>& op,
                           const VectorN& region_center, double region_radius, int n_pairs,
                           std::uint64_t seed);

/// Empirical constant in residual(t)^2 <= K / (inf theta * (t - t0)).
/// k_hat is the sup of residual^2 * inf_theta * (t - t0) over the samples;
/// the run is "stable" when the last-quarter sup does not exceed 1.1x the
/// sup over the first three quarters (growth in the tail would mean the
/// bound has not settled).
struct BoundReport {
  double k_hat = 0.0;
  double last_quarter_sup = 0.0;
  double leading_sup = 0.0;
  bool stable = false;
};

BoundReport check_regularity_bound(const Trajectory& traj, const ThetaSchedule& theta);

}  // namespace adrflow
