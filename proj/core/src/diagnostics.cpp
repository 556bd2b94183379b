#include "adrflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "adrflow/errors.hpp"

namespace adrflow {

namespace {

struct LinePoints {
  std::vector<double> x;
  std::vector<double> y;
  int dropped = 0;
};

double series_value(const Trajectory& traj, const SeriesSpec& series, std::size_t i) {
  if (std::holds_alternative<ResidualSeries>(series)) {
    return traj.residuals[i];
  }
  return distance(traj.states[i], std::get<DistanceSeries>(series).reference);
}

LinePoints collect_log_points(const Trajectory& traj, const SeriesSpec& series, FitWindow window,
                              bool log_time) {
  LinePoints pts;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double t = traj.times[i];
    if (t < window.t_lo || t > window.t_hi) continue;
    const double v = series_value(traj, series, i);
    if (!(v > 0.0) || (log_time && !(t > 0.0))) {
      ++pts.dropped;
      continue;
    }
    pts.x.push_back(log_time ? std::log(t) : t);
    pts.y.push_back(std::log(v));
  }
  return pts;
}

struct LineFit {
  double slope = 0.0;
  double r_squared = 1.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  LineFit fit;
  if (sxx <= 0.0) {
    throw FitError("least_squares: degenerate abscissa (all samples at one time)");
  }
  fit.slope = sxy / sxx;
  if (syy <= 1e-30) {
    fit.r_squared = 1.0;  // constant series: the zero-slope line is exact
    fit.slope = 0.0;
    return fit;
  }
  double ss_res = 0.0;
  const double intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (intercept + fit.slope * x[i]);
    ss_res += e * e;
  }
  fit.r_squared = 1.0 - ss_res / syy;
  return fit;
}

RateReport fit_log_series(const Trajectory& traj, const SeriesSpec& series, FitWindow window,
                          bool log_time) {
  const LinePoints pts = collect_log_points(traj, series, window, log_time);
  if (pts.x.size() < 10) {
    throw FitError("rate fit: only " + std::to_string(pts.x.size()) +
                   " usable samples in window [" + std::to_string(window.t_lo) + ", " +
                   std::to_string(window.t_hi) + "], need 10");
  }
  const LineFit fit = least_squares(pts.x, pts.y);
  RateReport report;
  report.model = log_time ? RateModel::PowerLaw : RateModel::Exponential;
  report.fitted_value = -fit.slope;
  report.r_squared = fit.r_squared;
  report.window = window;
  report.used_samples = static_cast<int>(pts.x.size());
  report.dropped_samples = pts.dropped;
  return report;
}

}  // namespace

std::string to_string(RateModel model) {
  return model == RateModel::Exponential ? "exponential" : "power_law";
}

std::string to_string(RatePrediction provenance) {
  switch (provenance) {
    case RatePrediction::KappaBased: return "kappa-based";
    case RatePrediction::ZetaBased: return "zeta-based";
    case RatePrediction::SqrtRegularity: return "sqrt-regularity";
  }
  return "?";
}

RateReport fit_exponential(const Trajectory& traj, const SeriesSpec& series, FitWindow window) {
  return fit_log_series(traj, series, window, /*log_time=*/false);
}

RateReport fit_power(const Trajectory& traj, const SeriesSpec& series, FitWindow window) {
  return fit_log_series(traj, series, window, /*log_time=*/true);
}

SubregularityEstimate estimate_kappa(
    const OperatorSpec& spec_a, const OperatorSpec& spec_b, const DRParams& params,
    const VectorN& anchor, double radius, int n_samples, std::uint64_t seed,
    const std::function<double(const VectorN&)>& fix_distance) {
  if (!(radius > 0.0)) throw InvalidParameterError("estimate_kappa: radius must be positive");
  if (n_samples < 1) throw InvalidParameterError("estimate_kappa: need at least one sample");
  const double anchor_res = residual(spec_a, spec_b, params, anchor);
  if (!(anchor_res <= 1e-12)) {
    throw InvalidParameterError("estimate_kappa: anchor residual " + std::to_string(anchor_res) +
                                " exceeds 1e-12; anchor must be a located fixed point");
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t dim = anchor.dim();

  SubregularityEstimate est;
  est.radius = radius;
  est.anchor = anchor;
  est.samples = n_samples;

  const long max_attempts = 10L * n_samples;
  long attempts = 0;
  int accepted = 0;
  while (accepted < n_samples) {
    if (attempts++ >= max_attempts) {
      throw EstimateError("estimate_kappa: exceeded 10x oversampling; residual vanishes on the "
                          "sampling ball");
    }
    std::vector<double> dir(dim);
    double len_sq = 0.0;
    for (auto& d : dir) {
      d = gauss(rng);
      len_sq += d * d;
    }
    if (len_sq <= 1e-30) continue;
    const double r = radius * std::pow(unit(rng), 1.0 / static_cast<double>(dim));
    const double s = r / std::sqrt(len_sq);
    for (auto& d : dir) d *= s;
    const VectorN z = add(anchor, VectorN(std::move(dir)));

    const double res = residual(spec_a, spec_b, params, z);
    if (!(res > 1e-14)) continue;
    const double dist_fix = fix_distance ? fix_distance(z) : distance(z, anchor);
    est.kappa_hat = std::max(est.kappa_hat, dist_fix / res);
    ++accepted;
  }
  return est;
}

PredictedRates predict_rate(const DRParams& params, const ThetaSchedule& theta,
                            std::optional<double> kappa, std::optional<double> zeta,
                            double horizon) {
  (void)params;
  if (!kappa.has_value() && !zeta.has_value()) {
    throw ArgumentError("predict_rate: supply at least one of kappa, zeta");
  }
  PredictedRates rates;
  if (kappa.has_value()) {
    if (!(*kappa > 0.0)) throw InvalidParameterError("predict_rate: kappa must be positive");
    const double k2 = 2.0 * (*kappa) * (*kappa);
    if (theta.kind == ThetaSchedule::Kind::Constant) {
      rates.kappa_constant_rate = theta.theta_value / k2;
    }
    if (theta.kind == ThetaSchedule::Kind::Reciprocal) {
      rates.kappa_power_exponent = 1.0 / k2;
    }
    const ThetaSchedule th = theta;
    rates.kappa_exponent = [th, k2](double t) { return th.integral(th.t0, t) / k2; };
  }
  if (zeta.has_value()) {
    if (!(*zeta >= 0.0) || !(*zeta < 1.0)) {
      throw InvalidParameterError("predict_rate: zeta must lie in [0, 1)");
    }
    const double inf_theta =
        std::isinf(horizon) ? theta.infimum() : theta.horizon_infimum(horizon);
    rates.zeta_rate = 0.5 * (1.0 - *zeta) * inf_theta;
  }
  return rates;
}

double empirical_lipschitz(const std::function<VectorN(const VectorN&)>& op,
                           const VectorN& region_center, double region_radius, int n_pairs,
                           std::uint64_t seed) {
  if (n_pairs < 1) throw InvalidParameterError("empirical_lipschitz: need at least one pair");
  if (!(region_radius > 0.0)) {
    throw InvalidParameterError("empirical_lipschitz: radius must be positive");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-region_radius, region_radius);
  const std::size_t dim = region_center.dim();

  auto sample_point = [&]() {
    std::vector<double> v(dim);
    for (auto& c : v) c = coord(rng);
    return add(region_center, VectorN(std::move(v)));
  };

  double worst = 0.0;
  int accepted = 0;
  long attempts = 0;
  while (accepted < n_pairs) {
    if (attempts++ > 10L * n_pairs) {
      throw EstimateError("empirical_lipschitz: could not sample distinct pairs");
    }
    const VectorN x = sample_point();
    const VectorN y = sample_point();
    const double gap = distance(x, y);
    if (!(gap > 1e-14)) continue;
    worst = std::max(worst, distance(op(x), op(y)) / gap);
    ++accepted;
  }
  return worst;
}

BoundReport check_regularity_bound(const Trajectory& traj, const ThetaSchedule& theta) {
  if (traj.times.size() < 2) {
    throw InvalidParameterError("check_regularity_bound: trajectory too short");
  }
  const double t0 = traj.times.front();
  const double t_hi = traj.times.back();
  const double inf_theta = theta.horizon_infimum(t_hi);
  if (!(inf_theta > 0.0)) {
    throw InvalidParameterError("check_regularity_bound: horizon infimum of theta is zero");
  }
  const double split = t0 + 0.75 * (t_hi - t0);

  BoundReport report;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double q =
        traj.residuals[i] * traj.residuals[i] * inf_theta * (traj.times[i] - t0);
    report.k_hat = std::max(report.k_hat, q);
    if (traj.times[i] <= split) {
      report.leading_sup = std::max(report.leading_sup, q);
    } else {
      report.last_quarter_sup = std::max(report.last_quarter_sup, q);
    }
  }
  report.stable =
      std::isfinite(report.k_hat) && report.last_quarter_sup <= 1.1 * report.leading_sup;
  return report;
}

}  // namespace adrflow
