#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "callrate/rate_series.hpp"

namespace callrate {

// Distribution of absolute one-step residuals from a fitted model.
struct ResidualStats {
  double mean_abs = 0.0;
  double p5_abs = 0.0;
  double median_abs = 0.0;
  double p95_abs = 0.0;
};

// First-order autoregression  y_{t+1} = alpha + rho * y_t + eps_{t+1},
// estimated by ordinary least squares.  `sigma` is the root mean square
// residual (divisor n, the number of regression pairs); standard errors use
// the classical unbiased variance (divisor n - 2).
struct Ar1Fit {
  double alpha = 0.0;
  double rho = 0.0;
  double sigma = 0.0;
  double se_alpha = 0.0;
  double se_rho = 0.0;
  double r_squared = 0.0;
  std::size_t n_obs = 0;  // regression pairs used
  ResidualStats residuals;

  // Derived quantities; exact reparameterizations of (alpha, rho, sigma).
  double theta() const { return 1.0 - rho; }          // mean-reversion speed
  double mu() const { return alpha / theta(); }       // long-run mean
  double lag_root() const { return 1.0 / rho; }       // root of 1 - rho*z
  double long_run_std() const;                        // stationary std dev

  // Parameter bundle with the given long-run mean, persistence, and residual
  // scale (alpha = (1 - rho) * mu); estimation statistics are left zero.
  static Ar1Fit from_long_run(double mu, double rho, double sigma);

  // Throws EstimationError unless |rho| < 1 and sigma >= 0.
  void require_stationary() const;
};

// Second-order autoregression
//   y_{t+1} = c + phi1 * y_t + phi2 * y_{t-1} + eps_{t+1}.
struct Ar2Fit {
  double c = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
  double sigma = 0.0;
  double se_c = 0.0;
  double se_phi1 = 0.0;
  double se_phi2 = 0.0;
  double r_squared = 0.0;
  std::size_t n_obs = 0;  // regression triples used
  ResidualStats residuals;

  double mu() const { return c / (1.0 - phi1 - phi2); }  // long-run mean

  // Roots of the characteristic polynomial z^2 - phi1*z - phi2 = 0.  The
  // first root carries the "+" branch of the discriminant; complex roots are
  // conjugates.  Their reciprocals are the roots of the lag polynomial
  // 1 - phi1*L - phi2*L^2.
  std::pair<std::complex<double>, std::complex<double>> char_roots() const;
  std::pair<std::complex<double>, std::complex<double>> lag_roots() const;

  double long_run_std() const;  // stationary std dev

  static Ar2Fit from_params(double c, double phi1, double phi2, double sigma);

  // Throws EstimationError unless (phi1, phi2) lies strictly inside the
  // stationarity triangle: phi2 < 1 - phi1, phi2 < 1 + phi1, |phi2| < 1.
  void require_stationary() const;
};

// OLS estimation on a continuously compounded series.  Throws UnitsError on
// nominal input, std::invalid_argument if the series is shorter than 30
// observations, and EstimationError on degenerate regressors or
// non-stationary estimates.
Ar1Fit fit_ar1(const RateSeries& series);
Ar2Fit fit_ar2(const RateSeries& series);

// A point forecast with its closed-form forecast-error RMSE, `horizon` months
// after the last conditioning observation.
struct Forecast {
  int horizon = 0;
  double point = 0.0;
  double rmse = 0.0;
};

// AR(1) closed form from last observation y0:
//   point(t) = mu + rho^t (y0 - mu),   rmse(t) = s sqrt(1 - rho^(2t)),
// where s is the stationary standard deviation.
std::vector<Forecast> forecast_ar1(const Ar1Fit& fit, double y0, int horizon);

// AR(2) closed form from the two most recent observations (y_prev = next to
// last, y_last = most recent), evaluating the general solution of the
// deviation recursion in the characteristic roots; the repeated-root branch
// (A + B t) lambda^t is taken when the roots coincide to 1e-10.  Each point
// is verified internally against the forward recursion to 1e-9.  rmse(t) =
// sigma sqrt(sum_{j<t} psi_j^2) with psi the impulse response weights.
std::vector<Forecast> forecast_ar2(const Ar2Fit& fit, double y_prev,
                                   double y_last, int horizon);

// Response, in basis points of rate, at months 0..horizon to a one-time
// 100 bp innovation: 100 * rho^t for AR(1) and 100 * psi_t for AR(2), where
// psi_0 = 1, psi_1 = phi1, psi_t = phi1 psi_{t-1} + phi2 psi_{t-2}.
std::vector<double> impulse_response(const Ar1Fit& fit, int horizon);
std::vector<double> impulse_response(const Ar2Fit& fit, int horizon);

}  // namespace callrate
