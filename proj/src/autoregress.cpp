#include "callrate/autoregress.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "callrate/errors.hpp"

namespace callrate {

namespace {

ResidualStats residual_stats(std::vector<double> abs_residuals) {
  std::sort(abs_residuals.begin(), abs_residuals.end());
  double sum = 0.0;
  for (double r : abs_residuals) sum += r;

  ResidualStats s;
  s.mean_abs = sum / static_cast<double>(abs_residuals.size());
  s.p5_abs = percentile(abs_residuals, 0.05);
  s.median_abs = percentile(abs_residuals, 0.50);
  s.p95_abs = percentile(abs_residuals, 0.95);
  return s;
}

}  // namespace

double Ar1Fit::long_run_std() const {
  return sigma / std::sqrt(1.0 - rho * rho);
}

Ar1Fit Ar1Fit::from_long_run(double mu, double rho, double sigma) {
  Ar1Fit f;
  f.alpha = (1.0 - rho) * mu;
  f.rho = rho;
  f.sigma = sigma;
  f.require_stationary();
  return f;
}

void Ar1Fit::require_stationary() const {
  if (!(std::fabs(rho) < 1.0)) {
    throw EstimationError("AR(1) is not stationary: |rho| = " +
                          std::to_string(std::fabs(rho)) + " >= 1");
  }
  if (!(sigma >= 0.0)) {
    throw EstimationError("AR(1) residual scale must be non-negative");
  }
}

std::pair<std::complex<double>, std::complex<double>> Ar2Fit::char_roots()
    const {
  const std::complex<double> disc(phi1 * phi1 + 4.0 * phi2, 0.0);
  const std::complex<double> root = std::sqrt(disc);
  return {0.5 * (phi1 + root), 0.5 * (phi1 - root)};
}

std::pair<std::complex<double>, std::complex<double>> Ar2Fit::lag_roots()
    const {
  const auto [l1, l2] = char_roots();
  return {1.0 / l1, 1.0 / l2};
}

double Ar2Fit::long_run_std() const {
  // Stationary variance of an AR(2):
  //   v = sigma^2 (1 - phi2) / ((1 + phi2) ((1 - phi2)^2 - phi1^2)).
  const double num = sigma * sigma * (1.0 - phi2);
  const double den =
      (1.0 + phi2) * ((1.0 - phi2) * (1.0 - phi2) - phi1 * phi1);
  return std::sqrt(num / den);
}

Ar2Fit Ar2Fit::from_params(double c, double phi1, double phi2, double sigma) {
  Ar2Fit f;
  f.c = c;
  f.phi1 = phi1;
  f.phi2 = phi2;
  f.sigma = sigma;
  f.require_stationary();
  return f;
}

void Ar2Fit::require_stationary() const {
  const bool inside = (phi2 < 1.0 - phi1) && (phi2 < 1.0 + phi1) &&
                      (std::fabs(phi2) < 1.0);
  if (!inside) {
    throw EstimationError(
        "AR(2) is not stationary: (phi1, phi2) outside the triangle "
        "phi2 < 1 - phi1, phi2 < 1 + phi1, |phi2| < 1");
  }
  if (!(sigma >= 0.0)) {
    throw EstimationError("AR(2) residual scale must be non-negative");
  }
}

Ar1Fit fit_ar1(const RateSeries& series) {
  if (series.units() != RateUnits::ContinuousPercent) {
    throw UnitsError(
        "autoregressions are estimated on continuously compounded rates; "
        "convert with to_continuous first");
  }
  if (series.size() < 30) {
    throw std::invalid_argument(
        "need at least 30 observations to estimate an autoregression");
  }

  const std::vector<double> y = series.values();
  const std::size_t n = y.size() - 1;  // regression pairs

  double xbar = 0.0;
  double rbar = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    xbar += y[t];
    rbar += y[t + 1];
  }
  xbar /= static_cast<double>(n);
  rbar /= static_cast<double>(n);

  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    sxx += (y[t] - xbar) * (y[t] - xbar);
    sxy += (y[t] - xbar) * (y[t + 1] - rbar);
  }
  if (sxx <= 1e-12 * static_cast<double>(n) * (1.0 + xbar * xbar)) {
    throw EstimationError("AR(1) regressor is degenerate (constant series?)");
  }

  Ar1Fit f;
  f.n_obs = n;
  f.rho = sxy / sxx;
  f.alpha = rbar - f.rho * xbar;

  double ssr = 0.0;
  double sst = 0.0;
  std::vector<double> abs_res(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double e = y[t + 1] - (f.alpha + f.rho * y[t]);
    ssr += e * e;
    sst += (y[t + 1] - rbar) * (y[t + 1] - rbar);
    abs_res[t] = std::fabs(e);
  }
  f.sigma = std::sqrt(ssr / static_cast<double>(n));
  f.r_squared = sst > 0.0 ? 1.0 - ssr / sst : 0.0;

  const double s2 = ssr / static_cast<double>(n - 2);  // unbiased, for SEs
  f.se_rho = std::sqrt(s2 / sxx);
  f.se_alpha =
      std::sqrt(s2 * (1.0 / static_cast<double>(n) + xbar * xbar / sxx));
  f.residuals = residual_stats(std::move(abs_res));

  f.require_stationary();
  return f;
}

Ar2Fit fit_ar2(const RateSeries& series) {
  if (series.units() != RateUnits::ContinuousPercent) {
    throw UnitsError(
        "autoregressions are estimated on continuously compounded rates; "
        "convert with to_continuous first");
  }
  if (series.size() < 30) {
    throw std::invalid_argument(
        "need at least 30 observations to estimate an autoregression");
  }

  const std::vector<double> y = series.values();
  const std::size_t n = y.size() - 2;  // regression triples

  // Regressors x1 = y_t, x2 = y_{t-1}; response y_{t+1} (t = 1..n).
  double x1bar = 0.0;
  double x2bar = 0.0;
  double rbar = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    x1bar += y[t + 1];
    x2bar += y[t];
    rbar += y[t + 2];
  }
  x1bar /= static_cast<double>(n);
  x2bar /= static_cast<double>(n);
  rbar /= static_cast<double>(n);

  double s11 = 0.0;
  double s22 = 0.0;
  double s12 = 0.0;
  double s1y = 0.0;
  double s2y = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double d1 = y[t + 1] - x1bar;
    const double d2 = y[t] - x2bar;
    const double dy = y[t + 2] - rbar;
    s11 += d1 * d1;
    s22 += d2 * d2;
    s12 += d1 * d2;
    s1y += d1 * dy;
    s2y += d2 * dy;
  }
  const double det = s11 * s22 - s12 * s12;
  if (det <= 1e-12 * s11 * s22 || !(det > 0.0)) {
    throw EstimationError(
        "AR(2) regressors are degenerate or collinear; cannot estimate");
  }

  Ar2Fit f;
  f.n_obs = n;
  f.phi1 = (s22 * s1y - s12 * s2y) / det;
  f.phi2 = (s11 * s2y - s12 * s1y) / det;
  f.c = rbar - f.phi1 * x1bar - f.phi2 * x2bar;

  double ssr = 0.0;
  double sst = 0.0;
  std::vector<double> abs_res(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double e = y[t + 2] - (f.c + f.phi1 * y[t + 1] + f.phi2 * y[t]);
    ssr += e * e;
    sst += (y[t + 2] - rbar) * (y[t + 2] - rbar);
    abs_res[t] = std::fabs(e);
  }
  f.sigma = std::sqrt(ssr / static_cast<double>(n));
  f.r_squared = sst > 0.0 ? 1.0 - ssr / sst : 0.0;

  const double s2 = ssr / static_cast<double>(n - 3);  // unbiased, for SEs
  f.se_phi1 = std::sqrt(s2 * s22 / det);
  f.se_phi2 = std::sqrt(s2 * s11 / det);
  const double quad = (s22 * x1bar * x1bar - 2.0 * s12 * x1bar * x2bar +
                       s11 * x2bar * x2bar) /
                      det;
  f.se_c = std::sqrt(s2 * (1.0 / static_cast<double>(n) + quad));
  f.residuals = residual_stats(std::move(abs_res));

  f.require_stationary();
  return f;
}

std::vector<Forecast> forecast_ar1(const Ar1Fit& fit, double y0, int horizon) {
  fit.require_stationary();
  if (horizon < 1) {
    throw std::invalid_argument("forecast horizon must be at least 1");
  }
  if (!std::isfinite(y0)) {
    throw std::invalid_argument("conditioning observation must be finite");
  }

  const double mu = fit.mu();
  const double s = fit.long_run_std();
  std::vector<Forecast> out;
  out.reserve(static_cast<std::size_t>(horizon));
  double rho_t = 1.0;
  for (int t = 1; t <= horizon; ++t) {
    rho_t *= fit.rho;
    out.push_back(Forecast{t, mu + rho_t * (y0 - mu),
                           s * std::sqrt(1.0 - rho_t * rho_t)});
  }
  return out;
}

std::vector<Forecast> forecast_ar2(const Ar2Fit& fit, double y_prev,
                                   double y_last, int horizon) {
  fit.require_stationary();
  if (horizon < 1) {
    throw std::invalid_argument("forecast horizon must be at least 1");
  }
  if (!std::isfinite(y_prev) || !std::isfinite(y_last)) {
    throw std::invalid_argument("conditioning observations must be finite");
  }

  const double mu = fit.mu();
  const double d0 = y_prev - mu;
  const double d1 = y_last - mu;
  const auto [l1, l2] = fit.char_roots();
  const bool repeated = std::abs(l1 - l2) < 1e-10;

  // Coefficients of the general solution for the deviation from the mean,
  // a1 l1^t + a2 l2^t, or (a1 + a2 t) l^t in the repeated-root case, fitted
  // to the two conditioning deviations at t = 0 and t = 1.
  std::complex<double> a1;
  std::complex<double> a2;
  if (repeated) {
    if (std::abs(l1) < 1e-154) {
      a1 = a2 = 0.0;  // basis degenerates; deviation is 0 from t = 2 on
    } else {
      a1 = d0;
      a2 = d1 / l1 - d0;
    }
  } else {
    a1 = (d1 - d0 * l2) / (l1 - l2);
    a2 = (d0 * l1 - d1) / (l1 - l2);
  }

  // Impulse weights for the forecast-error variance, and the forward
  // recursion used as an internal cross-check of the closed form.
  double psi_prev = 1.0;  // psi_0
  double psi_curr = fit.phi1;
  double var_sum = 1.0;  // sum of psi_j^2 over j < t, starting at t = 1

  double rec_prev = y_prev;
  double rec_curr = y_last;
  std::complex<double> p1 = l1;  // l1^t at t = 1
  std::complex<double> p2 = l2;

  std::vector<Forecast> out;
  out.reserve(static_cast<std::size_t>(horizon));
  for (int t = 1; t <= horizon; ++t) {
    const double rec_next = fit.c + fit.phi1 * rec_curr + fit.phi2 * rec_prev;
    rec_prev = rec_curr;
    rec_curr = rec_next;

    // Closed form at sequence index t + 1 (the conditioning pair sits at
    // indices 0 and 1).
    p1 *= l1;
    p2 *= l2;
    const std::complex<double> dev =
        repeated ? (a1 + a2 * static_cast<double>(t + 1)) * p1
                 : a1 * p1 + a2 * p2;
    const double point = mu + dev.real();

    if (std::fabs(point - rec_next) >
        1e-9 * std::max(1.0, std::fabs(rec_next))) {
      throw std::logic_error(
          "AR(2) closed-form forecast disagrees with the forward recursion");
    }

    out.push_back(Forecast{t, point, fit.sigma * std::sqrt(var_sum)});

    // Advance psi and the variance sum for the next horizon.
    var_sum += psi_curr * psi_curr;
    const double psi_next = fit.phi1 * psi_curr + fit.phi2 * psi_prev;
    psi_prev = psi_curr;
    psi_curr = psi_next;
  }
  return out;
}

std::vector<double> impulse_response(const Ar1Fit& fit, int horizon) {
  fit.require_stationary();
  if (horizon < 0) {
    throw std::invalid_argument("impulse horizon must be non-negative");
  }
  std::vector<double> out(static_cast<std::size_t>(horizon) + 1);
  double rho_t = 1.0;
  for (int t = 0; t <= horizon; ++t) {
    out[static_cast<std::size_t>(t)] = 100.0 * rho_t;
    rho_t *= fit.rho;
  }
  return out;
}

std::vector<double> impulse_response(const Ar2Fit& fit, int horizon) {
  fit.require_stationary();
  if (horizon < 0) {
    throw std::invalid_argument("impulse horizon must be non-negative");
  }
  std::vector<double> out(static_cast<std::size_t>(horizon) + 1);
  double psi_prev = 0.0;  // psi_{-1}, so the recursion seeds itself
  double psi_curr = 1.0;  // psi_0
  for (int t = 0; t <= horizon; ++t) {
    out[static_cast<std::size_t>(t)] = 100.0 * psi_curr;
    const double psi_next = fit.phi1 * psi_curr + fit.phi2 * psi_prev;
    psi_prev = psi_curr;
    psi_curr = psi_next;
  }
  return out;
}

}  // namespace callrate
