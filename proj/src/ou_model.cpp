#include "callrate/ou_model.hpp"

#include <cmath>
#include <stdexcept>

#include "callrate/errors.hpp"
#include "callrate/random.hpp"

namespace callrate {

double OuParams::stationary_std() const {
  return sigma_bar / std::sqrt(2.0 * theta_bar);
}

void OuParams::validate() const {
  if (!(theta_bar > 0.0)) {
    throw EstimationError("OU mean-reversion speed must be positive");
  }
  if (!(sigma_bar >= 0.0)) {
    throw EstimationError("OU diffusion must be non-negative");
  }
  if (!std::isfinite(mu_bar) || !std::isfinite(theta_bar) ||
      !std::isfinite(sigma_bar)) {
    throw EstimationError("OU parameters must be finite");
  }
}

OuParams calibrate_from_ar1(const Ar1Fit& fit) {
  if (!(fit.rho > 0.0 && fit.rho < 1.0)) {
    throw EstimationError(
        "OU calibration requires 0 < rho < 1 (monotone mean reversion)");
  }
  OuParams p;
  p.mu_bar = fit.mu();
  p.theta_bar = -std::log(fit.rho);
  p.sigma_bar =
      fit.sigma * std::sqrt(2.0 * p.theta_bar / (1.0 - fit.rho * fit.rho));
  p.validate();
  return p;
}

OuForecast ou_forecast(const OuParams& params, double y0, double t) {
  params.validate();
  if (!(t >= 0.0)) {
    throw std::invalid_argument("forecast time must be non-negative");
  }
  const double m = std::exp(-params.theta_bar * t);
  return OuForecast{params.mu_bar + m * (y0 - params.mu_bar),
                    params.stationary_std() * std::sqrt(1.0 - m * m)};
}

namespace detail {

SimPath exact_ou_path(double mean, double theta, double diffusion, double y0,
                      double step, std::size_t n_steps, std::uint64_t seed) {
  const double m = std::exp(-theta * step);
  const double g = std::sqrt((1.0 - m * m) / (2.0 * theta));

  SimPath path;
  path.seed = seed;
  path.times.reserve(n_steps + 1);
  path.values.reserve(n_steps + 1);
  path.times.push_back(0.0);
  path.values.push_back(y0);

  NormalSampler sampler(seed);
  double y = y0;
  for (std::size_t k = 1; k <= n_steps; ++k) {
    y = mean + m * (y - mean) + diffusion * g * sampler.normal();
    path.times.push_back(static_cast<double>(k) * step);
    path.values.push_back(y);
  }
  return path;
}

}  // namespace detail

SimPath simulate_ou(const OuParams& params, double y0, double step,
                    std::size_t n_steps, std::uint64_t seed,
                    SimScheme scheme) {
  params.validate();
  if (!(step > 0.0)) {
    throw std::invalid_argument("simulation step must be positive");
  }
  if (n_steps == 0) {
    throw std::invalid_argument("simulation needs at least one step");
  }

  if (scheme == SimScheme::ExactTransition) {
    return detail::exact_ou_path(params.mu_bar, params.theta_bar,
                                 params.sigma_bar, y0, step, n_steps, seed);
  }

  // Euler-Maruyama: y += theta (mu - y) dt + sigma sqrt(dt) z.
  SimPath path;
  path.seed = seed;
  path.times.reserve(n_steps + 1);
  path.values.reserve(n_steps + 1);
  path.times.push_back(0.0);
  path.values.push_back(y0);

  NormalSampler sampler(seed);
  const double sq_dt = std::sqrt(step);
  double y = y0;
  for (std::size_t k = 1; k <= n_steps; ++k) {
    y += params.theta_bar * (params.mu_bar - y) * step +
         params.sigma_bar * sq_dt * sampler.normal();
    path.times.push_back(static_cast<double>(k) * step);
    path.values.push_back(y);
  }
  return path;
}

}  // namespace callrate
