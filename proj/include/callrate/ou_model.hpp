#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "callrate/autoregress.hpp"

namespace callrate {

// Ornstein-Uhlenbeck / Vasicek dynamics  dy = theta_bar (mu_bar - y) dt
// + sigma_bar dW, with time measured in months.
struct OuParams {
  double mu_bar = 0.0;
  double theta_bar = 0.0;  // > 0
  double sigma_bar = 0.0;  // >= 0 (zero gives deterministic decay)

  double stationary_std() const;  // sigma_bar / sqrt(2 theta_bar)

  // Throws EstimationError unless theta_bar > 0 and sigma_bar >= 0.
  void validate() const;
};

// Maps a stationary AR(1) fit at the one-month sampling interval onto the
// exact OU transition:
//   mu_bar = mu,  theta_bar = -log(rho),
//   sigma_bar = sigma * sqrt(-2 log(rho) / (1 - rho^2)),
// so the OU stationary standard deviation equals the AR(1) one by
// construction.  Requires 0 < rho < 1 (throws EstimationError otherwise).
OuParams calibrate_from_ar1(const Ar1Fit& fit);

struct OuForecast {
  double point = 0.0;
  double rmse = 0.0;
};

// Conditional mean and forecast RMSE a time t >= 0 ahead of state y0:
//   point = mu_bar + e^(-theta_bar t) (y0 - mu_bar),
//   rmse  = stationary_std * sqrt(1 - e^(-2 theta_bar t)).
OuForecast ou_forecast(const OuParams& params, double y0, double t);

enum class SimScheme {
  ExactTransition,  // samples the exact Gaussian transition; no time bias
  EulerMaruyama,    // first-order scheme, for step-size comparisons
};

struct SimPath {
  std::vector<double> times;   // k * step, k = 0..n_steps
  std::vector<double> values;  // values[0] == y0
  std::uint64_t seed = 0;
};

// Simulates one path on the uniform grid {0, step, ..., n_steps * step}.
// The noise stream is NormalSampler(seed): one deviate per step, so two
// simulations with the same seed and grid consume identical z_k.
SimPath simulate_ou(const OuParams& params, double y0, double step,
                    std::size_t n_steps, std::uint64_t seed,
                    SimScheme scheme = SimScheme::ExactTransition);

namespace detail {

// Exact-transition sampler shared by the rate and leverage simulators.  The
// diffusion coefficient may carry a sign: the step is
//   y_{k+1} = mean + m (y_k - mean) + diffusion * g * z_k,
// with m = e^(-theta step) and g = sqrt((1 - m^2) / (2 theta)), so a
// negative diffusion yields the mirror path driven by the same z stream.
SimPath exact_ou_path(double mean, double theta, double diffusion, double y0,
                      double step, std::size_t n_steps, std::uint64_t seed);

}  // namespace detail

}  // namespace callrate
