#include "callrate/margin_pricing.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "callrate/errors.hpp"

namespace callrate {

namespace {

// Guards the percent-vs-unit-interval boundary: annual rates here must be on
// the unit interval, so anything above 1.0 is almost certainly a percent.
void require_unit_interval(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument(std::string(name) + " must be finite");
  }
  if (value > 1.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%s = %g looks percent-scale; this module takes "
                  "unit-interval annual rates (divide by 100)",
                  name, value);
    throw UnitsError(buf);
  }
}

}  // namespace

void MarketIndexParams::validate() const {
  require_unit_interval(nu_s, "nu_s");
  if (!(sigma_s > 0.0) || !std::isfinite(sigma_s)) {
    throw std::invalid_argument("index volatility sigma_s must be positive");
  }
}

double monopoly_margin_rate(double call_rate,
                            const MarketIndexParams& market) {
  market.validate();
  require_unit_interval(call_rate, "call_rate");
  return 0.5 * call_rate + market.pricing_constant();
}

double nash_margin_rate(double call_rate, const MarketIndexParams& market) {
  market.validate();
  require_unit_interval(call_rate, "call_rate");
  return 0.75 * call_rate + 0.25 * (market.nu_s - 0.5 * market.sigma_s * market.sigma_s);
}

KellyBet kelly_bet(double margin_rate, const MarketIndexParams& market) {
  market.validate();
  require_unit_interval(margin_rate, "margin_rate");
  const double b =
      (market.mu_s() - margin_rate) / (market.sigma_s * market.sigma_s);
  return KellyBet{b, b - 1.0};
}

double LeverageSde::stationary_std() const {
  return diffusion / std::sqrt(2.0 * theta);
}

MarginRateSde derive_margin_sde(const OuParams& ou_percent,
                                const MarketIndexParams& market) {
  ou_percent.validate();
  market.validate();
  const double mu_u = ou_percent.mu_bar / 100.0;
  const double sigma_u = ou_percent.sigma_bar / 100.0;

  // r_L = call/2 + C is linear, so OU dynamics map to OU dynamics with the
  // same reversion speed, the mapped long-run mean, and half the diffusion.
  MarginRateSde sde;
  sde.theta = ou_percent.theta_bar;
  sde.long_run_mean = monopoly_margin_rate(mu_u, market);
  sde.diffusion = 0.5 * sigma_u;
  return sde;
}

LeverageSde derive_leverage_sde(const OuParams& ou_percent,
                                const MarketIndexParams& market) {
  ou_percent.validate();
  market.validate();
  const double mu_u = ou_percent.mu_bar / 100.0;
  const double sigma_u = ou_percent.sigma_bar / 100.0;

  // b = (mu_s - r_L) / sigma_s^2 composed with r_L = call/2 + C is again
  // linear in the call rate, with slope -1/(2 sigma_s^2): same reversion
  // speed, long-run mean at the composed map of mu_bar, diffusion magnitude
  // sigma_bar / (2 sigma_s^2), and inverted noise.
  LeverageSde sde;
  sde.theta = ou_percent.theta_bar;
  sde.long_run_mean = kelly_bet(monopoly_margin_rate(mu_u, market), market).b;
  sde.diffusion = 0.5 * sigma_u / (market.sigma_s * market.sigma_s);
  sde.noise_sign = -1;
  return sde;
}

SimPath simulate_leverage(const LeverageSde& sde, double b0, double step,
                          std::size_t n_steps, std::uint64_t seed) {
  if (!(sde.theta > 0.0)) {
    throw EstimationError("leverage SDE reversion speed must be positive");
  }
  if (!(sde.diffusion >= 0.0)) {
    throw EstimationError("leverage SDE diffusion magnitude must be >= 0");
  }
  if (!(step > 0.0)) {
    throw std::invalid_argument("simulation step must be positive");
  }
  if (n_steps == 0) {
    throw std::invalid_argument("simulation needs at least one step");
  }
  return detail::exact_ou_path(sde.long_run_mean, sde.theta,
                               static_cast<double>(sde.noise_sign) *
                                   sde.diffusion,
                               b0, step, n_steps, seed);
}

}  // namespace callrate
