#pragma once

#include <cstdint>

#include "callrate/ou_model.hpp"

namespace callrate {

// Lognormal market index with continuously compounded growth rate nu_s and
// volatility sigma_s, both annualized and on the unit interval (0.09 means
// 9% a year).  Every rate consumed or produced in this module is a
// unit-interval annual rate; percent-scale inputs are rejected.
struct MarketIndexParams {
  double nu_s = 0.0;
  double sigma_s = 0.0;

  // Arithmetic drift of the index, mu_s = nu_s + sigma_s^2 / 2.
  double mu_s() const { return nu_s + 0.5 * sigma_s * sigma_s; }

  // The broker's pricing constant C = nu_s / 2 - sigma_s^2 / 4, the
  // call-rate-independent part of the monopoly margin rate.
  double pricing_constant() const {
    return 0.5 * nu_s - 0.25 * sigma_s * sigma_s;
  }

  // Throws UnitsError if nu_s looks percent-scale, std::invalid_argument
  // unless sigma_s > 0.
  void validate() const;
};

// Profit-maximizing margin rate charged by a monopolist broker funding at
// the call rate:  r_L = call_rate / 2 + C.
double monopoly_margin_rate(double call_rate, const MarketIndexParams& market);

// Nash equilibrium of the two-broker margin game:
//   r_L = 3/4 call_rate + 1/4 (nu_s - sigma_s^2 / 2).
double nash_margin_rate(double call_rate, const MarketIndexParams& market);

// Kelly-optimal position for an investor borrowing at the margin rate:
// leverage b = (mu_s - margin_rate) / sigma_s^2 on the index, q = b - 1
// borrowed.
struct KellyBet {
  double b = 0.0;
  double q = 0.0;
};
KellyBet kelly_bet(double margin_rate, const MarketIndexParams& market);

// Margin-rate dynamics induced by an OU call rate through the monopoly
// pricing map:  dr_L = theta (long_run_mean - r_L) dt + diffusion dW.
struct MarginRateSde {
  double theta = 0.0;
  double long_run_mean = 0.0;
  double diffusion = 0.0;
};

// Kelly-leverage dynamics induced by the same call rate.  The linear maps
// flip the noise sign (leverage falls when the call rate rises), recorded in
// noise_sign; `diffusion` is the magnitude.
struct LeverageSde {
  double theta = 0.0;
  double long_run_mean = 0.0;
  double diffusion = 0.0;
  int noise_sign = -1;

  double stationary_std() const;
};

// Both derivations take the OU call-rate parameters on the percent scale
// (as produced by calibrate_from_ar1) and convert to unit-interval rates
// internally by dividing mu_bar and sigma_bar by 100.
MarginRateSde derive_margin_sde(const OuParams& ou_percent,
                                const MarketIndexParams& market);
LeverageSde derive_leverage_sde(const OuParams& ou_percent,
                                const MarketIndexParams& market);

// Exact-transition simulation of the leverage SDE from b0.  With the same
// seed and grid as a simulate_ou call-rate path, the two paths consume the
// same z stream, and mapping the rate path through kelly_bet of
// monopoly_margin_rate reproduces this path.
SimPath simulate_leverage(const LeverageSde& sde, double b0, double step,
                          std::size_t n_steps, std::uint64_t seed);

}  // namespace callrate
