#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace callrate {

// Standard normal CDF, N(x) = erfc(-x / sqrt(2)) / 2.
double norm_cdf(double x);

// Black-Scholes price at time t of a European call maturing at T:
//   C = S N(d1) - K e^(-r (T - t)) N(d2),
//   d1 = (log(S/K) + (r + sigma^2/2)(T - t)) / (sigma sqrt(T - t)),
//   d2 = d1 - sigma sqrt(T - t).
// Requires S > 0, K > 0, sigma > 0, t < T.
double bs_call(double spot, double t, double strike, double rate, double sigma,
               double maturity);

// Terms of a callable margin loan: the broker borrows d at the call rate
// (rate r_underline = risk_free + premium), lends D at the margin rate
// r_bar against collateral worth S0, for term T years.  Rates are
// continuously compounded, unit-interval, annualized.
struct CallLoanTerms {
  double risk_free = 0.0;   // r
  double call_rate = 0.0;   // r_underline, the broker's funding rate
  double ltv = 0.0;         // d / S0, call debt per unit of collateral
  double term = 0.0;        // T, years
  double sigma = 0.0;       // collateral volatility

  // Currency amounts; needed for payoff and default classification.
  std::optional<double> collateral_value;  // S0
  std::optional<double> call_debt;         // d
  std::optional<double> margin_debt;       // D
  std::optional<double> margin_rate;       // r_bar

  double risk_premium() const { return call_rate - risk_free; }

  static CallLoanTerms with_call_rate(double risk_free, double call_rate,
                                      double ltv, double term, double sigma);
  static CallLoanTerms with_risk_premium(double risk_free, double premium,
                                         double ltv, double term,
                                         double sigma);

  // Throws std::invalid_argument on out-of-domain terms (ltv outside (0,1),
  // non-positive term or sigma, premium <= 0, or inconsistent currency
  // amounts d >= D, D >= S0, or margin_rate <= call_rate).
  void validate() const;
};

// Who absorbs a loss at maturity, by where the collateral price ends up.
enum class CreditEvent {
  NoDefault,           // S_T >= D e^(r_bar T): everyone is made whole
  ClientDefaultsOnly,  // d e^(r_underline T) <= S_T < D e^(r_bar T)
  CascadedDefault,     // S_T < d e^(r_underline T): loss reaches the bank
};

struct PayoffResult {
  double payoff = 0.0;  // bank's profit at T per the min-form
  CreditEvent event = CreditEvent::NoDefault;
};

// Bank's terminal profit on the call loan,
//   pi_T = min(S_T, d e^(r_underline T)) - d e^(r T),
// computed both in that form and as the covered-call decomposition
//   S_T - d e^(r T) - max(S_T - d e^(r_underline T), 0);
// the two must agree to 1e-9 (internal consistency check).  Requires the
// currency fields d, D, and margin_rate for classification.
PayoffResult bank_payoff(const CallLoanTerms& terms, double terminal_price);

// Residual of the no-arbitrage characterization at loan-to-value x:
//   g(x) = x (1 - N(d2) e^(premium T)) - N(-d1),
//   -d1 = (log x + (premium - sigma^2/2) T) / (sigma sqrt(T)),
//   d2 = d1 - sigma sqrt(T).
// A fair call loan satisfies g(ltv) = 0.
double characteristic_residual(double ltv, double premium, double term,
                               double sigma);

struct ImpliedLtv {
  double ltv = 0.0;
  double delta = 0.0;     // N(-d1) at the root: collateral hedge ratio
  double residual = 0.0;  // g at the returned root
  bool reg_t_violation = false;   // root exceeds the 50% initial-margin cap
  std::vector<double> roots;      // all roots found, ascending
};

// Solves g(x) = 0 for x in (0, 1) by scanning 2000 grid intervals for sign
// changes and bisecting each bracket until |g| < 1e-12 and the bracket is
// narrower than 1e-10.  Returns the smallest root; all roots are reported.
// Throws NoSolutionError when no root exists, std::invalid_argument on
// premium <= 0, term <= 0, or sigma <= 0.
ImpliedLtv implied_ltv(double premium, double term, double sigma);

struct ImpliedTerm {
  double term = 0.0;
  double delta = 0.0;
  double residual = 0.0;
  std::vector<double> roots;
};

// Solves g = 0 for the term T in (1e-6, 50], same scan-and-bisect scheme and
// tolerances.  Throws NoSolutionError when no admissible term exists.
ImpliedTerm implied_term(double premium, double ltv, double sigma);

// Shares of collateral the bank holds at time t (spot price S_t) to hedge
// the loan: delta = N(-d1) evaluated at strike d e^(r_underline T).  When
// the currency fields are absent the collateral is normalized to S0 = 1, so
// d = ltv.  Requires S_t > 0 and t < T.
double hedge_delta(const CallLoanTerms& terms, double spot, double t);

struct McProfit {
  double mean = 0.0;       // mean discounted profit per unit collateral
  double std_error = 0.0;  // Monte Carlo standard error of the mean
  std::size_t n_paths = 0;
};

// Monte Carlo check of the zero-profit condition: simulates S_T under the
// risk-neutral measure (GBM at rate `risk_free`), discounts the bank payoff,
// and reports its mean and standard error.  At terms satisfying g(ltv) = 0
// the mean is statistically zero.  Paths are generated in fixed blocks of
// 65536 with per-block seeds derived from `seed`, and block results are
// combined in index order, so the result is one double sequence regardless
// of scheduling.
McProfit mc_zero_profit(const CallLoanTerms& terms, std::size_t n_paths,
                        std::uint64_t seed);

}  // namespace callrate
