#include "callrate/arbitrage.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "callrate/errors.hpp"
#include "callrate/random.hpp"

namespace callrate {

namespace {

// Scan [lo, hi] on a uniform grid and bisect every sign-change bracket.
// Tolerances: bracket narrower than 1e-10 and |g| < 1e-12 at the returned
// midpoint (bisection proceeds to the representable limit if needed).
constexpr int kScanIntervals = 2000;
constexpr double kRootWidthTol = 1e-10;
constexpr double kRootResidualTol = 1e-12;

template <typename F>
double bisect_bracket(const F& g, double lo, double hi, double f_lo) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return mid;  // no representable midpoint left
    const double f_mid = g(mid);
    if (f_mid == 0.0 ||
        (hi - lo < kRootWidthTol && std::fabs(f_mid) < kRootResidualTol)) {
      return mid;
    }
    if ((f_lo < 0.0) != (f_mid < 0.0)) {
      hi = mid;
    } else {
      lo = mid;
      f_lo = f_mid;
    }
  }
  return 0.5 * (lo + hi);
}

template <typename F>
std::vector<double> scan_roots(const F& g, double lo, double hi) {
  std::vector<double> roots;
  const double h = (hi - lo) / kScanIntervals;
  double x_prev = lo;
  double f_prev = g(lo);
  if (f_prev == 0.0) roots.push_back(lo);
  for (int i = 1; i <= kScanIntervals; ++i) {
    const double x = (i == kScanIntervals) ? hi : lo + i * h;
    const double f = g(x);
    if (f == 0.0) {
      roots.push_back(x);
    } else if (f_prev != 0.0 && (f_prev < 0.0) != (f < 0.0)) {
      roots.push_back(bisect_bracket(g, x_prev, x, f_prev));
    }
    x_prev = x;
    f_prev = f;
  }
  return roots;
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be positive");
  }
}

}  // namespace

double norm_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double bs_call(double spot, double t, double strike, double rate, double sigma,
               double maturity) {
  require_positive(spot, "spot");
  require_positive(strike, "strike");
  require_positive(sigma, "sigma");
  const double tau = maturity - t;
  if (!(tau > 0.0)) {
    throw std::invalid_argument("valuation time must precede maturity");
  }
  const double sq = sigma * std::sqrt(tau);
  const double d1 =
      (std::log(spot / strike) + (rate + 0.5 * sigma * sigma) * tau) / sq;
  const double d2 = d1 - sq;
  return spot * norm_cdf(d1) - strike * std::exp(-rate * tau) * norm_cdf(d2);
}

CallLoanTerms CallLoanTerms::with_call_rate(double risk_free, double call_rate,
                                            double ltv, double term,
                                            double sigma) {
  CallLoanTerms t;
  t.risk_free = risk_free;
  t.call_rate = call_rate;
  t.ltv = ltv;
  t.term = term;
  t.sigma = sigma;
  t.validate();
  return t;
}

CallLoanTerms CallLoanTerms::with_risk_premium(double risk_free,
                                               double premium, double ltv,
                                               double term, double sigma) {
  return with_call_rate(risk_free, risk_free + premium, ltv, term, sigma);
}

void CallLoanTerms::validate() const {
  if (!std::isfinite(risk_free) || !std::isfinite(call_rate)) {
    throw std::invalid_argument("loan rates must be finite");
  }
  if (!(risk_premium() > 0.0)) {
    throw std::invalid_argument(
        "call rate must exceed the risk-free rate (positive risk premium)");
  }
  if (!(ltv > 0.0 && ltv < 1.0)) {
    throw std::invalid_argument("loan-to-value must lie in (0, 1)");
  }
  require_positive(term, "term");
  require_positive(sigma, "sigma");

  const bool has_cash =
      collateral_value.has_value() || call_debt.has_value() ||
      margin_debt.has_value();
  if (has_cash) {
    const double s0 = collateral_value.value_or(1.0);
    const double d = call_debt.value_or(ltv * s0);
    require_positive(s0, "collateral value");
    require_positive(d, "call debt");
    if (margin_debt) {
      if (!(d < *margin_debt && *margin_debt < s0)) {
        throw std::invalid_argument(
            "currency amounts must satisfy 0 < d < D < S0");
      }
    }
  }
  if (margin_rate && !(*margin_rate > call_rate)) {
    throw std::invalid_argument("margin rate must exceed the call rate");
  }
}

PayoffResult bank_payoff(const CallLoanTerms& terms, double terminal_price) {
  terms.validate();
  if (!terms.call_debt || !terms.margin_debt || !terms.margin_rate) {
    throw std::invalid_argument(
        "bank payoff needs call_debt, margin_debt, and margin_rate");
  }
  if (!(terminal_price >= 0.0) || !std::isfinite(terminal_price)) {
    throw std::invalid_argument("terminal price must be non-negative");
  }

  const double d = *terms.call_debt;
  const double strike = d * std::exp(terms.call_rate * terms.term);
  const double funding = d * std::exp(terms.risk_free * terms.term);

  const double min_form = std::min(terminal_price, strike) - funding;
  const double covered_call = terminal_price - funding -
                              std::max(terminal_price - strike, 0.0);
  if (std::fabs(min_form - covered_call) >
      1e-9 * std::max({1.0, terminal_price, strike})) {
    throw std::logic_error(
        "bank payoff forms disagree beyond tolerance (internal error)");
  }

  const double broker_threshold =
      *terms.margin_debt * std::exp(*terms.margin_rate * terms.term);
  CreditEvent event = CreditEvent::CascadedDefault;
  if (terminal_price >= broker_threshold) {
    event = CreditEvent::NoDefault;
  } else if (terminal_price >= strike) {
    event = CreditEvent::ClientDefaultsOnly;
  }
  return PayoffResult{min_form, event};
}

double characteristic_residual(double ltv, double premium, double term,
                               double sigma) {
  if (!(ltv > 0.0 && ltv < 1.0)) {
    throw std::invalid_argument("loan-to-value must lie in (0, 1)");
  }
  require_positive(term, "term");
  require_positive(sigma, "sigma");

  const double sq = sigma * std::sqrt(term);
  const double minus_d1 =
      (std::log(ltv) + (premium - 0.5 * sigma * sigma) * term) / sq;
  const double d2 = -minus_d1 - sq;
  return ltv * (1.0 - norm_cdf(d2) * std::exp(premium * term)) -
         norm_cdf(minus_d1);
}

namespace {

// Hedge ratio N(-d1) implied by the characterization at a candidate root.
double root_delta(double ltv, double premium, double term, double sigma) {
  const double sq = sigma * std::sqrt(term);
  const double minus_d1 =
      (std::log(ltv) + (premium - 0.5 * sigma * sigma) * term) / sq;
  return norm_cdf(minus_d1);
}

}  // namespace

ImpliedLtv implied_ltv(double premium, double term, double sigma) {
  require_positive(premium, "risk premium");
  require_positive(term, "term");
  require_positive(sigma, "sigma");

  const auto g = [&](double x) {
    return characteristic_residual(x, premium, term, sigma);
  };
  std::vector<double> roots = scan_roots(g, 1e-8, 1.0 - 1e-8);
  if (roots.empty()) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "no fair loan-to-value exists for premium=%g, term=%g, "
                  "sigma=%g",
                  premium, term, sigma);
    throw NoSolutionError(buf);
  }

  ImpliedLtv out;
  out.roots = std::move(roots);
  out.ltv = out.roots.front();
  out.residual = g(out.ltv);
  out.delta = root_delta(out.ltv, premium, term, sigma);
  out.reg_t_violation = out.ltv > 0.5;

  // At any root, x (1 - N(d2) e^(premium T)) = N(-d1) > 0 forces the
  // denominator of the solved-for form to be positive; verify it anyway.
  for (double x : out.roots) {
    const double sq = sigma * std::sqrt(term);
    const double d2 = -(std::log(x) + (premium - 0.5 * sigma * sigma) * term) /
                          sq -
                      sq;
    if (!(1.0 - norm_cdf(d2) * std::exp(premium * term) > 0.0)) {
      throw std::logic_error(
          "non-positive denominator at an implied-LTV root (internal error)");
    }
  }
  return out;
}

ImpliedTerm implied_term(double premium, double ltv, double sigma) {
  require_positive(premium, "risk premium");
  require_positive(sigma, "sigma");
  if (!(ltv > 0.0 && ltv < 1.0)) {
    throw std::invalid_argument("loan-to-value must lie in (0, 1)");
  }

  const auto g = [&](double t) {
    return characteristic_residual(ltv, premium, t, sigma);
  };
  std::vector<double> roots = scan_roots(g, 1e-6, 50.0);
  if (roots.empty()) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "no fair term in (0, 50] exists for premium=%g, ltv=%g, "
                  "sigma=%g",
                  premium, ltv, sigma);
    throw NoSolutionError(buf);
  }

  ImpliedTerm out;
  out.roots = std::move(roots);
  out.term = out.roots.front();
  out.residual = g(out.term);
  out.delta = root_delta(ltv, premium, out.term, sigma);
  return out;
}

double hedge_delta(const CallLoanTerms& terms, double spot, double t) {
  terms.validate();
  require_positive(spot, "spot");
  const double tau = terms.term - t;
  if (!(tau > 0.0)) {
    throw std::invalid_argument("hedge time must precede maturity");
  }

  const double s0 = terms.collateral_value.value_or(1.0);
  const double d = terms.call_debt.value_or(terms.ltv * s0);
  const double strike = d * std::exp(terms.call_rate * terms.term);

  const double sq = terms.sigma * std::sqrt(tau);
  const double d1 = (std::log(spot / strike) +
                     (terms.risk_free + 0.5 * terms.sigma * terms.sigma) *
                         tau) /
                    sq;
  return norm_cdf(-d1);
}

namespace {

// Numerically stable streaming moments, merged blockwise in index order.
struct MomentAcc {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  void merge(const MomentAcc& other) {
    if (other.n == 0) return;
    if (n == 0) {
      *this = other;
      return;
    }
    const double delta = other.mean - mean;
    const std::size_t total = n + other.n;
    mean += delta * static_cast<double>(other.n) / static_cast<double>(total);
    m2 += other.m2 + delta * delta * static_cast<double>(n) *
                         static_cast<double>(other.n) /
                         static_cast<double>(total);
    n = total;
  }
};

}  // namespace

McProfit mc_zero_profit(const CallLoanTerms& terms, std::size_t n_paths,
                        std::uint64_t seed) {
  terms.validate();
  if (n_paths < 2) {
    throw std::invalid_argument("Monte Carlo needs at least two paths");
  }

  const double s0 = terms.collateral_value.value_or(1.0);
  const double d = terms.call_debt.value_or(terms.ltv * s0);
  const double strike = d * std::exp(terms.call_rate * terms.term);
  const double funding = d * std::exp(terms.risk_free * terms.term);
  const double drift =
      (terms.risk_free - 0.5 * terms.sigma * terms.sigma) * terms.term;
  const double vol = terms.sigma * std::sqrt(terms.term);
  const double discount = std::exp(-terms.risk_free * terms.term);

  constexpr std::size_t kBlock = 65536;
  MomentAcc total;
  std::uint64_t block = 0;
  for (std::size_t start = 0; start < n_paths; start += kBlock, ++block) {
    const std::size_t count = std::min(kBlock, n_paths - start);
    NormalSampler sampler(seed + block);
    MomentAcc acc;
    for (std::size_t i = 0; i < count; ++i) {
      const double s_t = s0 * std::exp(drift + vol * sampler.normal());
      acc.add(discount * (std::min(s_t, strike) - funding));
    }
    total.merge(acc);
  }

  McProfit out;
  out.n_paths = total.n;
  out.mean = total.mean;
  out.std_error = std::sqrt(total.m2 / static_cast<double>(total.n - 1) /
                            static_cast<double>(total.n));
  return out;
}

}  // namespace callrate
