// Command-line front end for the call-rate model library.
//
// Exit codes: 0 success; 1 data or estimation errors; 2 usage errors;
// 3 no solution exists for the requested quantity.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "callrate/arbitrage.hpp"
#include "callrate/autoregress.hpp"
#include "callrate/descriptive.hpp"
#include "callrate/errors.hpp"
#include "callrate/margin_pricing.hpp"
#include "callrate/ou_model.hpp"
#include "callrate/rate_series.hpp"
#include "callrate/version.hpp"

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Formatting and provenance helpers.

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Hash of the full invocation, so outputs carry the configuration that
// produced them without embedding volatile state such as timestamps.
std::string g_config_hash;
std::uint64_t g_seed = 42;  // last seed any subcommand consumed

std::string provenance_line() {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "# callrate %s config=%s seed=%llu",
                callrate::kVersion, g_config_hash.c_str(),
                static_cast<unsigned long long>(g_seed));
  return buf;
}

json provenance_json() {
  return json{{"version", callrate::kVersion},
              {"config", g_config_hash},
              {"seed", g_seed}};
}

void emit(const std::string& content, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw callrate::DataError("cannot write '" + path + "'");
  }
  out << content;
}

std::string kv_text(const std::vector<std::pair<std::string, std::string>>& rows) {
  std::ostringstream os;
  os << provenance_line() << "\n";
  for (const auto& [k, v] : rows) os << k << ": " << v << "\n";
  return os.str();
}

std::string kv_csv(const std::vector<std::pair<std::string, std::string>>& rows) {
  std::ostringstream os;
  os << provenance_line() << "\n" << "key,value\n";
  for (const auto& [k, v] : rows) os << k << "," << v << "\n";
  return os.str();
}

std::string dump_json(const json& payload) {
  json j = payload;
  j["provenance"] = provenance_json();
  return j.dump(2) + "\n";
}

// Renders key/value style results in the requested format.
void emit_kv(const std::vector<std::pair<std::string, std::string>>& rows,
             const json& payload, const std::string& format,
             const std::string& output) {
  if (format == "json") {
    emit(dump_json(payload), output);
  } else if (format == "csv") {
    emit(kv_csv(rows), output);
  } else {
    emit(kv_text(rows), output);
  }
}

// ---------------------------------------------------------------------------
// Shared input plumbing.

callrate::RateSeries load_series(const std::string& path,
                                 const std::string& units) {
  const auto u = units == "continuous" ? callrate::RateUnits::ContinuousPercent
                                       : callrate::RateUnits::NominalPercent;
  return callrate::load_csv(path, u);
}

callrate::RateSeries load_continuous(const std::string& path,
                                     const std::string& units) {
  callrate::RateSeries s = load_series(path, units);
  if (s.units() == callrate::RateUnits::NominalPercent) {
    return callrate::to_continuous(s);
  }
  return s;
}

// ---------------------------------------------------------------------------
// describe

struct DescribeOpts {
  std::string input;
  std::string units = "nominal";
  bool convert = false;
  std::string out_dir = ".";
  std::string format = "csv";
  double bin_width = 0.25;
  double hist_max = 20.0;
  double kde_bandwidth = 0.5;
  double kde_min = 0.0;
  double kde_max = 20.0;
  double kde_step = 0.05;
  std::size_t lags = 36;
};

void run_describe(const DescribeOpts& o) {
  callrate::RateSeries series = load_series(o.input, o.units);
  if (o.convert) series = callrate::to_continuous(series);

  const callrate::SummaryStats stats = callrate::summarize(series);
  const callrate::Histogram hist =
      callrate::histogram(series, o.bin_width, o.hist_max);

  std::vector<double> grid;
  for (double x = o.kde_min; x <= o.kde_max + 1e-12; x += o.kde_step) {
    grid.push_back(x);
  }
  const std::vector<callrate::KdePoint> density =
      callrate::kde(series, o.kde_bandwidth, grid);

  const std::size_t n = series.size();
  const std::size_t acf_lags = std::min(o.lags, n - 1);
  const std::size_t pacf_lags = std::min(o.lags, (n - 1) / 2);
  const callrate::Correlogram ac = callrate::acf(series, acf_lags);
  const callrate::Correlogram pac = callrate::pacf(series, pacf_lags);

  std::filesystem::create_directories(o.out_dir);
  const auto file = [&](const char* stem) {
    return o.out_dir + "/" + stem + (o.format == "json" ? ".json" : ".csv");
  };

  const std::vector<std::pair<std::string, std::string>> summary_rows = {
      {"count", std::to_string(stats.count)},
      {"mean", num(stats.mean)},
      {"std_dev", num(stats.std_dev)},
      {"mean_abs_dev", num(stats.mean_abs_dev)},
      {"min", num(stats.min)},
      {"p5", num(stats.p5)},
      {"median", num(stats.median)},
      {"p95", num(stats.p95)},
      {"max", num(stats.max)},
  };

  if (o.format == "json") {
    emit(dump_json(json{{"count", stats.count},
                        {"mean", stats.mean},
                        {"std_dev", stats.std_dev},
                        {"mean_abs_dev", stats.mean_abs_dev},
                        {"min", stats.min},
                        {"p5", stats.p5},
                        {"median", stats.median},
                        {"p95", stats.p95},
                        {"max", stats.max}}),
         file("summary"));

    json hbins = json::array();
    for (const auto& b : hist.bins) {
      hbins.push_back(json{{"lower_edge", b.lower_edge}, {"count", b.count}});
    }
    emit(dump_json(json{{"bin_width", hist.bin_width},
                        {"overflow", hist.overflow},
                        {"bins", hbins}}),
         file("histogram"));

    json kpts = json::array();
    for (const auto& p : density) {
      kpts.push_back(json{{"x", p.x}, {"density", p.density}});
    }
    emit(dump_json(json{{"bandwidth", o.kde_bandwidth}, {"points", kpts}}),
         file("kde"));

    const auto correlogram_json = [](const callrate::Correlogram& c) {
      json values = json::array();
      for (double v : c.values) values.push_back(v);
      return json{{"values", values}, {"band", c.band_half_width}};
    };
    emit(dump_json(correlogram_json(ac)), file("acf"));
    emit(dump_json(correlogram_json(pac)), file("pacf"));
    return;
  }

  emit(kv_csv(summary_rows), file("summary"));

  {
    std::ostringstream os;
    os << provenance_line() << "\n";
    os << "# bin_width=" << num(hist.bin_width)
       << " overflow_at_or_above_max=" << hist.overflow << "\n";
    os << "lower_edge,count\n";
    for (const auto& b : hist.bins) {
      os << num(b.lower_edge) << "," << b.count << "\n";
    }
    emit(os.str(), file("histogram"));
  }
  {
    std::ostringstream os;
    os << provenance_line() << "\n";
    os << "# bandwidth=" << num(o.kde_bandwidth) << "\n";
    os << "x,density\n";
    for (const auto& p : density) {
      os << num(p.x) << "," << num(p.density) << "\n";
    }
    emit(os.str(), file("kde"));
  }
  const auto write_correlogram = [&](const callrate::Correlogram& c,
                                     const char* stem, const char* col) {
    std::ostringstream os;
    os << provenance_line() << "\n";
    os << "# band_half_width=" << num(c.band_half_width) << "\n";
    os << "lag," << col << "\n";
    for (std::size_t j = 0; j < c.values.size(); ++j) {
      os << j << "," << num(c.values[j]) << "\n";
    }
    emit(os.str(), file(stem));
  };
  write_correlogram(ac, "acf", "acf");
  write_correlogram(pac, "pacf", "pacf");
}

// ---------------------------------------------------------------------------
// fit

struct FitOpts {
  std::string input;
  std::string model = "ar1";
  std::string units = "nominal";
  std::string format = "text";
  std::string output;
};

void run_fit(const FitOpts& o) {
  const callrate::RateSeries series = load_continuous(o.input, o.units);
  std::vector<std::pair<std::string, std::string>> rows;
  json j;

  const auto push = [&](const std::string& k, double v) {
    rows.emplace_back(k, num(v));
    j[k] = v;
  };

  rows.emplace_back("model", o.model);
  j["model"] = o.model;

  if (o.model == "ar1") {
    const callrate::Ar1Fit f = callrate::fit_ar1(series);
    rows.emplace_back("n_obs", std::to_string(f.n_obs));
    j["n_obs"] = f.n_obs;
    push("alpha", f.alpha);
    push("se_alpha", f.se_alpha);
    push("alpha_ci_low", f.alpha - 1.96 * f.se_alpha);
    push("alpha_ci_high", f.alpha + 1.96 * f.se_alpha);
    push("rho", f.rho);
    push("se_rho", f.se_rho);
    push("rho_ci_low", f.rho - 1.96 * f.se_rho);
    push("rho_ci_high", f.rho + 1.96 * f.se_rho);
    push("sigma", f.sigma);
    push("r_squared", f.r_squared);
    push("theta", f.theta());
    push("mu", f.mu());
    push("lag_root", f.lag_root());
    push("long_run_std", f.long_run_std());
    push("resid_abs_mean", f.residuals.mean_abs);
    push("resid_abs_p5", f.residuals.p5_abs);
    push("resid_abs_median", f.residuals.median_abs);
    push("resid_abs_p95", f.residuals.p95_abs);
  } else {
    const callrate::Ar2Fit f = callrate::fit_ar2(series);
    rows.emplace_back("n_obs", std::to_string(f.n_obs));
    j["n_obs"] = f.n_obs;
    push("c", f.c);
    push("se_c", f.se_c);
    push("c_ci_low", f.c - 1.96 * f.se_c);
    push("c_ci_high", f.c + 1.96 * f.se_c);
    push("phi1", f.phi1);
    push("se_phi1", f.se_phi1);
    push("phi1_ci_low", f.phi1 - 1.96 * f.se_phi1);
    push("phi1_ci_high", f.phi1 + 1.96 * f.se_phi1);
    push("phi2", f.phi2);
    push("se_phi2", f.se_phi2);
    push("phi2_ci_low", f.phi2 - 1.96 * f.se_phi2);
    push("phi2_ci_high", f.phi2 + 1.96 * f.se_phi2);
    push("sigma", f.sigma);
    push("r_squared", f.r_squared);
    push("mu", f.mu());
    push("long_run_std", f.long_run_std());
    const auto [l1, l2] = f.char_roots();
    push("char_root_1_re", l1.real());
    push("char_root_1_im", l1.imag());
    push("char_root_2_re", l2.real());
    push("char_root_2_im", l2.imag());
    const auto [z1, z2] = f.lag_roots();
    push("lag_root_1_re", z1.real());
    push("lag_root_1_im", z1.imag());
    push("lag_root_2_re", z2.real());
    push("lag_root_2_im", z2.imag());
    push("resid_abs_mean", f.residuals.mean_abs);
    push("resid_abs_p5", f.residuals.p5_abs);
    push("resid_abs_median", f.residuals.median_abs);
    push("resid_abs_p95", f.residuals.p95_abs);
  }

  emit_kv(rows, j, o.format, o.output);
}

// ---------------------------------------------------------------------------
// forecast

struct ForecastOpts {
  std::string model = "ar1";
  std::string input;
  std::string units = "nominal";
  std::optional<double> mu, rho, sigma;           // ar1 parameters
  std::optional<double> c, phi1, phi2;            // ar2 parameters
  std::optional<double> y0, y1;
  int horizon = 12;
  std::string format = "csv";
  std::string output;
};

void run_forecast(const ForecastOpts& o) {
  std::vector<callrate::Forecast> fc;

  if (o.model == "ar1") {
    callrate::Ar1Fit fit;
    double y_last = 0.0;
    if (!o.input.empty()) {
      const callrate::RateSeries series = load_continuous(o.input, o.units);
      fit = callrate::fit_ar1(series);
      y_last = series[series.size() - 1].value;
    } else if (o.mu && o.rho && o.sigma) {
      fit = callrate::Ar1Fit::from_long_run(*o.mu, *o.rho, *o.sigma);
    } else {
      throw CLI::ValidationError(
          "forecast", "give --input, or all of --mu, --rho, --sigma");
    }
    if (o.y0) y_last = *o.y0;
    fc = callrate::forecast_ar1(fit, y_last, o.horizon);
  } else {
    callrate::Ar2Fit fit;
    double y_prev = 0.0;
    double y_last = 0.0;
    if (!o.input.empty()) {
      const callrate::RateSeries series = load_continuous(o.input, o.units);
      fit = callrate::fit_ar2(series);
      y_prev = series[series.size() - 2].value;
      y_last = series[series.size() - 1].value;
    } else if (o.c && o.phi1 && o.phi2 && o.sigma) {
      fit = callrate::Ar2Fit::from_params(*o.c, *o.phi1, *o.phi2, *o.sigma);
    } else {
      throw CLI::ValidationError(
          "forecast",
          "give --input, or all of --c, --phi1, --phi2, --sigma");
    }
    if (o.y0) y_prev = *o.y0;
    if (o.y1) y_last = *o.y1;
    if (o.input.empty() && (!o.y0 || !o.y1)) {
      throw CLI::ValidationError(
          "forecast", "AR(2) needs --y0 (older) and --y1 (most recent)");
    }
    fc = callrate::forecast_ar2(fit, y_prev, y_last, o.horizon);
  }

  if (o.format == "json") {
    json rows = json::array();
    for (const auto& f : fc) {
      rows.push_back(json{{"t", f.horizon}, {"point", f.point}, {"rmse", f.rmse}});
    }
    emit(dump_json(json{{"model", o.model}, {"forecast", rows}}), o.output);
    return;
  }
  std::ostringstream os;
  os << provenance_line() << "\n" << "t,point,rmse\n";
  for (const auto& f : fc) {
    os << f.horizon << "," << num(f.point) << "," << num(f.rmse) << "\n";
  }
  emit(os.str(), o.output);
}

// ---------------------------------------------------------------------------
// simulate call | simulate leverage

struct SimulateCallOpts {
  double mean = 0.0;
  double theta = 0.0;
  double sigma = 0.0;
  std::optional<double> y0;
  double step = 1.0;
  std::size_t steps = 120;
  std::size_t paths = 1;
  std::uint64_t seed = 42;
  std::string scheme = "exact";
  std::string format = "csv";
  std::string output;
};

std::string render_paths(const std::vector<callrate::SimPath>& paths,
                         const std::string& format,
                         const std::string& extra_comment) {
  if (format == "json") {
    json jp = json::array();
    for (const auto& p : paths) {
      json values = json::array();
      for (double v : p.values) values.push_back(v);
      jp.push_back(json{{"seed", p.seed}, {"values", values}});
    }
    json times = json::array();
    for (double t : paths.front().times) times.push_back(t);
    return dump_json(json{{"times", times}, {"paths", jp}});
  }
  std::ostringstream os;
  os << provenance_line() << "\n";
  if (!extra_comment.empty()) os << "# " << extra_comment << "\n";
  os << "t";
  for (std::size_t i = 0; i < paths.size(); ++i) os << ",path_" << i + 1;
  os << "\n";
  for (std::size_t k = 0; k < paths.front().times.size(); ++k) {
    os << num(paths.front().times[k]);
    for (const auto& p : paths) os << "," << num(p.values[k]);
    os << "\n";
  }
  return os.str();
}

void run_simulate_call(const SimulateCallOpts& o) {
  g_seed = o.seed;
  const callrate::OuParams params{o.mean, o.theta, o.sigma};
  params.validate();
  const double y0 = o.y0.value_or(o.mean);
  const auto scheme = o.scheme == "euler" ? callrate::SimScheme::EulerMaruyama
                                          : callrate::SimScheme::ExactTransition;

  std::vector<callrate::SimPath> paths;
  paths.reserve(o.paths);
  for (std::size_t i = 0; i < o.paths; ++i) {
    paths.push_back(
        callrate::simulate_ou(params, y0, o.step, o.steps, o.seed + i, scheme));
  }
  emit(render_paths(paths, o.format, ""), o.output);
}

struct SimulateLeverageOpts {
  double ou_mean = 0.0;   // percent scale, as calibrated
  double ou_theta = 0.0;
  double ou_sigma = 0.0;
  double nu_s = 0.09;
  double sigma_s = 0.15;
  std::optional<double> b0;
  double step = 1.0;
  std::size_t steps = 120;
  std::size_t paths = 1;
  std::uint64_t seed = 42;
  std::string format = "csv";
  std::string output;
};

void run_simulate_leverage(const SimulateLeverageOpts& o) {
  g_seed = o.seed;
  const callrate::OuParams ou{o.ou_mean, o.ou_theta, o.ou_sigma};
  const callrate::MarketIndexParams market{o.nu_s, o.sigma_s};
  const callrate::LeverageSde sde = callrate::derive_leverage_sde(ou, market);
  const double b0 = o.b0.value_or(sde.long_run_mean);

  std::vector<callrate::SimPath> paths;
  paths.reserve(o.paths);
  for (std::size_t i = 0; i < o.paths; ++i) {
    paths.push_back(
        callrate::simulate_leverage(sde, b0, o.step, o.steps, o.seed + i));
  }
  char sde_line[160];
  std::snprintf(sde_line, sizeof(sde_line),
                "sde theta=%s mean=%s diffusion=%s noise_sign=%d",
                num(sde.theta).c_str(), num(sde.long_run_mean).c_str(),
                num(sde.diffusion).c_str(), sde.noise_sign);
  emit(render_paths(paths, o.format, sde_line), o.output);
}

// ---------------------------------------------------------------------------
// price margin | price bank-payoff

struct PriceMarginOpts {
  double call = 0.0;
  double nu_s = 0.09;
  double sigma_s = 0.15;
  std::string rule = "monopoly";
  std::string format = "text";
  std::string output;
};

void run_price_margin(const PriceMarginOpts& o) {
  const callrate::MarketIndexParams market{o.nu_s, o.sigma_s};
  const double margin = o.rule == "nash"
                            ? callrate::nash_margin_rate(o.call, market)
                            : callrate::monopoly_margin_rate(o.call, market);
  const callrate::KellyBet bet = callrate::kelly_bet(margin, market);

  emit_kv({{"rule", o.rule},
           {"call_rate", num(o.call)},
           {"margin_rate", num(margin)},
           {"kelly_b", num(bet.b)},
           {"kelly_q", num(bet.q)}},
          json{{"rule", o.rule},
               {"call_rate", o.call},
               {"margin_rate", margin},
               {"kelly_b", bet.b},
               {"kelly_q", bet.q}},
          o.format, o.output);
}

struct PricePayoffOpts {
  double terminal = 0.0;
  double collateral = 1.0;
  double call_debt = 0.0;
  double margin_debt = 0.0;
  double risk_free = 0.0;
  double call_rate = 0.0;
  double margin_rate = 0.0;
  double term = 0.0;
  double sigma = 0.4;
  std::string format = "text";
  std::string output;
};

const char* event_name(callrate::CreditEvent e) {
  switch (e) {
    case callrate::CreditEvent::NoDefault:
      return "no_default";
    case callrate::CreditEvent::ClientDefaultsOnly:
      return "client_defaults_only";
    case callrate::CreditEvent::CascadedDefault:
      return "cascaded_default";
  }
  return "unknown";
}

void run_price_payoff(const PricePayoffOpts& o) {
  callrate::CallLoanTerms terms = callrate::CallLoanTerms::with_call_rate(
      o.risk_free, o.call_rate, o.call_debt / o.collateral, o.term, o.sigma);
  terms.collateral_value = o.collateral;
  terms.call_debt = o.call_debt;
  terms.margin_debt = o.margin_debt;
  terms.margin_rate = o.margin_rate;

  const callrate::PayoffResult res = callrate::bank_payoff(terms, o.terminal);
  emit_kv({{"terminal_price", num(o.terminal)},
           {"payoff", num(res.payoff)},
           {"credit_event", event_name(res.event)}},
          json{{"terminal_price", o.terminal},
               {"payoff", res.payoff},
               {"credit_event", event_name(res.event)}},
          o.format, o.output);
}

// ---------------------------------------------------------------------------
// implied ltv | implied term

struct ImpliedOpts {
  std::optional<double> premium;
  std::optional<double> risk_free;
  std::optional<double> call_rate;
  std::string units = "continuous";
  double term = 0.0;   // for ltv
  double ltv = 0.0;    // for term
  double sigma = 0.0;
  std::string format = "text";
  std::string output;
};

double resolve_premium(const ImpliedOpts& o) {
  if (o.premium) {
    if (o.units == "nominal") {
      throw CLI::ValidationError(
          "implied",
          "--premium must be continuously compounded; with --units nominal "
          "give --risk-free and --call-rate levels instead");
    }
    return *o.premium;
  }
  if (!o.risk_free || !o.call_rate) {
    throw CLI::ValidationError(
        "implied", "give --premium, or both --risk-free and --call-rate");
  }
  double r = *o.risk_free;
  double c = *o.call_rate;
  if (o.units == "nominal") {
    // Convert unit-interval simple rates to continuous compounding.
    r = std::log1p(r);
    c = std::log1p(c);
  }
  return c - r;
}

void run_implied_ltv(const ImpliedOpts& o) {
  const double premium = resolve_premium(o);
  const callrate::ImpliedLtv res =
      callrate::implied_ltv(premium, o.term, o.sigma);
  if (res.roots.size() > 1) {
    std::cerr << "warning: " << res.roots.size()
              << " admissible loan-to-value roots; reporting the smallest\n";
  }
  std::vector<std::pair<std::string, std::string>> rows = {
      {"premium", num(premium)},
      {"term", num(o.term)},
      {"sigma", num(o.sigma)},
      {"ltv", num(res.ltv)},
      {"delta", num(res.delta)},
      {"residual", num(res.residual)},
      {"reg_t_violation", res.reg_t_violation ? "true" : "false"},
      {"n_roots", std::to_string(res.roots.size())},
  };
  json j{{"premium", premium},   {"term", o.term},
         {"sigma", o.sigma},     {"ltv", res.ltv},
         {"delta", res.delta},   {"residual", res.residual},
         {"reg_t_violation", res.reg_t_violation},
         {"roots", res.roots}};
  emit_kv(rows, j, o.format, o.output);
}

void run_implied_term(const ImpliedOpts& o) {
  const double premium = resolve_premium(o);
  const callrate::ImpliedTerm res =
      callrate::implied_term(premium, o.ltv, o.sigma);
  if (res.roots.size() > 1) {
    std::cerr << "warning: " << res.roots.size()
              << " admissible term roots; reporting the smallest\n";
  }
  std::vector<std::pair<std::string, std::string>> rows = {
      {"premium", num(premium)},
      {"ltv", num(o.ltv)},
      {"sigma", num(o.sigma)},
      {"term", num(res.term)},
      {"delta", num(res.delta)},
      {"residual", num(res.residual)},
      {"n_roots", std::to_string(res.roots.size())},
  };
  json j{{"premium", premium}, {"ltv", o.ltv},      {"sigma", o.sigma},
         {"term", res.term},   {"delta", res.delta}, {"residual", res.residual},
         {"roots", res.roots}};
  emit_kv(rows, j, o.format, o.output);
}

}  // namespace

int main(int argc, char** argv) {
  // Canonical invocation string for the provenance header.
  std::string invocation;
  for (int i = 1; i < argc; ++i) {
    invocation += argv[i];
    invocation += '\x1f';
  }
  {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(invocation)));
    g_config_hash = buf;
  }

  CLI::App app{
      "Mean-reverting models of the broker call-money rate: estimation, "
      "forecasting, simulation, and no-arbitrage call-loan pricing"};
  app.set_version_flag("--version", callrate::kVersion);
  app.require_subcommand(1);

  const auto format_check =
      CLI::IsMember({"text", "csv", "json"}, CLI::ignore_case);
  const auto units_check = CLI::IsMember({"nominal", "continuous"});

  // describe ----------------------------------------------------------------
  DescribeOpts d;
  CLI::App* describe =
      app.add_subcommand("describe", "Distribution and correlation summaries");
  describe->add_option("input", d.input, "monthly CSV (YYYY-MM,rate)")
      ->required();
  describe->add_option("--units", d.units, "input rate units")
      ->check(units_check)
      ->capture_default_str();
  describe->add_flag("--convert", d.convert,
                     "convert to continuous compounding before describing");
  describe->add_option("--out-dir", d.out_dir, "output directory")
      ->capture_default_str();
  describe->add_option("--format", d.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  describe->add_option("--bin-width", d.bin_width, "histogram bin width")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  describe->add_option("--hist-max", d.hist_max, "histogram overflow cutoff")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  describe
      ->add_option("--kde-bandwidth", d.kde_bandwidth,
                   "Gaussian kernel bandwidth")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  describe->add_option("--kde-min", d.kde_min, "density grid start")
      ->capture_default_str();
  describe->add_option("--kde-max", d.kde_max, "density grid end")
      ->capture_default_str();
  describe->add_option("--kde-step", d.kde_step, "density grid spacing")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  describe->add_option("--lags", d.lags, "ACF/PACF lags (clamped to length)")
      ->capture_default_str();
  describe->callback([&] { run_describe(d); });

  // fit ---------------------------------------------------------------------
  FitOpts f;
  CLI::App* fit = app.add_subcommand("fit", "Estimate an autoregression");
  fit->add_option("input", f.input, "monthly CSV (YYYY-MM,rate)")->required();
  fit->add_option("--model", f.model, "ar1 or ar2")
      ->check(CLI::IsMember({"ar1", "ar2"}))
      ->capture_default_str();
  fit->add_option("--units", f.units, "input rate units")
      ->check(units_check)
      ->capture_default_str();
  fit->add_option("--format", f.format, "text, csv, or json")
      ->check(format_check)
      ->capture_default_str();
  fit->add_option("--output,-o", f.output, "output file (default stdout)");
  fit->callback([&] { run_fit(f); });

  // forecast ------------------------------------------------------------------
  ForecastOpts fo;
  CLI::App* forecast = app.add_subcommand(
      "forecast", "Closed-form conditional forecasts with error bands");
  forecast->add_option("--model", fo.model, "ar1 or ar2")
      ->check(CLI::IsMember({"ar1", "ar2"}))
      ->capture_default_str();
  forecast->add_option("--input", fo.input,
                       "fit this CSV and forecast from its last observations");
  forecast->add_option("--units", fo.units, "input rate units")
      ->check(units_check)
      ->capture_default_str();
  forecast->add_option("--mu", fo.mu, "AR(1) long-run mean");
  forecast->add_option("--rho", fo.rho, "AR(1) persistence");
  forecast->add_option("--sigma", fo.sigma, "residual scale");
  forecast->add_option("--c", fo.c, "AR(2) intercept");
  forecast->add_option("--phi1", fo.phi1, "AR(2) first lag weight");
  forecast->add_option("--phi2", fo.phi2, "AR(2) second lag weight");
  forecast->add_option("--y0", fo.y0,
                       "conditioning observation (AR(2): older of the two)");
  forecast->add_option("--y1", fo.y1, "most recent observation (AR(2))");
  forecast->add_option("--horizon", fo.horizon, "months ahead")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  forecast->add_option("--format", fo.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  forecast->add_option("--output,-o", fo.output, "output file");
  forecast->callback([&] { run_forecast(fo); });

  // simulate ------------------------------------------------------------------
  CLI::App* simulate =
      app.add_subcommand("simulate", "Sample paths of the fitted dynamics");
  simulate->require_subcommand(1);

  SimulateCallOpts sc;
  CLI::App* sim_call = simulate->add_subcommand(
      "call", "Ornstein-Uhlenbeck call-rate paths (percent scale)");
  sim_call->add_option("--mean", sc.mean, "long-run mean (percent)")
      ->required();
  sim_call->add_option("--theta", sc.theta, "mean-reversion speed per month")
      ->required();
  sim_call->add_option("--sigma", sc.sigma, "diffusion (percent)")
      ->required();
  sim_call->add_option("--y0", sc.y0, "initial rate (default: the mean)");
  sim_call->add_option("--step", sc.step, "grid step in months")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim_call->add_option("--steps", sc.steps, "number of steps")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim_call->add_option("--paths", sc.paths, "number of paths")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim_call->add_option("--seed", sc.seed, "base seed; path i uses seed + i")
      ->capture_default_str();
  sim_call->add_option("--scheme", sc.scheme, "exact or euler")
      ->check(CLI::IsMember({"exact", "euler"}))
      ->capture_default_str();
  sim_call->add_option("--format", sc.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sim_call->add_option("--output,-o", sc.output, "output file");
  sim_call->callback([&] { run_simulate_call(sc); });

  SimulateLeverageOpts sl;
  CLI::App* sim_lev = simulate->add_subcommand(
      "leverage", "Kelly-leverage paths implied by an OU call rate");
  sim_lev->add_option("--ou-mean", sl.ou_mean, "call-rate long-run mean (percent)")
      ->required();
  sim_lev->add_option("--ou-theta", sl.ou_theta, "mean-reversion speed")
      ->required();
  sim_lev->add_option("--ou-sigma", sl.ou_sigma, "call-rate diffusion (percent)")
      ->required();
  sim_lev->add_option("--nu-s", sl.nu_s, "index growth rate (unit interval)")
      ->capture_default_str();
  sim_lev->add_option("--sigma-s", sl.sigma_s, "index volatility")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim_lev->add_option("--b0", sl.b0, "initial leverage (default: long-run mean)");
  sim_lev->add_option("--step", sl.step, "grid step in months")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim_lev->add_option("--steps", sl.steps, "number of steps")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim_lev->add_option("--paths", sl.paths, "number of paths")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim_lev->add_option("--seed", sl.seed, "base seed; path i uses seed + i")
      ->capture_default_str();
  sim_lev->add_option("--format", sl.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sim_lev->add_option("--output,-o", sl.output, "output file");
  sim_lev->callback([&] { run_simulate_leverage(sl); });

  // price -----------------------------------------------------------------
  CLI::App* price =
      app.add_subcommand("price", "Margin pricing and loan payoffs");
  price->require_subcommand(1);

  PriceMarginOpts pm;
  CLI::App* price_margin = price->add_subcommand(
      "margin", "Margin rate and Kelly bet at a given call rate");
  price_margin
      ->add_option("--call", pm.call, "call rate (unit interval, e.g. 0.039)")
      ->required();
  price_margin->add_option("--nu-s", pm.nu_s, "index growth rate")
      ->capture_default_str();
  price_margin->add_option("--sigma-s", pm.sigma_s, "index volatility")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  price_margin->add_option("--rule", pm.rule, "monopoly or nash")
      ->check(CLI::IsMember({"monopoly", "nash"}))
      ->capture_default_str();
  price_margin->add_option("--format", pm.format, "text, csv, or json")
      ->check(format_check)
      ->capture_default_str();
  price_margin->add_option("--output,-o", pm.output, "output file");
  price_margin->callback([&] { run_price_margin(pm); });

  PricePayoffOpts pp;
  CLI::App* price_payoff = price->add_subcommand(
      "bank-payoff", "Bank profit on a call loan at a terminal price");
  price_payoff->add_option("--terminal", pp.terminal, "collateral price at T")
      ->required();
  price_payoff->add_option("--collateral", pp.collateral, "S0")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  price_payoff->add_option("--call-debt", pp.call_debt, "d, bank loan to broker")
      ->required()
      ->check(CLI::PositiveNumber);
  price_payoff
      ->add_option("--margin-debt", pp.margin_debt, "D, broker loan to client")
      ->required()
      ->check(CLI::PositiveNumber);
  price_payoff->add_option("--risk-free", pp.risk_free, "r, continuous")
      ->required();
  price_payoff->add_option("--call-rate", pp.call_rate, "loan rate, continuous")
      ->required();
  price_payoff
      ->add_option("--margin-rate", pp.margin_rate, "client rate, continuous")
      ->required();
  price_payoff->add_option("--term", pp.term, "T in years")
      ->required()
      ->check(CLI::PositiveNumber);
  price_payoff->add_option("--sigma", pp.sigma, "collateral volatility")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  price_payoff->add_option("--format", pp.format, "text, csv, or json")
      ->check(format_check)
      ->capture_default_str();
  price_payoff->add_option("--output,-o", pp.output, "output file");
  price_payoff->callback([&] { run_price_payoff(pp); });

  // implied ---------------------------------------------------------------
  CLI::App* implied = app.add_subcommand(
      "implied", "Loan terms implied by the zero-profit condition");
  implied->require_subcommand(1);

  ImpliedOpts il;
  CLI::App* implied_ltv_cmd = implied->add_subcommand(
      "ltv", "Fair loan-to-value for a given premium, term, and volatility");
  implied_ltv_cmd->add_option("--premium", il.premium,
                              "call rate minus risk-free (continuous)");
  implied_ltv_cmd->add_option("--risk-free", il.risk_free, "risk-free level");
  implied_ltv_cmd->add_option("--call-rate", il.call_rate, "call-rate level");
  implied_ltv_cmd->add_option("--units", il.units,
                              "how the rate levels are quoted")
      ->check(units_check)
      ->capture_default_str();
  implied_ltv_cmd->add_option("--term", il.term, "T in years")
      ->required()
      ->check(CLI::PositiveNumber);
  implied_ltv_cmd->add_option("--sigma", il.sigma, "collateral volatility")
      ->required()
      ->check(CLI::PositiveNumber);
  implied_ltv_cmd->add_option("--format", il.format, "text, csv, or json")
      ->check(format_check)
      ->capture_default_str();
  implied_ltv_cmd->add_option("--output,-o", il.output, "output file");
  implied_ltv_cmd->callback([&] { run_implied_ltv(il); });

  ImpliedOpts it;
  CLI::App* implied_term_cmd = implied->add_subcommand(
      "term", "Fair term for a given premium, loan-to-value, and volatility");
  implied_term_cmd->add_option("--premium", it.premium,
                               "call rate minus risk-free (continuous)");
  implied_term_cmd->add_option("--risk-free", it.risk_free, "risk-free level");
  implied_term_cmd->add_option("--call-rate", it.call_rate, "call-rate level");
  implied_term_cmd->add_option("--units", it.units,
                               "how the rate levels are quoted")
      ->check(units_check)
      ->capture_default_str();
  implied_term_cmd->add_option("--ltv", it.ltv, "loan-to-value in (0, 1)")
      ->required()
      ->check(CLI::Range(1e-12, 1.0));
  implied_term_cmd->add_option("--sigma", it.sigma, "collateral volatility")
      ->required()
      ->check(CLI::PositiveNumber);
  implied_term_cmd->add_option("--format", it.format, "text, csv, or json")
      ->check(format_check)
      ->capture_default_str();
  implied_term_cmd->add_option("--output,-o", it.output, "output file");
  implied_term_cmd->callback([&] { run_implied_term(it); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const callrate::NoSolutionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
