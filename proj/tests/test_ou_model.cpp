#include "callrate/ou_model.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "callrate/errors.hpp"
#include "test_util.hpp"

using namespace callrate;
using testutil::make_series;

namespace {

// Two-sample Kolmogorov-Smirnov statistic.
double ks_stat(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) {
      ++i;
    } else {
      ++j;
    }
    const double fa = static_cast<double>(i) / static_cast<double>(a.size());
    const double fb = static_cast<double>(j) / static_cast<double>(b.size());
    d = std::max(d, std::fabs(fa - fb));
  }
  return d;
}

}  // namespace

TEST_CASE("calibration maps the reference AR(1) fit to the reference OU") {
  const Ar1Fit f = Ar1Fit::from_long_run(3.943, 0.597, 2.362);
  const OuParams p = calibrate_from_ar1(f);
  // mu round-trips through alpha = (1 - rho) * mu, so allow rounding noise.
  CHECK(std::fabs(p.mu_bar - 3.943) < 1e-12);
  CHECK(std::fabs(p.theta_bar - 0.5158381656) < 1e-9);
  CHECK(std::fabs(p.sigma_bar - 2.9905195484) < 1e-9);
  // The stationary standard deviation survives the reparameterization.
  CHECK(std::fabs(p.stationary_std() - f.long_run_std()) < 1e-12);
}

TEST_CASE("calibration closed form at rho = 1/e") {
  // With rho = e^-1, theta is exactly 1; choosing sigma so the stationary
  // std is 1 gives sigma_bar = sqrt(2).
  const double rho = std::exp(-1.0);
  const double sigma = std::sqrt(1.0 - rho * rho);
  const OuParams p = calibrate_from_ar1(Ar1Fit::from_long_run(0.0, rho, sigma));
  CHECK(std::fabs(p.theta_bar - 1.0) < 1e-14);
  CHECK(std::fabs(p.sigma_bar - std::sqrt(2.0)) < 1e-14);
}

TEST_CASE("calibration limits and domain") {
  // rho -> 1: the diffusion ratio sigma_bar/sigma -> 1 (slow reversion).
  const OuParams slow =
      calibrate_from_ar1(Ar1Fit::from_long_run(0.0, 0.9999, 1.0));
  CHECK(std::fabs(slow.sigma_bar - 1.0) < 1e-3);
  CHECK(slow.theta_bar == doctest::Approx(1e-4).epsilon(1e-3));

  Ar1Fit neg = Ar1Fit::from_long_run(1.0, 0.5, 1.0);
  neg.rho = -0.5;  // oscillatory AR(1) has no OU counterpart
  CHECK_THROWS_AS(calibrate_from_ar1(neg), EstimationError);
  neg.rho = 0.0;
  CHECK_THROWS_AS(calibrate_from_ar1(neg), EstimationError);
}

TEST_CASE("ou_forecast interpolates the AR(1) forecasts at integer months") {
  const Ar1Fit f = Ar1Fit::from_long_run(3.943, 0.597, 2.362);
  const OuParams p = calibrate_from_ar1(f);

  const OuForecast at0 = ou_forecast(p, 4.25, 0.0);
  CHECK(at0.point == 4.25);
  CHECK(at0.rmse == 0.0);

  const auto ar = forecast_ar1(f, 4.25, 50);
  for (int t = 1; t <= 50; ++t) {
    const OuForecast ou = ou_forecast(p, 4.25, static_cast<double>(t));
    CHECK(std::fabs(ou.point - ar[static_cast<std::size_t>(t - 1)].point) <
          1e-9);
    CHECK(std::fabs(ou.rmse - ar[static_cast<std::size_t>(t - 1)].rmse) <
          1e-9);
  }

  // Long horizon: the forecast collapses to the stationary distribution.
  const OuForecast far = ou_forecast(p, 40.0, 1e4);
  CHECK(std::fabs(far.point - p.mu_bar) < 1e-9);
  CHECK(std::fabs(far.rmse - p.stationary_std()) < 1e-12);

  CHECK_THROWS_AS(ou_forecast(p, 4.25, -1.0), std::invalid_argument);
}

TEST_CASE("simulate_ou with zero diffusion is pure exponential decay") {
  const OuParams p{3.943, 0.5158381656, 0.0};
  const SimPath path = simulate_ou(p, 10.0, 0.5, 40, 1);
  for (std::size_t k = 0; k < path.values.size(); ++k) {
    const double expected =
        3.943 + std::exp(-p.theta_bar * path.times[k]) * (10.0 - 3.943);
    CHECK(std::fabs(path.values[k] - expected) < 1e-12);
  }
}

TEST_CASE("simulate_ou is deterministic in the seed") {
  const OuParams p{3.943, 0.5158381656, 2.9905195484};
  const SimPath a = simulate_ou(p, 6.0, 1.0, 100, 42);
  const SimPath b = simulate_ou(p, 6.0, 1.0, 100, 42);
  const SimPath c = simulate_ou(p, 6.0, 1.0, 100, 43);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
  CHECK(a.times.size() == 101);
  CHECK(a.values[0] == 6.0);
}

TEST_CASE("simulate_ou one-month Monte Carlo mean matches the forecast") {
  const OuParams p{3.943, 0.5158381656, 2.9905195484};
  const OuForecast fc = ou_forecast(p, 4.25, 1.0);

  const std::size_t n = 10000;
  double sum = 0.0, ss = 0.0;
  for (std::uint64_t seed = 1; seed <= n; ++seed) {
    const double y1 = simulate_ou(p, 4.25, 1.0, 1, seed).values[1];
    sum += y1;
    ss += y1 * y1;
  }
  const double mean = sum / static_cast<double>(n);
  const double sd = std::sqrt((ss - sum * sum / static_cast<double>(n)) /
                              static_cast<double>(n - 1));
  const double se = sd / std::sqrt(static_cast<double>(n));

  CHECK(std::fabs(mean - fc.point) < 3.0 * se);
  CHECK(std::fabs(mean - 4.1262790000) < 0.05);
  // The sampled one-step std matches the forecast rmse (= AR sigma).
  CHECK(std::fabs(sd - fc.rmse) < 3.0 * fc.rmse / std::sqrt(2.0 * n));
}

TEST_CASE("simulate_ou long-run histogram matches the stationary law") {
  const OuParams p{3.943, 0.5158381656, 2.9905195484};
  const SimPath path = simulate_ou(p, 3.943, 1.0, 100000, 9);
  double sum = 0.0, ss = 0.0;
  for (double v : path.values) {
    sum += v;
    ss += v * v;
  }
  const double n = static_cast<double>(path.values.size());
  const double mean = sum / n;
  const double sd = std::sqrt((ss - sum * sum / n) / (n - 1.0));
  CHECK(std::fabs(mean - 3.943) < 0.05);
  CHECK(std::fabs(sd - 2.9442515485) < 0.05);
}

TEST_CASE("exact transition has no step-size bias (KS across halved steps)") {
  const OuParams p{3.943, 0.5158381656, 2.9905195484};
  // Marginal of y(1 month) sampled with one step versus two half steps.
  const std::size_t n = 2000;
  std::vector<double> one, two;
  one.reserve(n);
  two.reserve(n);
  for (std::uint64_t s = 1; s <= n; ++s) {
    one.push_back(simulate_ou(p, 4.25, 1.0, 1, s).values.back());
    two.push_back(simulate_ou(p, 4.25, 0.5, 2, 100000 + s).values.back());
  }
  const double d = ks_stat(one, two);
  // 5% critical value for n = m = 2000.
  const double crit = 1.358 * std::sqrt(2.0 / static_cast<double>(n));
  CHECK(d < crit);
}

TEST_CASE("euler scheme differs at coarse steps and matches in the limit") {
  const OuParams p{3.943, 0.5158381656, 0.0};
  // Deterministic check: one Euler step is the tangent approximation.
  const SimPath e = simulate_ou(p, 10.0, 1.0, 1, 3, SimScheme::EulerMaruyama);
  const double tangent = 10.0 - p.theta_bar * (10.0 - 3.943) * 1.0;
  CHECK(std::fabs(e.values[1] - tangent) < 1e-12);
  const SimPath x = simulate_ou(p, 10.0, 1.0, 1, 3);
  CHECK(e.values[1] != x.values[1]);

  // With 64 substeps the Euler endpoint is within O(step) of exact decay.
  const SimPath fine =
      simulate_ou(p, 10.0, 1.0 / 64, 64, 3, SimScheme::EulerMaruyama);
  const double exact = 3.943 + std::exp(-p.theta_bar) * (10.0 - 3.943);
  CHECK(std::fabs(fine.values.back() - exact) < 0.01);
}

TEST_CASE("fit -> calibrate -> simulate round trip recovers the dynamics") {
  const OuParams truth{3.943, 0.5158381656, 2.9905195484};
  const SimPath path = simulate_ou(truth, 3.943, 1.0, 200000, 77);
  const Ar1Fit f = fit_ar1(make_series(path.values));
  const OuParams back = calibrate_from_ar1(f);
  CHECK(std::fabs(back.mu_bar - truth.mu_bar) < 0.05);
  CHECK(std::fabs(back.theta_bar - truth.theta_bar) < 0.01);
  CHECK(std::fabs(back.sigma_bar - truth.sigma_bar) < 0.05);
}

TEST_CASE("simulation argument validation") {
  const OuParams p{3.943, 0.5158381656, 2.9905195484};
  CHECK_THROWS_AS(simulate_ou(p, 4.0, 0.0, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(simulate_ou(p, 4.0, 1.0, 0, 1), std::invalid_argument);
  const OuParams bad{3.9, -0.1, 1.0};
  CHECK_THROWS_AS(simulate_ou(bad, 4.0, 1.0, 10, 1), EstimationError);
  const OuParams bad2{3.9, 0.5, -1.0};
  CHECK_THROWS_AS(simulate_ou(bad2, 4.0, 1.0, 10, 1), EstimationError);
}
