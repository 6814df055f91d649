#include "callrate/autoregress.hpp"

#include <cmath>
#include <vector>

#include <doctest.h>

#include "callrate/errors.hpp"
#include "callrate/random.hpp"
#include "test_util.hpp"

using namespace callrate;
using testutil::make_series;

namespace {

// Simulates an AR(1)/AR(2) with a stationary start, for recovery tests.
std::vector<double> sim_ar1(double alpha, double rho, double sigma,
                            std::size_t n, std::uint64_t seed) {
  NormalSampler s(seed);
  const double mu = alpha / (1.0 - rho);
  std::vector<double> y(n);
  y[0] = mu + sigma / std::sqrt(1.0 - rho * rho) * s.normal();
  for (std::size_t t = 1; t < n; ++t) {
    y[t] = alpha + rho * y[t - 1] + sigma * s.normal();
  }
  return y;
}

std::vector<double> sim_ar2(double c, double phi1, double phi2, double sigma,
                            std::size_t n, std::uint64_t seed) {
  NormalSampler s(seed);
  const double mu = c / (1.0 - phi1 - phi2);
  std::vector<double> y(n);
  y[0] = mu;
  y[1] = mu;
  for (std::size_t t = 2; t < n; ++t) {
    y[t] = c + phi1 * y[t - 1] + phi2 * y[t - 2] + sigma * s.normal();
  }
  return y;
}

}  // namespace

TEST_CASE("fit_ar1 recovers known parameters within three standard errors") {
  const double alpha = 1.587, rho = 0.597, sigma = 2.362;
  const RateSeries s = make_series(sim_ar1(alpha, rho, sigma, 100000, 42));
  const Ar1Fit f = fit_ar1(s);

  CHECK(std::fabs(f.alpha - alpha) < 3.0 * f.se_alpha);
  CHECK(std::fabs(f.rho - rho) < 3.0 * f.se_rho);
  CHECK(std::fabs(f.sigma - sigma) < 0.02);
  CHECK(f.n_obs == 99999);

  // Theoretical large-sample standard error of rho is sqrt((1-rho^2)/n).
  const double se_theory = std::sqrt((1.0 - rho * rho) / 100000.0);
  CHECK(f.se_rho == doctest::Approx(se_theory).epsilon(0.1));

  // Derived quantities are exact reparameterizations.
  CHECK(std::fabs(f.alpha - f.theta() * f.mu()) < 1e-12);
  CHECK(std::fabs(f.lag_root() * f.rho - 1.0) < 1e-14);
  CHECK(std::fabs(f.long_run_std() -
                  f.sigma / std::sqrt(1.0 - f.rho * f.rho)) < 1e-14);
  CHECK(f.r_squared > 0.25);
  CHECK(f.r_squared < 0.45);

  // Residual magnitudes are ordered like any percentile summary.
  CHECK(f.residuals.p5_abs <= f.residuals.median_abs);
  CHECK(f.residuals.median_abs <= f.residuals.p95_abs);
}

TEST_CASE("fit_ar1 standard errors have near-nominal CI coverage") {
  // Moderate-length series, many replications: the 95% interval for rho
  // should cover the truth roughly 95% of the time.
  const double alpha = 1.587, rho = 0.597, sigma = 2.362;
  int covered = 0;
  const int reps = 200;
  for (int r = 0; r < reps; ++r) {
    const RateSeries s = make_series(
        sim_ar1(alpha, rho, sigma, 1400, 1000 + static_cast<uint64_t>(r)));
    const Ar1Fit f = fit_ar1(s);
    if (std::fabs(f.rho - rho) <= 1.96 * f.se_rho) ++covered;
  }
  const double cov = static_cast<double>(covered) / reps;
  CHECK(cov >= 0.88);
  CHECK(cov <= 0.99);
}

TEST_CASE("fit_ar1 input validation") {
  CHECK_THROWS_AS(
      fit_ar1(make_series(sim_ar1(1.6, 0.6, 2.4, 100, 1),
                          RateUnits::NominalPercent)),
      UnitsError);
  CHECK_THROWS_AS(fit_ar1(make_series(std::vector<double>(29, 1.0))),
                  std::invalid_argument);
  CHECK_THROWS_AS(fit_ar1(make_series(std::vector<double>(60, 3.14))),
                  EstimationError);

  // OLS on a pure random walk is biased slightly below unity, so the fit
  // itself succeeds but sits at the stationarity boundary.
  NormalSampler ns(5);
  std::vector<double> walk(4000);
  walk[0] = 0.0;
  for (std::size_t t = 1; t < walk.size(); ++t) {
    walk[t] = walk[t - 1] + 0.05 * ns.normal();
  }
  const Ar1Fit near_unit = fit_ar1(make_series(walk));
  CHECK(near_unit.rho > 0.99);
  CHECK(near_unit.rho < 1.0);

  // A genuinely explosive series estimates rho above one and is rejected.
  std::vector<double> boom(200);
  boom[0] = 1.0;
  for (std::size_t t = 1; t < boom.size(); ++t) {
    boom[t] = 1.02 * boom[t - 1];
  }
  CHECK_THROWS_AS(fit_ar1(make_series(boom)), EstimationError);
}

TEST_CASE("fit_ar2 recovers known parameters and beats AR(1) in sample") {
  const double c = 1.215, phi1 = 0.456, phi2 = 0.235, sigma = 2.297;
  const RateSeries s = make_series(sim_ar2(c, phi1, phi2, sigma, 100000, 7));
  const Ar2Fit f = fit_ar2(s);

  CHECK(std::fabs(f.c - c) < 3.0 * f.se_c);
  CHECK(std::fabs(f.phi1 - phi1) < 3.0 * f.se_phi1);
  CHECK(std::fabs(f.phi2 - phi2) < 3.0 * f.se_phi2);
  CHECK(std::fabs(f.sigma - sigma) < 0.02);
  CHECK(f.n_obs == 99998);

  // On data with a genuine second lag the AR(2) residual scale is smaller.
  const Ar1Fit f1 = fit_ar1(s);
  CHECK(f.sigma < f1.sigma);

  // And the AR(1) long-run mean agrees with the AR(2) one closely.
  CHECK(std::fabs(f.mu() - f1.mu()) < 0.05);
}

TEST_CASE("fit_ar2 on AR(1) data finds no significant second lag") {
  const RateSeries s = make_series(sim_ar1(1.6, 0.6, 2.4, 50000, 13));
  const Ar2Fit f = fit_ar2(s);
  CHECK(std::fabs(f.phi2) < 3.5 * f.se_phi2);
}

TEST_CASE("fit_ar2 validation") {
  CHECK_THROWS_AS(fit_ar2(make_series(std::vector<double>(60, 3.14))),
                  EstimationError);
  CHECK_THROWS_AS(fit_ar2(make_series(std::vector<double>(10, 1.0))),
                  std::invalid_argument);
}

TEST_CASE("AR(2) characteristic and lag roots on reference parameters") {
  const Ar2Fit f = Ar2Fit::from_params(1.215, 0.456, 0.235, 2.297);
  const auto [l1, l2] = f.char_roots();
  CHECK(l1.imag() == 0.0);
  CHECK(std::fabs(l1.real() - 0.7637088762) < 1e-9);
  CHECK(std::fabs(l2.real() + 0.3077088762) < 1e-9);

  const auto [z1, z2] = f.lag_roots();
  CHECK(std::fabs(z1.real() - 1.3093994730) < 1e-9);
  CHECK(std::fabs(z2.real() + 3.2498250049) < 1e-9);

  // Reciprocal relation holds exactly.
  CHECK(std::abs(z1 * l1 - 1.0) < 1e-14);
  CHECK(std::fabs(f.mu() - 3.9320388350) < 1e-9);
  CHECK(std::fabs(f.long_run_std() - 2.9432094028) < 1e-9);
}

TEST_CASE("forecast_ar1 closed form matches the reference values") {
  const Ar1Fit f = Ar1Fit::from_long_run(3.943, 0.597, 2.362);
  const auto fc = forecast_ar1(f, 4.25, 12);
  REQUIRE(fc.size() == 12);
  CHECK(fc[0].horizon == 1);
  CHECK(std::fabs(fc[0].point - 4.1262790000) < 1e-12);
  CHECK(std::fabs(fc[11].point - 3.9436292603) < 1e-9);
  CHECK(std::fabs(fc[0].rmse - 2.362) < 1e-12);  // one step: rmse == sigma
  CHECK(std::fabs(fc[11].rmse - 2.9442453636) < 1e-9);

  // The mean is a fixed point of the forecast map.
  for (const auto& p : forecast_ar1(f, f.mu(), 6)) {
    CHECK(std::fabs(p.point - f.mu()) < 1e-12);
  }

  // rmse grows monotonically to the stationary standard deviation.
  const auto long_fc = forecast_ar1(f, 4.25, 60);
  for (std::size_t i = 1; i < long_fc.size(); ++i) {
    CHECK(long_fc[i].rmse >= long_fc[i - 1].rmse);
  }
  CHECK(std::fabs(long_fc.back().rmse - f.long_run_std()) < 1e-6);
}

TEST_CASE("forecast_ar1 validation") {
  const Ar1Fit f = Ar1Fit::from_long_run(3.943, 0.597, 2.362);
  CHECK_THROWS_AS(forecast_ar1(f, 4.25, 0), std::invalid_argument);
  Ar1Fit bad = f;
  bad.rho = 1.01;
  CHECK_THROWS_AS(forecast_ar1(bad, 4.25, 5), EstimationError);
  CHECK_THROWS_AS(Ar1Fit::from_long_run(3.9, 1.0, 2.0), EstimationError);
}

TEST_CASE("forecast_ar2 agrees with the forward recursion (distinct roots)") {
  const Ar2Fit f = Ar2Fit::from_params(1.215, 0.456, 0.235, 2.297);
  const auto fc = forecast_ar2(f, 4.1, 4.25, 60);

  // Recompute by brute-force recursion.
  double a = 4.1, b = 4.25;
  for (int t = 1; t <= 60; ++t) {
    const double next = f.c + f.phi1 * b + f.phi2 * a;
    a = b;
    b = next;
    CHECK(std::fabs(fc[static_cast<std::size_t>(t - 1)].point - next) < 1e-9);
  }

  // Horizon 1 is the plain regression equation.
  CHECK(std::fabs(fc[0].point - (f.c + f.phi1 * 4.25 + f.phi2 * 4.1)) <
        1e-12);
  // One-step rmse is sigma; longer horizons approach the stationary std.
  CHECK(std::fabs(fc[0].rmse - f.sigma) < 1e-12);
  CHECK(std::fabs(fc[59].rmse - f.long_run_std()) < 1e-4);
  for (std::size_t i = 1; i < fc.size(); ++i) {
    CHECK(fc[i].rmse >= fc[i - 1].rmse);
  }
}

TEST_CASE("forecast_ar2 handles complex and repeated roots") {
  // Complex pair: phi1^2 + 4 phi2 < 0.
  const Ar2Fit osc = Ar2Fit::from_params(1.0, 0.5, -0.4, 1.0);
  const auto [c1, c2] = osc.char_roots();
  CHECK(c1.imag() != 0.0);
  const auto fc = forecast_ar2(osc, 2.0, 0.5, 40);
  double a = 2.0, b = 0.5;
  for (int t = 1; t <= 40; ++t) {
    const double next = osc.c + osc.phi1 * b + osc.phi2 * a;
    a = b;
    b = next;
    CHECK(std::fabs(fc[static_cast<std::size_t>(t - 1)].point - next) < 1e-9);
  }

  // Repeated root: lambda = 0.5 twice -> phi1 = 1, phi2 = -0.25.
  const Ar2Fit rep = Ar2Fit::from_params(0.5, 1.0, -0.25, 1.0);
  const auto [r1, r2] = rep.char_roots();
  CHECK(std::abs(r1 - r2) < 1e-12);
  const auto fcr = forecast_ar2(rep, 3.0, 1.0, 40);
  a = 3.0;
  b = 1.0;
  for (int t = 1; t <= 40; ++t) {
    const double next = rep.c + rep.phi1 * b + rep.phi2 * a;
    a = b;
    b = next;
    CHECK(std::fabs(fcr[static_cast<std::size_t>(t - 1)].point - next) <
          1e-9);
  }

  // Degenerate white-noise case (both roots zero) still forecasts the mean.
  const Ar2Fit wn = Ar2Fit::from_params(2.0, 0.0, 0.0, 1.0);
  for (const auto& p : forecast_ar2(wn, 9.0, -3.0, 5)) {
    CHECK(std::fabs(p.point - 2.0) < 1e-12);
  }
}

TEST_CASE("forecast_ar2 from equal starts decays slower than the AR(1)") {
  // Starting both models at 4.25, the AR(2) path stays above the AR(1) path
  // over the first year (its dominant root 0.764 beats rho = 0.597).
  const Ar1Fit f1 = Ar1Fit::from_long_run(3.943, 0.597, 2.362);
  const Ar2Fit f2 = Ar2Fit::from_params(1.215, 0.456, 0.235, 2.297);
  const auto fc1 = forecast_ar1(f1, 4.25, 12);
  const auto fc2 = forecast_ar2(f2, 4.25, 4.25, 12);
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(fc2[i].point > fc1[i].point);
  }
  CHECK(std::fabs(fc2[0].point - 4.1517500000) < 1e-12);
  CHECK(std::fabs(fc2[11].point - 3.9437066299) < 1e-9);
}

TEST_CASE("impulse responses decay from 100 bp") {
  const Ar1Fit f1 = Ar1Fit::from_long_run(3.943, 0.597, 2.362);
  const auto ir1 = impulse_response(f1, 12);
  REQUIRE(ir1.size() == 13);
  CHECK(ir1[0] == 100.0);
  CHECK(std::fabs(ir1[1] - 59.7) < 1e-12);
  CHECK(std::fabs(ir1[6] - 4.5273699797) < 1e-9);
  CHECK(std::fabs(ir1[12] - 0.2049707893) < 1e-9);

  const Ar2Fit f2 = Ar2Fit::from_params(1.215, 0.456, 0.235, 2.297);
  const auto ir2 = impulse_response(f2, 12);
  CHECK(ir2[0] == 100.0);
  CHECK(std::fabs(ir2[1] - 45.6) < 1e-12);
  CHECK(std::fabs(ir2[2] - (0.456 * 45.6 + 0.235 * 100.0)) < 1e-12);
  CHECK(std::fabs(ir2[6] - 14.1671998080) < 1e-9);
  CHECK(std::fabs(ir2[12] - 2.8061201446) < 1e-9);

  // The AR(2) response sits far above the AR(1) response at half a year:
  // near 14 bp versus near 5 bp.
  CHECK(ir2[6] > 2.5 * ir1[6]);
}
