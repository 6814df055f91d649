#include "callrate/descriptive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>

#include "callrate/errors.hpp"

namespace callrate {

Histogram histogram(const RateSeries& series, double bin_width,
                    double max_value) {
  if (!(bin_width > 0.0)) {
    throw std::invalid_argument("histogram bin width must be positive");
  }
  if (!(max_value > 0.0)) {
    throw std::invalid_argument("histogram max value must be positive");
  }

  Histogram h;
  h.bin_width = bin_width;
  if (series.empty()) return h;

  // Bin index k covers [k*w, (k+1)*w); indices may be negative.
  std::map<long long, std::size_t> counts;
  for (const Observation& o : series.observations()) {
    if (o.value >= max_value) {
      ++h.overflow;
      continue;
    }
    const long long k =
        static_cast<long long>(std::floor(o.value / bin_width));
    ++counts[k];
  }
  if (counts.empty()) return h;

  const long long k_lo = counts.begin()->first;
  const long long k_hi = counts.rbegin()->first;
  h.bins.reserve(static_cast<std::size_t>(k_hi - k_lo + 1));
  for (long long k = k_lo; k <= k_hi; ++k) {
    const auto it = counts.find(k);
    h.bins.push_back(HistogramBin{static_cast<double>(k) * bin_width,
                                  it == counts.end() ? 0u : it->second});
  }
  return h;
}

std::vector<KdePoint> kde(const RateSeries& series, double bandwidth,
                          const std::vector<double>& grid) {
  if (series.empty()) {
    throw DataError("cannot estimate a density from an empty series");
  }
  if (!(bandwidth > 0.0)) {
    throw std::invalid_argument("kde bandwidth must be positive");
  }

  const std::vector<double> y = series.values();
  const double norm = 1.0 / (static_cast<double>(y.size()) * bandwidth *
                             std::sqrt(2.0 * std::numbers::pi));
  const double inv_2h2 = 1.0 / (2.0 * bandwidth * bandwidth);

  std::vector<KdePoint> out;
  out.reserve(grid.size());
  for (double x : grid) {
    double sum = 0.0;
    for (double yt : y) {
      const double d = x - yt;
      sum += std::exp(-d * d * inv_2h2);
    }
    out.push_back(KdePoint{x, norm * sum});
  }
  return out;
}

Correlogram acf(const RateSeries& series, std::size_t max_lag) {
  const std::size_t n = series.size();
  if (max_lag >= n) {
    throw std::invalid_argument("acf: max_lag must be below the series length");
  }

  const std::vector<double> y = series.values();
  double mean = 0.0;
  for (double x : y) mean += x;
  mean /= static_cast<double>(n);

  double var_n = 0.0;  // n * population variance
  for (double x : y) var_n += (x - mean) * (x - mean);
  if (var_n <= 0.0) {
    throw EstimationError("acf: series has zero variance");
  }

  Correlogram c;
  c.band_half_width = 1.96 / std::sqrt(static_cast<double>(n));
  c.values.resize(max_lag + 1);
  for (std::size_t j = 0; j <= max_lag; ++j) {
    double s = 0.0;
    for (std::size_t t = j; t < n; ++t) {
      s += (y[t] - mean) * (y[t - j] - mean);
    }
    c.values[j] = s / var_n;
  }
  return c;
}

Correlogram pacf(const RateSeries& series, std::size_t max_lag) {
  const std::size_t n = series.size();
  if (2 * max_lag >= n) {
    throw std::invalid_argument(
        "pacf: max_lag must be below half the series length");
  }

  const Correlogram rho = acf(series, max_lag);

  Correlogram c;
  c.band_half_width = rho.band_half_width;
  c.values.assign(max_lag + 1, 0.0);
  c.values[0] = 1.0;
  if (max_lag == 0) return c;

  // Durbin-Levinson: phi[k][k] is the PACF at lag k.
  std::vector<double> phi(max_lag + 1, 0.0);
  std::vector<double> prev(max_lag + 1, 0.0);
  phi[1] = rho.values[1];
  c.values[1] = phi[1];
  double denom = 1.0 - rho.values[1] * phi[1];

  for (std::size_t k = 2; k <= max_lag; ++k) {
    if (std::fabs(denom) < 16.0 * std::numeric_limits<double>::epsilon()) {
      throw EstimationError("pacf: recursion breaks down at lag " +
                            std::to_string(k));
    }
    prev = phi;
    double num = rho.values[k];
    for (std::size_t j = 1; j < k; ++j) num -= prev[j] * rho.values[k - j];
    phi[k] = num / denom;
    for (std::size_t j = 1; j < k; ++j) {
      phi[j] = prev[j] - phi[k] * prev[k - j];
    }
    c.values[k] = phi[k];
    denom *= 1.0 - phi[k] * phi[k];
  }
  return c;
}

}  // namespace callrate
