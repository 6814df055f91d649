#pragma once

#include <cstddef>
#include <vector>

#include "callrate/rate_series.hpp"

namespace callrate {

struct HistogramBin {
  double lower_edge = 0.0;  // bin covers [lower_edge, lower_edge + width)
  std::size_t count = 0;
};

struct Histogram {
  double bin_width = 0.0;
  std::vector<HistogramBin> bins;  // dense from lowest to highest occupied bin
  std::size_t overflow = 0;        // observations at or above max_value
};

// Fixed-width histogram with bin edges anchored at integer multiples of
// `bin_width`.  Bins are reported densely (including empty ones) between the
// lowest and highest occupied bins below `max_value`; observations >=
// max_value are tallied in `overflow` only.
Histogram histogram(const RateSeries& series, double bin_width,
                    double max_value);

struct KdePoint {
  double x = 0.0;
  double density = 0.0;
};

// Gaussian kernel density estimate on an explicit evaluation grid:
//   f(x) = 1/(n h sqrt(2 pi)) * sum_t exp(-(x - y_t)^2 / (2 h^2)).
// Bandwidth h must be positive; the series must be non-empty.
std::vector<KdePoint> kde(const RateSeries& series, double bandwidth,
                          const std::vector<double>& grid);

struct Correlogram {
  std::vector<double> values;   // index j = lag j; values[0] == 1
  double band_half_width = 0.0; // 1.96 / sqrt(n), the white-noise 95% band
};

// Sample autocorrelation function for lags 0..max_lag:
//   rho_j = sum_{t=j}^{n-1} (y_t - ybar)(y_{t-j} - ybar) / (n * var),
// with the whole-sample mean and the population variance in the denominator
// (so rho_0 == 1 and |rho_j| <= 1).  Requires max_lag < n.
Correlogram acf(const RateSeries& series, std::size_t max_lag);

// Sample partial autocorrelation function via the Durbin-Levinson recursion
// on the ACF.  Requires max_lag < n/2.
Correlogram pacf(const RateSeries& series, std::size_t max_lag);

}  // namespace callrate
