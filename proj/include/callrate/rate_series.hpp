#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace callrate {

// Scale/compounding convention of the rate values in a series.
enum class RateUnits {
  NominalPercent,     // annualized simple rate, percent (e.g. 6.0 means 6%)
  ContinuousPercent,  // continuously compounded equivalent, percent
};

// Calendar month, ISO "YYYY-MM".
struct YearMonth {
  int year = 0;
  int month = 0;  // 1..12

  auto operator<=>(const YearMonth&) const = default;

  // Months elapsed since 0000-01; adjacent calendar months differ by 1.
  int index() const { return year * 12 + (month - 1); }

  std::string to_string() const;
  static YearMonth parse(const std::string& text);  // throws DataError
};

struct Observation {
  YearMonth month;
  double value = 0.0;
};

// A monthly rate series.  Construction sorts observations by month and then
// enforces the series invariants: strictly increasing months with no calendar
// gaps, and finite values greater than -100 (so log(1 + r/100) exists).
class RateSeries {
 public:
  RateSeries(std::vector<Observation> observations, RateUnits units,
             std::string label = "");

  std::size_t size() const { return obs_.size(); }
  bool empty() const { return obs_.empty(); }
  RateUnits units() const { return units_; }
  const std::string& label() const { return label_; }
  const std::vector<Observation>& observations() const { return obs_; }
  const Observation& operator[](std::size_t i) const { return obs_[i]; }

  // Values in series order (copies; series are small).
  std::vector<double> values() const;

 private:
  std::vector<Observation> obs_;
  RateUnits units_;
  std::string label_;
};

// Reads a two-column CSV ("YYYY-MM,value").  An optional header row is
// detected by a non-parseable first field on line 1; any later malformed row
// is an error that reports the 1-based line number.  Rows may arrive in any
// order.  Throws DataError on malformed rows, duplicate months, month gaps,
// or invalid values.
RateSeries load_csv(const std::string& path, RateUnits units);

// Converts a nominal-percent series to its continuously compounded
// equivalent, y = 100 * log(1 + r/100), preserving dates.  Throws UnitsError
// if the input is already continuous.
RateSeries to_continuous(const RateSeries& series);

// Distribution summary of the raw values.
struct SummaryStats {
  std::size_t count = 0;
  double mean = 0.0;
  double std_dev = 0.0;  // population standard deviation (divisor n)
  double mean_abs_dev = 0.0;
  double min = 0.0;
  double p5 = 0.0;
  double median = 0.0;
  double p95 = 0.0;
  double max = 0.0;
};

// Throws DataError on an empty series.
SummaryStats summarize(const RateSeries& series);

// Percentile by linear interpolation between closest ranks: for sorted
// values v[0..n-1] and p in [0, 1], h = p*(n-1) and the result interpolates
// v[floor(h)] and v[floor(h)+1].  `sorted_values` must be non-empty and
// ascending.
double percentile(const std::vector<double>& sorted_values, double p);

}  // namespace callrate
