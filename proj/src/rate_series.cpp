#include "callrate/rate_series.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "callrate/errors.hpp"

namespace callrate {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool try_parse_month(const std::string& text, YearMonth& out) {
  // Strict ISO "YYYY-MM": four digits, hyphen, two digits.
  if (text.size() != 7 || text[4] != '-') return false;
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u}) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
  }
  const int year = std::stoi(text.substr(0, 4));
  const int month = std::stoi(text.substr(5, 2));
  if (month < 1 || month > 12) return false;
  out = YearMonth{year, month};
  return true;
}

bool try_parse_value(const std::string& text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stod(t, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == t.size();
}

}  // namespace

std::string YearMonth::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
  return buf;
}

YearMonth YearMonth::parse(const std::string& text) {
  YearMonth ym;
  if (!try_parse_month(trim(text), ym)) {
    throw DataError("invalid month '" + text + "' (expected YYYY-MM)");
  }
  return ym;
}

RateSeries::RateSeries(std::vector<Observation> observations, RateUnits units,
                       std::string label)
    : obs_(std::move(observations)), units_(units), label_(std::move(label)) {
  std::sort(obs_.begin(), obs_.end(),
            [](const Observation& a, const Observation& b) {
              return a.month < b.month;
            });
  for (std::size_t i = 0; i < obs_.size(); ++i) {
    const Observation& o = obs_[i];
    if (!std::isfinite(o.value)) {
      throw DataError("non-finite value at " + o.month.to_string());
    }
    if (o.value <= -100.0) {
      throw DataError("value at " + o.month.to_string() +
                      " must exceed -100");
    }
    if (i == 0) continue;
    const int step = o.month.index() - obs_[i - 1].month.index();
    if (step == 0) {
      throw DataError("duplicate month " + o.month.to_string());
    }
    if (step != 1) {
      throw DataError("month gap between " + obs_[i - 1].month.to_string() +
                      " and " + o.month.to_string());
    }
  }
}

std::vector<double> RateSeries::values() const {
  std::vector<double> v;
  v.reserve(obs_.size());
  for (const Observation& o : obs_) v.push_back(o.value);
  return v;
}

RateSeries load_csv(const std::string& path, RateUnits units) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open '" + path + "'");
  }

  std::vector<Observation> obs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;

    const std::size_t comma = line.find(',');
    const std::string date_field =
        trim(comma == std::string::npos ? line : line.substr(0, comma));
    const std::string value_field =
        comma == std::string::npos ? "" : line.substr(comma + 1);

    YearMonth ym;
    if (!try_parse_month(date_field, ym)) {
      if (line_no == 1) continue;  // header row
      throw DataError("malformed row at line " + std::to_string(line_no) +
                      " of '" + path + "'");
    }
    double value = 0.0;
    if (comma == std::string::npos || !try_parse_value(value_field, value)) {
      throw DataError("malformed row at line " + std::to_string(line_no) +
                      " of '" + path + "'");
    }
    obs.push_back(Observation{ym, value});
  }

  if (obs.empty()) {
    throw DataError("'" + path + "' contains no data rows");
  }
  return RateSeries(std::move(obs), units, path);
}

RateSeries to_continuous(const RateSeries& series) {
  if (series.units() == RateUnits::ContinuousPercent) {
    throw UnitsError("series is already continuously compounded");
  }
  std::vector<Observation> obs = series.observations();
  for (Observation& o : obs) {
    o.value = 100.0 * std::log1p(o.value / 100.0);
  }
  return RateSeries(std::move(obs), RateUnits::ContinuousPercent,
                    series.label());
}

double percentile(const std::vector<double>& sorted_values, double p) {
  if (sorted_values.empty()) {
    throw std::invalid_argument("percentile of empty sample");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("percentile level must lie in [0, 1]");
  }
  const std::size_t n = sorted_values.size();
  const double h = p * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted_values[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

SummaryStats summarize(const RateSeries& series) {
  if (series.empty()) {
    throw DataError("cannot summarize an empty series");
  }
  std::vector<double> v = series.values();
  const std::size_t n = v.size();

  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / static_cast<double>(n);

  double ss = 0.0;
  double abs_dev = 0.0;
  for (double x : v) {
    const double d = x - mean;
    ss += d * d;
    abs_dev += std::fabs(d);
  }

  std::sort(v.begin(), v.end());

  SummaryStats s;
  s.count = n;
  s.mean = mean;
  s.std_dev = std::sqrt(ss / static_cast<double>(n));
  s.mean_abs_dev = abs_dev / static_cast<double>(n);
  s.min = v.front();
  s.max = v.back();
  s.p5 = percentile(v, 0.05);
  s.median = percentile(v, 0.50);
  s.p95 = percentile(v, 0.95);
  return s;
}

}  // namespace callrate
