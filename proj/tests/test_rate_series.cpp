#include "callrate/rate_series.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "callrate/errors.hpp"
#include "test_util.hpp"

using namespace callrate;
using testutil::make_series;
using testutil::write_temp;

TEST_CASE("load_csv reads a minimal file") {
  const std::string path = write_temp(
      "minimal.csv", "month,rate\n1857-01,6.0\n1857-02,5.5\n1857-03,7.25\n");
  const RateSeries s = load_csv(path, RateUnits::NominalPercent);
  REQUIRE(s.size() == 3);
  CHECK((s[0].month == YearMonth{1857, 1}));
  CHECK(s[0].value == 6.0);
  CHECK((s[2].month == YearMonth{1857, 3}));
  CHECK(s[2].value == 7.25);
  CHECK(s.units() == RateUnits::NominalPercent);
}

TEST_CASE("load_csv works without a header and with CRLF endings") {
  const std::string path =
      write_temp("noheader.csv", "1900-11,3.5\r\n1900-12,4\r\n");
  const RateSeries s = load_csv(path, RateUnits::NominalPercent);
  REQUIRE(s.size() == 2);
  CHECK(s[1].value == 4.0);
}

TEST_CASE("load_csv sorts rows that arrive out of order") {
  const std::string path = write_temp(
      "unsorted.csv", "1857-03,7.0\n1857-01,6.0\n1857-02,5.0\n");
  const RateSeries s = load_csv(path, RateUnits::NominalPercent);
  REQUIRE(s.size() == 3);
  CHECK(s[0].value == 6.0);
  CHECK(s[1].value == 5.0);
  CHECK(s[2].value == 7.0);
}

TEST_CASE("load_csv rejects malformed rows with the line number") {
  const std::string path = write_temp(
      "badrow.csv", "month,rate\n1857-01,6.0\n1857-02,sixish\n");
  try {
    load_csv(path, RateUnits::NominalPercent);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }

  const std::string missing = write_temp("onefield.csv", "1857-01\n");
  CHECK_THROWS_AS(load_csv(missing, RateUnits::NominalPercent), DataError);
  const std::string baddate =
      write_temp("baddate.csv", "month,rate\n1857-13,6.0\n");
  CHECK_THROWS_AS(load_csv(baddate, RateUnits::NominalPercent), DataError);
  // A sole unparseable line is taken for a header, leaving no data at all.
  const std::string headeronly = write_temp("headeronly.csv", "1857-13,6.0\n");
  CHECK_THROWS_AS(load_csv(headeronly, RateUnits::NominalPercent), DataError);
  CHECK_THROWS_AS(load_csv("/nonexistent/never.csv", RateUnits::NominalPercent),
                  DataError);
}

TEST_CASE("series invariants: gaps, duplicates, bad values") {
  const std::string gap =
      write_temp("gap.csv", "1857-01,6.0\n1857-03,7.0\n");
  try {
    load_csv(gap, RateUnits::NominalPercent);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("gap") != std::string::npos);
    CHECK(msg.find("1857-01") != std::string::npos);
    CHECK(msg.find("1857-03") != std::string::npos);
  }

  const std::string dup =
      write_temp("dup.csv", "1857-01,6.0\n1857-01,7.0\n");
  CHECK_THROWS_AS(load_csv(dup, RateUnits::NominalPercent), DataError);

  const std::string nan_file = write_temp("nan.csv", "1857-01,nan\n");
  CHECK_THROWS_AS(load_csv(nan_file, RateUnits::NominalPercent), DataError);

  CHECK_THROWS_AS(make_series({5.0, -100.0}), DataError);
  CHECK_THROWS_AS(make_series({5.0, -101.0}), DataError);
  CHECK_NOTHROW(make_series({5.0, -99.9}));

  // December to January across a year boundary is one month, not a gap.
  std::vector<Observation> obs = {{YearMonth{1899, 12}, 1.0},
                                  {YearMonth{1900, 1}, 2.0}};
  CHECK_NOTHROW(RateSeries(obs, RateUnits::NominalPercent));
}

TEST_CASE("YearMonth parsing and printing") {
  CHECK((YearMonth::parse("1857-01") == YearMonth{1857, 1}));
  CHECK((YearMonth{2026, 8}.to_string() == "2026-08"));
  CHECK_THROWS_AS(YearMonth::parse("1857-1"), DataError);
  CHECK_THROWS_AS(YearMonth::parse("18570-01"), DataError);
  CHECK_THROWS_AS(YearMonth::parse("1857/01"), DataError);
}

TEST_CASE("to_continuous applies 100 log(1 + r/100)") {
  const RateSeries nominal =
      make_series({0.0, 100.0, 6.0}, RateUnits::NominalPercent);
  const RateSeries cont = to_continuous(nominal);
  CHECK(cont.units() == RateUnits::ContinuousPercent);
  CHECK(cont[0].value == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::fabs(cont[1].value - 100.0 * std::log(2.0)) < 1e-9);
  CHECK(std::fabs(cont[2].value - 100.0 * std::log(1.06)) < 1e-12);

  // Dates are preserved.
  CHECK(cont[2].month == nominal[2].month);

  // Converting twice is a units violation.
  CHECK_THROWS_AS(to_continuous(cont), UnitsError);
}

TEST_CASE("to_continuous properties: order, contraction, round trip") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.01, 50.0);
  std::vector<double> vals(200);
  for (double& v : vals) v = u(rng);

  const RateSeries nominal = make_series(vals, RateUnits::NominalPercent);
  const RateSeries cont = to_continuous(nominal);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    // y <= r for r >= 0, with equality only at 0.
    CHECK(cont[i].value <= nominal[i].value);
    // Inverse transform recovers the nominal rate.
    const double back = 100.0 * std::expm1(cont[i].value / 100.0);
    CHECK(std::fabs(back - nominal[i].value) < 1e-9);
  }

  // Strictly increasing map: applying it preserves ranks.
  std::vector<double> nom_sorted = nominal.values();
  std::vector<double> cont_sorted = cont.values();
  std::sort(nom_sorted.begin(), nom_sorted.end());
  std::sort(cont_sorted.begin(), cont_sorted.end());
  for (std::size_t i = 0; i + 1 < nom_sorted.size(); ++i) {
    CHECK(cont_sorted[i] < cont_sorted[i + 1]);
  }
}

TEST_CASE("summarize matches hand-computed values") {
  const RateSeries tiny = make_series({1.0, 2.0, 3.0});
  const SummaryStats s = summarize(tiny);
  CHECK(s.count == 3);
  CHECK(s.mean == doctest::Approx(2.0));
  CHECK(s.std_dev == doctest::Approx(std::sqrt(2.0 / 3.0)));  // divisor n
  CHECK(s.mean_abs_dev == doctest::Approx(2.0 / 3.0));
  CHECK(s.min == 1.0);
  CHECK(s.max == 3.0);
  CHECK(s.median == 2.0);
  // Linear interpolation between closest ranks: h = 0.05 * 2 = 0.1.
  CHECK(s.p5 == doctest::Approx(1.1));
  CHECK(s.p95 == doctest::Approx(2.9));

  const SummaryStats c = summarize(make_series({5.0, 5.0, 5.0, 5.0}));
  CHECK(c.mean == 5.0);
  CHECK(c.std_dev == 0.0);
  CHECK(c.mean_abs_dev == 0.0);
  CHECK(c.p5 == 5.0);
  CHECK(c.p95 == 5.0);
}

TEST_CASE("summarize invariants on random data") {
  std::mt19937_64 rng(7);
  std::lognormal_distribution<double> dist(1.0, 0.6);
  std::vector<double> vals(500);
  for (double& v : vals) v = dist(rng);

  const SummaryStats s = summarize(make_series(vals));
  CHECK(s.min <= s.p5);
  CHECK(s.p5 <= s.median);
  CHECK(s.median <= s.p95);
  CHECK(s.p95 <= s.max);
  CHECK(s.mean_abs_dev <= s.std_dev + 1e-12);

  // Order invariance: the same values in reverse order summarize identically
  // (construction re-sorts observations by month).
  std::vector<Observation> rev;
  int year = 1857;
  int month = 1;
  for (double v : vals) {
    rev.push_back(Observation{YearMonth{year, month}, v});
    if (++month > 12) {
      month = 1;
      ++year;
    }
  }
  std::reverse(rev.begin(), rev.end());
  const SummaryStats s2 =
      summarize(RateSeries(rev, RateUnits::ContinuousPercent));
  CHECK(s2.mean == s.mean);
  CHECK(s2.std_dev == s.std_dev);
  CHECK(s2.p95 == s.p95);
}

TEST_CASE("summarize and percentile reject empty input") {
  CHECK_THROWS_AS(summarize(make_series({})), DataError);
  CHECK_THROWS_AS(percentile({}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(percentile({1.0}, 1.5), std::invalid_argument);
  CHECK(percentile({4.0}, 0.5) == 4.0);
}
