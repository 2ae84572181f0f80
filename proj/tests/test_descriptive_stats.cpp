#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ratingmc/descriptive_stats.hpp"
#include "ratingmc/simulator.hpp"

using namespace ratingmc;

namespace {

Date day(int y, unsigned m, unsigned d) { return make_date(y, m, d); }

const Span kSpan{day(2007, 1, 1), day(2009, 12, 31)};

RatingHistory hist(std::string id, std::vector<std::pair<Date, int>> ev) {
  std::vector<RatingEvent> events;
  for (auto [d, s] : ev) events.push_back({d, RatingState{s}});
  return RatingHistory{std::move(id), std::move(events)};
}

}  // namespace

TEST(RatingHistogram, AllSameState) {
  const Panel p(kSpan, {hist("a", {{kSpan.start, 7}}), hist("b", {{kSpan.start, 7}}),
                        hist("c", {{kSpan.start, 7}})});
  const auto h = rating_histogram(p, day(2008, 1, 1));
  EXPECT_EQ(h.count(7), 3);
  EXPECT_EQ(h.total, 3);
  for (int s = 0; s < 15; ++s) {
    if (s != 7) { EXPECT_EQ(h.count(s), 0); }
  }
}

TEST(RatingHistogram, EmptyPanel) {
  const auto h = rating_histogram(Panel(kSpan, {}), kSpan.start);
  EXPECT_EQ(h.total, 0);
  EXPECT_EQ(h.counts.size(), 15u);
}

TEST(RatingHistogram, MixedFixtureMatchesHandTally) {
  const Date t = day(2008, 6, 1);
  const Panel p(kSpan, {hist("a", {{kSpan.start, 3}, {day(2008, 2, 1), 4}}),
                        hist("b", {{kSpan.start, 4}}),
                        hist("c", {{kSpan.start, 10}, {day(2008, 7, 1), 9}}),
                        hist("d", {{day(2008, 7, 1), 2}}),
                        hist("e", {{kSpan.start, 14}, {day(2007, 5, 5), 13}})});
  const auto h = rating_histogram(p, t);
  EXPECT_EQ(h.count(4), 2);
  EXPECT_EQ(h.count(10), 1);
  EXPECT_EQ(h.count(13), 1);
  EXPECT_EQ(h.count(2), 0);
  EXPECT_EQ(h.total, 4);
  EXPECT_EQ(static_cast<std::size_t>(h.total), count_rated(p, t));
}

TEST(IncrementHistogram, StaticAndDowngrade) {
  const Date t = day(2009, 1, 1);
  const Panel flat(kSpan, {hist("a", {{kSpan.start, 3}}), hist("b", {{kSpan.start, 9}})});
  const auto h0 = increment_histogram(flat, t);
  EXPECT_EQ(h0.count(0), 2);
  EXPECT_EQ(h0.total, 2);
  EXPECT_EQ(h0.first_value, -14);
  EXPECT_EQ(h0.last_value(), 14);

  const Panel down(kSpan, {hist("a", {{kSpan.start, 9}, {day(2008, 6, 1), 7}})});
  EXPECT_EQ(increment_histogram(down, t).count(-2), 1);
}

TEST(IncrementHistogram, ExcludesBanksWithoutBothEndpoints) {
  const Date t = day(2009, 1, 1);
  const Panel p(kSpan, {hist("a", {{kSpan.start, 3}}), hist("b", {{day(2008, 6, 1), 5}}),
                        hist("c", {{day(2007, 12, 1), 5}, {day(2008, 12, 1), 6}})});
  const auto h = increment_histogram(p, t);
  EXPECT_EQ(h.total, 2);
  EXPECT_EQ(h.count(0), 1);
  EXPECT_EQ(h.count(1), 1);
  EXPECT_LE(static_cast<std::size_t>(h.total), count_rated(p, t));
}

TEST(Moments, Degenerate) {
  const std::vector<double> x{5, 5, 5};
  const auto m = moments(x);
  EXPECT_EQ(m.mean, 5.0);
  EXPECT_EQ(m.variance, 0.0);
  EXPECT_FALSE(m.skewness);
  EXPECT_FALSE(m.kurtosis);
  EXPECT_THROW(moments(std::vector<double>{}), std::invalid_argument);
}

TEST(Moments, TwoPoint) {
  const std::vector<double> x{0, 1};
  const auto m = moments(x);
  EXPECT_DOUBLE_EQ(m.mean, 0.5);
  EXPECT_DOUBLE_EQ(m.variance, 0.25);
  EXPECT_NEAR(*m.skewness, 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(*m.kurtosis, 1.0);
}

TEST(Moments, MatchesTwoPassOracleAndAffineShift) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 300;
    const double loc = normal(rng) * 10.0;
    const double scale = 0.1 + std::abs(normal(rng)) * 5.0;
    std::vector<double> x(n);
    for (auto& v : x) v = loc + scale * std::exp(normal(rng) * 0.5);
    const auto m = moments(x);
    const auto o = oracle::two_pass_moments(x);
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
    EXPECT_LT(rel(m.mean, o.mean), 1e-10);
    EXPECT_LT(rel(m.variance, o.variance), 1e-10);
    EXPECT_LT(rel(*m.skewness, o.skewness), 1e-10);
    EXPECT_LT(rel(*m.kurtosis, o.kurtosis), 1e-10);

    const double shift = normal(rng) * 100.0;
    std::vector<double> y(x);
    for (auto& v : y) v += shift;
    const auto ms = moments(y);
    EXPECT_NEAR(ms.mean, m.mean + shift, 1e-9 * std::max(1.0, std::abs(shift)));
    EXPECT_LT(rel(ms.variance, m.variance), 1e-8);
    EXPECT_LT(rel(*ms.skewness, *m.skewness), 1e-6);
    EXPECT_LT(rel(*ms.kurtosis, *m.kurtosis), 1e-6);
  }
}

TEST(Moments, GaussianKurtosisNearThree) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(200000);
  for (auto& v : x) v = normal(rng);
  const auto m = moments(x);
  // Standard error of the kurtosis estimate is sqrt(24/n) ~ 0.011.
  EXPECT_NEAR(*m.kurtosis, 3.0, 0.05);
  EXPECT_NEAR(*m.skewness, 0.0, 0.03);
}

TEST(MomentSeries, StaticPanel) {
  const Panel p(kSpan, {hist("a", {{kSpan.start, 3}}), hist("b", {{kSpan.start, 9}})});
  const auto rows = moment_series(p);
  EXPECT_EQ(rows.size(), 36u);
  for (const auto& r : rows) {
    EXPECT_DOUBLE_EQ(r.rating.mean, 6.0);
    if (r.date >= kSpan.start + kDefaultTau) {
      ASSERT_TRUE(r.increment);
      EXPECT_EQ(r.increment->mean, 0.0);
      EXPECT_EQ(r.increment->variance, 0.0);
    } else {
      EXPECT_FALSE(r.increment);
    }
  }
}

TEST(MomentSeries, SynchronizedOneNotchDowngrades) {
  std::vector<RatingHistory> hs;
  for (int b = 0; b < 6; ++b) {
    hs.push_back(hist("b" + std::to_string(b), {{kSpan.start, 4 + b}, {day(2008, 6, 1), 3 + b}}));
  }
  const Panel p(kSpan, std::move(hs));
  const Date t = day(2009, 1, 1);
  const auto rows = moment_series(p, std::vector<Date>{t});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_DOUBLE_EQ(rows[0].increment->mean, -1.0);
  EXPECT_FALSE(rows[0].increment->skewness);
}

TEST(MomentSeries, EqualsNaivePerDateRecomputation) {
  Scenario sc;
  sc.generators = {{kSpan.start, random_generator(4, 0.5)}};
  sc.n_banks = 150;
  sc.span = kSpan;
  sc.initial_distribution.fill(0.0);
  sc.initial_distribution[10] = 0.5;
  sc.initial_distribution[5] = 0.5;
  sc.seed = 99;
  const Panel p = simulate(sc);
  const auto dates = every_n_days(kSpan, 45);
  const auto rows = moment_series(p, dates, Days{200});
  ASSERT_EQ(rows.size(), dates.size());
  for (const auto& row : rows) {
    std::vector<double> r;
    std::vector<double> t;
    for (const auto& h : p.histories()) {
      const auto states = oracle::daily_states(h, kSpan);
      const auto k = static_cast<std::size_t>((row.date - kSpan.start).count());
      if (states[k] < 0) continue;
      r.push_back(states[k]);
      if (k >= 200 && states[k - 200] >= 0) t.push_back(states[k] - states[k - 200]);
    }
    const auto mr = oracle::two_pass_moments(r);
    EXPECT_NEAR(row.rating.mean, mr.mean, 1e-10);
    EXPECT_NEAR(row.rating.variance, mr.variance, 1e-10);
    EXPECT_NEAR(*row.rating.kurtosis, mr.kurtosis, 1e-9);
    if (t.empty()) {
      EXPECT_FALSE(row.increment);
    } else {
      ASSERT_TRUE(row.increment);
      const auto mt = oracle::two_pass_moments(t);
      EXPECT_NEAR(row.increment->mean, mt.mean, 1e-10);
      EXPECT_NEAR(row.increment->variance, mt.variance, 1e-10);
    }
  }
}
