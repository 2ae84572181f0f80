#include <random>

#include <gtest/gtest.h>

#include "ratingmc/core_model.hpp"

using namespace ratingmc;

namespace {

Date day(int y, unsigned m, unsigned d) { return make_date(y, m, d); }

RatingHistory single(std::string id, Date d, int state) {
  return RatingHistory{std::move(id), {{d, RatingState{state}}}};
}

}  // namespace

TEST(RatingScale, HasFifteenUniqueLabelsOrderedWorstToBest) {
  EXPECT_EQ(RatingScale::size(), 15);
  for (int k = 0; k < kNumStates; ++k) {
    for (int j = k + 1; j < kNumStates; ++j) {
      EXPECT_NE(RatingScale::labels[static_cast<std::size_t>(k)],
                RatingScale::labels[static_cast<std::size_t>(j)]);
    }
    EXPECT_EQ(RatingScale::encode(RatingScale::decode(RatingState{k}))->index(), k);
  }
  EXPECT_EQ(RatingScale::encode("E-")->index(), 0);
  EXPECT_EQ(RatingScale::encode("A+")->index(), 14);
  EXPECT_EQ(RatingScale::encode("B")->index(), 10);
  EXPECT_FALSE(RatingScale::encode("Z+"));
  EXPECT_FALSE(RatingScale::encode("WR"));
  EXPECT_THROW(RatingState{15}, std::out_of_range);
  EXPECT_THROW(RatingState{-1}, std::out_of_range);
}

TEST(RatingHistory, RejectsBrokenInvariants) {
  const Date d = day(2007, 1, 1);
  EXPECT_THROW(RatingHistory("b", {}), std::invalid_argument);
  EXPECT_THROW(RatingHistory("b", {{d, RatingState{3}}, {d, RatingState{4}}}), std::invalid_argument);
  EXPECT_THROW(RatingHistory("b", {{d + Days{2}, RatingState{3}}, {d, RatingState{4}}}),
               std::invalid_argument);
  EXPECT_THROW(RatingHistory("b", {{d, RatingState{3}}, {d + Days{1}, RatingState{3}}}),
               std::invalid_argument);
  EXPECT_THROW(RatingHistory("b", {{d, RatingState{3}}}, d), std::invalid_argument);
  EXPECT_NO_THROW(RatingHistory("b", {{d, RatingState{3}}}, d + Days{1}));
}

TEST(RatingAt, ConstantHistory) {
  const auto h = single("b1", day(2007, 1, 1), 14);
  EXPECT_EQ(rating_at(h, day(2008, 6, 1))->index(), 14);
  EXPECT_FALSE(rating_at(h, day(2006, 12, 31)));
  EXPECT_EQ(rating_at(h, day(2007, 1, 1))->index(), 14);
}

TEST(RatingAt, StepFunctionHoldsLastValue) {
  const Date d1 = day(2007, 3, 1);
  const Date d2 = day(2007, 9, 1);
  const RatingHistory h{"b", {{d1, RatingState{5}}, {d2, RatingState{3}}}};
  EXPECT_EQ(rating_at(h, d1 + Days{10})->index(), 5);
  EXPECT_EQ(rating_at(h, d2 - Days{1})->index(), 5);
  EXPECT_EQ(rating_at(h, d2)->index(), 3);
}

TEST(RatingAt, AbsentAfterWithdrawal) {
  const Date d1 = day(2007, 1, 1);
  const RatingHistory h{"b", {{d1, RatingState{7}}}, day(2008, 1, 1)};
  EXPECT_EQ(rating_at(h, day(2007, 12, 31))->index(), 7);
  EXPECT_FALSE(rating_at(h, day(2008, 1, 1)));
  EXPECT_EQ(*h.last_rated_date(), day(2007, 12, 31));
}

TEST(Increment, SignConventionAndAbsence) {
  const Date t = day(2009, 1, 1);
  const RatingHistory down{"b", {{t - Days{400}, RatingState{12}}, {t - Days{10}, RatingState{10}}}};
  EXPECT_EQ(increment(down, t)->value, -2);
  const RatingHistory flat{"b", {{t - Days{800}, RatingState{7}}}};
  EXPECT_EQ(increment(flat, t)->value, 0);
  const RatingHistory late{"b", {{t - Days{100}, RatingState{7}}}};
  EXPECT_FALSE(increment(late, t));
  EXPECT_EQ(increment(flat, t, Days{30})->tau, Days{30});
  EXPECT_THROW(increment(flat, t, Days{0}), std::invalid_argument);
  EXPECT_THROW(increment(flat, t, Days{-5}), std::invalid_argument);
}

TEST(Increment, TelescopesOverSubHorizons) {
  std::mt19937_64 rng(11);
  const Date start = day(2007, 1, 1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<RatingEvent> events{{start, RatingState{static_cast<int>(rng() % 15)}}};
    Date d = start;
    for (int k = 0; k < 8; ++k) {
      d += Days{1 + static_cast<long>(rng() % 200)};
      int s = static_cast<int>(rng() % 15);
      if (s == events.back().state.index()) s = (s + 1) % 15;
      events.push_back({d, RatingState{s}});
    }
    const RatingHistory h{"b", events};
    const Date t = start + Days{500 + static_cast<long>(rng() % 1000)};
    const Days tau1{1 + static_cast<long>(rng() % 200)};
    const Days tau2{1 + static_cast<long>(rng() % 200)};
    const auto whole = increment(h, t, tau1 + tau2);
    const auto late = increment(h, t, tau1);
    const auto early = increment(h, t - tau1, tau2);
    if (whole && late && early) { EXPECT_EQ(whole->value, late->value + early->value); }
  }
}

TEST(Panel, ValidatesIdsAndCoverage) {
  const Span span{day(2007, 1, 1), day(2012, 12, 31)};
  EXPECT_THROW(Panel(span, {single("a", span.start, 1), single("a", span.start, 2)}),
               std::invalid_argument);
  EXPECT_THROW(Panel(span, {single("a", day(2006, 1, 1), 1)}), std::invalid_argument);
  const Panel p(span, {single("b", span.start, 1), single("a", span.start, 2)});
  EXPECT_EQ(p.histories()[0].bank_id(), "a");
}

TEST(CountRated, EnumeratesEntries) {
  const Span span{day(2007, 1, 1), day(2007, 12, 31)};
  EXPECT_EQ(count_rated(Panel(span, {}), span.start), 0u);

  const Panel all(span, {single("a", span.start, 1), single("b", span.start, 2),
                         single("c", span.start, 3)});
  EXPECT_EQ(count_rated(all, span.start), 3u);
  EXPECT_EQ(count_rated(all, span.end), 3u);

  const Panel late(span, {single("a", span.start, 1), single("b", span.start, 2),
                          single("c", span.start + Days{10}, 3)});
  EXPECT_EQ(count_rated(late, span.start), 2u);
  EXPECT_EQ(count_rated(late, span.start + Days{9}), 2u);
  EXPECT_EQ(count_rated(late, span.start + Days{10}), 3u);
  EXPECT_THROW(count_rated(late, span.end + Days{1}), std::out_of_range);

  const auto by_state = count_rated_by_state(late, span.end);
  EXPECT_EQ(by_state[1] + by_state[2] + by_state[3], 3u);
}

TEST(CountRated, MonotoneUnderAddingHistories) {
  const Span span{day(2007, 1, 1), day(2008, 12, 31)};
  std::mt19937_64 rng(3);
  std::vector<RatingHistory> histories;
  for (int k = 0; k < 30; ++k) {
    const Date start = span.start + Days{static_cast<long>(rng() % 700)};
    const Panel before(span, histories);
    histories.push_back(single("b" + std::to_string(k), start, static_cast<int>(rng() % 15)));
    const Panel after(span, histories);
    for (long d = 0; d < span.day_count(); d += 37) {
      EXPECT_LE(count_rated(before, span.start + Days{d}), count_rated(after, span.start + Days{d}));
    }
  }
}

TEST(Dates, ParseFormatAndCalendar) {
  EXPECT_EQ(format_date(*parse_date("2012-02-29")), "2012-02-29");
  EXPECT_FALSE(parse_date("2011-02-29"));
  EXPECT_FALSE(parse_date("2011-2-01"));
  EXPECT_FALSE(parse_date("20110201"));
  EXPECT_EQ(add_months(day(2007, 1, 31), 1), day(2007, 2, 28));
  EXPECT_EQ(add_months(day(2007, 12, 1), 1), day(2008, 1, 1));
  EXPECT_EQ(first_of_month_on_or_after(day(2007, 1, 2)), day(2007, 2, 1));
  EXPECT_EQ((Window{day(2007, 1, 1), day(2007, 1, 4)}.midpoint()), day(2007, 1, 2));
}
