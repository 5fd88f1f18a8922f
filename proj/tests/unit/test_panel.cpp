#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "panic_lab/error.hpp"
#include "panic_lab/panel.hpp"

using namespace panic_lab;

namespace {

PricePanel make_prices(std::vector<std::vector<double>> cols,
                       std::size_t bars_per_session = 0) {
  PricePanel p;
  const std::size_t rows = cols.front().size();
  p.prices = Matrix(rows, cols.size());
  for (std::size_t i = 0; i < cols.size(); ++i) {
    p.symbols.push_back("S" + std::to_string(i));
    for (std::size_t t = 0; t < rows; ++t) p.prices(t, i) = cols[i][t];
  }
  p.timestamps = synthetic_timestamps(rows, bars_per_session);
  return p;
}

}  // namespace

TEST(LogReturns, ConstantPriceGivesZeroReturns) {
  const auto r = log_returns(make_prices({{100, 100, 100}, {5, 5, 5}}), false);
  ASSERT_EQ(r.n_bars(), 2u);
  EXPECT_EQ(r.returns(0, 0), 0.0);
  EXPECT_EQ(r.returns(1, 0), 0.0);
}

TEST(LogReturns, TenPercentMove) {
  const auto r = log_returns(make_prices({{100, 110}, {1, 1}}), false);
  EXPECT_NEAR(r.returns(0, 0), 0.09531017980432493, 1e-15);
}

TEST(LogReturns, DropsRowsAcrossSessionBoundary) {
  // bars 0,1 on day one, bar 2 on day two
  const auto p = make_prices({{100, 101, 102}, {50, 51, 52}}, 2);
  EXPECT_EQ(log_returns(p, true).n_bars(), 1u);
  EXPECT_EQ(log_returns(p, false).n_bars(), 2u);
}

TEST(LogReturns, RejectsNonPositivePriceWithCoordinates) {
  auto p = make_prices({{100, 101}, {50, 51}});
  p.prices(1, 1) = 0.0;
  try {
    log_returns(p, false);
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("row 1, column 1"), std::string::npos);
  }
}

TEST(LogReturns, CumulativeSumReconstructsLogPrices) {
  std::mt19937_64 rng(3);
  std::lognormal_distribution<double> move(0.0, 0.05);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<std::vector<double>> cols(4, std::vector<double>(50));
    for (auto& c : cols) {
      double px = 100.0;
      for (double& v : c) v = px *= move(rng);
    }
    const auto p = make_prices(cols, 7);
    const auto r = log_returns(p, false);
    for (std::size_t i = 0; i < 4; ++i) {
      double y = std::log(p.prices(0, i));
      for (std::size_t t = 1; t < p.n_bars(); ++t) {
        y += r.returns(t - 1, i);
        const double truth = std::log(p.prices(t, i));
        EXPECT_NEAR(y, truth, 1e-12 * std::abs(truth));
      }
    }
  }
}

TEST(MarketReturn, Examples) {
  ReturnPanel p;
  p.returns = Matrix(3, 3);
  const double rows[3][3] = {{0.01, 0.03, 0.02}, {0.25, -0.25, 0.0}, {0.01, 0.02, 0.06}};
  for (int t = 0; t < 3; ++t) {
    for (int i = 0; i < 3; ++i) p.returns(t, i) = rows[t][i];
  }
  p.symbols = {"A", "B", "C"};
  p.timestamps = synthetic_timestamps(3, 0);
  const auto m = market_return(p);
  EXPECT_NEAR(m.values[0], 0.02, 1e-17);
  EXPECT_EQ(m.values[1], 0.0);
  EXPECT_NEAR(m.values[2], 0.03, 1e-17);
  EXPECT_NEAR(row_mean(std::vector<double>{0.01, 0.03}), 0.02, 1e-17);
}

TEST(MarketReturn, InvariantUnderColumnPermutation) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> z;
  ReturnPanel p;
  p.returns = Matrix(30, 8);
  for (std::size_t t = 0; t < 30; ++t) {
    for (std::size_t i = 0; i < 8; ++i) p.returns(t, i) = z(rng);
  }
  for (int i = 0; i < 8; ++i) p.symbols.push_back(std::to_string(i));
  p.timestamps = synthetic_timestamps(30, 0);
  auto q = p;
  std::vector<std::size_t> perm{3, 1, 7, 0, 6, 2, 5, 4};
  for (std::size_t t = 0; t < 30; ++t) {
    for (std::size_t i = 0; i < 8; ++i) q.returns(t, i) = p.returns(t, perm[i]);
  }
  const auto a = market_return(p).values;
  const auto b = market_return(q).values;
  for (std::size_t t = 0; t < 30; ++t) EXPECT_NEAR(a[t], b[t], 1e-15);
}

TEST(MarketReturn, EmptyPanelRejected) {
  EXPECT_THROW(market_return(ReturnPanel{}), InputError);
}

TEST(Timestamps, SyntheticSessionsMatchCalendarAssignment) {
  auto stamps = synthetic_timestamps(60, 26);
  const auto original = stamps;
  assign_sessions(stamps);
  EXPECT_EQ(stamps, original);
  EXPECT_EQ(stamps[25].session_id, 0);
  EXPECT_EQ(stamps[26].session_id, 1);
  EXPECT_EQ(stamps[26].intraday_bin, 0);
  EXPECT_EQ(stamps[59].intraday_bin, 7);
}

TEST(Timestamps, IsoRoundTrip) {
  for (std::int64_t t : {0LL, 946857600LL, 946857600LL + 3723, 1273161600LL + 52200}) {
    EXPECT_EQ(parse_time(format_iso(t)), t);
  }
  EXPECT_EQ(format_iso(946857600), "2000-01-03T00:00:00");
  EXPECT_EQ(parse_time("2010-05-06T14:45:00"), 1273157100);
}

TEST(Timestamps, MalformedTextRejected) {
  EXPECT_THROW(parse_time("2010-05-06 14:45"), InputError);
  EXPECT_THROW(parse_time("yesterday"), InputError);
}

TEST(PanelCheck, RejectsShapeErrors) {
  auto p = make_prices({{1, 2}, {3, 4}});
  p.symbols.pop_back();
  EXPECT_THROW(p.check(), InputError);
  auto q = make_prices({{1, 2}, {3, 4}});
  std::swap(q.timestamps[0], q.timestamps[1]);
  EXPECT_THROW(q.check(), InputError);
}
