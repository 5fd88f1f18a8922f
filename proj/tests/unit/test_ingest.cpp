#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "panic_lab/error.hpp"
#include "panic_lab/ingest.hpp"

using namespace panic_lab;
using namespace panic_lab::ingest;

namespace {

LoadedPanel load(const std::string& text, IngestOptions options = {}) {
  std::istringstream in(text);
  return load_panel(in, options);
}

std::string error_of(const std::string& text, IngestOptions options = {}) {
  try {
    load(text, options);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(LoadPanel, WellFormedWide) {
  const auto p = load(
      "timestamp,AAA,BBB\n"
      "2010-05-06T09:30:00,10,20\n"
      "2010-05-06T09:35:00,11,21\n"
      "2010-05-07T09:30:00,12,22\n");
  EXPECT_EQ(p.panel.n_bars(), 3u);
  EXPECT_EQ(p.panel.symbols, (std::vector<std::string>{"AAA", "BBB"}));
  EXPECT_EQ(p.panel.prices(2, 1), 22.0);
  EXPECT_EQ(p.panel.timestamps[1].intraday_bin, 1);
  EXPECT_EQ(p.panel.timestamps[2].session_id, 1);
  EXPECT_EQ(p.panel.timestamps[2].intraday_bin, 0);
  EXPECT_TRUE(p.report.warnings.empty());
}

TEST(LoadPanel, LowCoverageSymbolDropped) {
  const auto p = load(
      "timestamp,A,B,C\n"
      "2010-05-06T09:30:00,1,2,3\n"
      "2010-05-06T09:35:00,1,2,\n"
      "2010-05-06T09:40:00,1,2,3\n"
      "2010-05-06T09:45:00,1,2,\n");
  EXPECT_EQ(p.panel.symbols, (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(p.report.dropped_symbols, (std::vector<std::string>{"C"}));
  EXPECT_DOUBLE_EQ(p.report.coverage.at("C"), 0.5);
  ASSERT_EQ(p.report.warnings.size(), 1u);
  EXPECT_NE(p.report.warnings[0].find("C"), std::string::npos);
}

TEST(LoadPanel, ForwardFillWithinLimit) {
  IngestOptions o;
  o.forward_fill_limit = 1;
  o.min_coverage = 0.5;
  const auto p = load(
      "timestamp,A,B\n"
      "2010-05-06T09:30:00,10,20\n"
      "2010-05-06T09:35:00,,21\n"
      "2010-05-06T09:40:00,12,22\n",
      o);
  EXPECT_EQ(p.panel.prices(1, 0), 10.0);
  EXPECT_EQ(p.report.filled_cells, 1u);
}

TEST(LoadPanel, ErrorsCarryLineNumbers) {
  IngestOptions o;
  o.forward_fill_limit = 1;
  o.min_coverage = 0.1;
  EXPECT_NE(error_of("timestamp,A,B\n"
                     "2010-05-06T09:30:00,10,20\n"
                     "2010-05-06T09:35:00,,21\n"
                     "2010-05-06T09:40:00,,22\n",
                     o)
                .find("line 4"),
            std::string::npos);
  EXPECT_NE(error_of("timestamp,A,B\n"
                     "2010-05-06T09:30:00,10,20\n"
                     "2010-05-06T09:30:00,11,21\n")
                .find("line 3"),
            std::string::npos);
  EXPECT_NE(error_of("timestamp,A,B\n"
                     "2010-05-06T09:30:00,10,20\n"
                     "2010-05-06T09:35:00,-1,21\n")
                .find("line 3"),
            std::string::npos);
  EXPECT_NE(error_of("timestamp,A,B\n"
                     "2010-05-06T09:30:00,10,20\n"
                     "not-a-time,10,21\n")
                .find("line 3"),
            std::string::npos);
  EXPECT_NE(error_of("timestamp,A,B\n"
                     "2010-05-06T09:30:00,,20\n"
                     "2010-05-06T09:35:00,10,21\n",
                     o)
                .find("line 2"),
            std::string::npos);
  EXPECT_FALSE(error_of("stamp,A\n1,2\n").empty());
}

TEST(LoadPanel, LongFormatPivots) {
  IngestOptions o;
  o.format = PanelFormat::kLong;
  const auto p = load(
      "timestamp,symbol,price\n"
      "2010-05-06T09:35:00,BBB,21\n"
      "2010-05-06T09:30:00,AAA,10\n"
      "2010-05-06T09:30:00,BBB,20\n"
      "2010-05-06T09:35:00,AAA,11\n",
      o);
  // columns follow first appearance in the file
  EXPECT_EQ(p.panel.symbols, (std::vector<std::string>{"BBB", "AAA"}));
  EXPECT_EQ(p.panel.n_bars(), 2u);
  EXPECT_EQ(p.panel.prices(0, 1), 10.0);
  EXPECT_EQ(p.panel.prices(1, 0), 21.0);

  EXPECT_NE(error_of("timestamp,symbol,price\n"
                     "2010-05-06T09:30:00,AAA,10\n"
                     "2010-05-06T09:30:00,BBB,20\n"
                     "2010-05-06T09:30:00,AAA,11\n",
                     o)
                .find("duplicate"),
            std::string::npos);
}

TEST(LoadPanel, OptionsValidated) {
  IngestOptions o;
  o.min_coverage = 0.0;
  EXPECT_THROW(o.validate(), InputError);
  o.min_coverage = 0.9;
  o.forward_fill_limit = -1;
  EXPECT_THROW(o.validate(), InputError);
  EXPECT_THROW(load_panel(std::filesystem::path("/nonexistent/panel.csv")), IoError);
}

TEST(ValidatePanel, Examples) {
  PricePanel p;
  p.symbols = {"A", "B"};
  p.prices = Matrix(52, 2, 100.0);
  p.timestamps = synthetic_timestamps(52, 26);
  const auto clean = validate_panel(p);
  EXPECT_TRUE(clean.issues.empty());
  EXPECT_EQ(clean.session_count, 2u);
  EXPECT_EQ(clean.session_lengths, (std::map<std::size_t, std::size_t>{{26, 2}}));

  p.prices(10, 1) = 1000.0;
  const auto spiked = validate_panel(p);
  ASSERT_EQ(spiked.extreme_returns.size(), 2u);
  EXPECT_EQ(spiked.extreme_returns[0].row, 10u);
  EXPECT_EQ(spiked.extreme_returns[0].symbol, "B");
  EXPECT_FALSE(spiked.issues.empty());
}

TEST(WriteWide, RoundTripAndDeterminism) {
  std::mt19937_64 rng(1);
  std::lognormal_distribution<double> px(4.0, 0.5);
  for (int rep = 0; rep < 10; ++rep) {
    PricePanel p;
    p.symbols = {"X", "Y", "Z"};
    p.prices = Matrix(40, 3);
    for (std::size_t t = 0; t < 40; ++t) {
      for (std::size_t i = 0; i < 3; ++i) p.prices(t, i) = px(rng);
    }
    p.timestamps = synthetic_timestamps(40, 13);
    std::ostringstream out;
    write_wide(out, p.timestamps, p.symbols, p.prices);
    const auto a = load(out.str());
    const auto b = load(out.str());
    EXPECT_EQ(a.panel, p);
    EXPECT_EQ(a.panel, b.panel);
  }
}

TEST(LoadReturnPanel, ReadsSimulatorOutput) {
  std::istringstream in(
      "timestamp,A,B\n"
      "2000-01-03T00:00:00,0.01,-0.02\n"
      "2000-01-03T00:05:00,0,0.5\n");
  const auto r = load_return_panel(in);
  EXPECT_EQ(r.n_bars(), 2u);
  EXPECT_EQ(r.returns(1, 1), 0.5);
  std::istringstream missing("timestamp,A,B\n2000-01-03T00:00:00,,1\n");
  EXPECT_THROW(load_return_panel(missing), InputError);
}
