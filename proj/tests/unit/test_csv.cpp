#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "panic_lab/csv.hpp"
#include "panic_lab/error.hpp"

using namespace panic_lab;

TEST(Csv, DoublesRoundTripExactly) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> expo(-300, 300);
  std::normal_distribution<double> z;
  for (int k = 0; k < 10000; ++k) {
    const double v = z(rng) * std::pow(10.0, expo(rng));
    EXPECT_EQ(csv::parse_double(csv::format_double(v)), v);
  }
  EXPECT_EQ(csv::parse_double(csv::format_double(0.1)), 0.1);
}

TEST(Csv, MissingIsEmptyField) {
  EXPECT_EQ(csv::format_double(kMissing), "");
  EXPECT_TRUE(is_missing(csv::parse_double("")));
  EXPECT_THROW(csv::parse_double("1.5x"), InputError);
  EXPECT_THROW(csv::parse_double("abc"), InputError);
}

TEST(Csv, SplitKeepsEmptyFieldsAndStripsCr) {
  const auto f = csv::split_line("a,,c,\r");
  ASSERT_EQ(f.size(), 4u);
  EXPECT_EQ(f[1], "");
  EXPECT_EQ(f[3], "");
}

TEST(Csv, ReadTableReportsLineOfMalformedRow) {
  std::istringstream in("x,y\n1,2\n3\n");
  try {
    csv::read_table(in);
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Csv, WriterAndReaderAgree) {
  std::ostringstream out;
  csv::Writer w(out);
  w.header({"name", "value", "count"});
  w.field("a").field(1.25).field(3);
  w.end_row();
  w.field("b").field(kMissing).field(std::size_t{4});
  w.end_row();
  std::istringstream in(out.str());
  const auto t = csv::read_table(in);
  EXPECT_EQ(t.header, (std::vector<std::string>{"name", "value", "count"}));
  const auto v = t.numeric_column("value");
  EXPECT_EQ(v[0], 1.25);
  EXPECT_TRUE(is_missing(v[1]));
  EXPECT_EQ(t.text_column("name")[1], "b");
  EXPECT_THROW((void)t.column_index("nope"), InputError);
}
