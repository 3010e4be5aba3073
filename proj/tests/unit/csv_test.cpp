#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "alf/csv.hpp"
#include "alf/errors.hpp"

namespace {

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(alf::format_number(0.1), "0.1");
  EXPECT_EQ(alf::format_number(2.25), "2.25");
  EXPECT_EQ(alf::format_number(3.0), "3");
  const double x = 1.0 / 3.0;
  EXPECT_EQ(alf::parse_number(alf::format_number(x)), x);
}

TEST(FormatNumber, SentinelsForNonFinite) {
  EXPECT_EQ(alf::format_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(alf::format_number(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(alf::format_number(std::nan("")), "nan");
  EXPECT_TRUE(std::isinf(alf::parse_number("inf")));
  EXPECT_THROW(alf::parse_number("1.5x"), alf::InvalidInput);
  EXPECT_THROW(alf::parse_number(""), alf::InvalidInput);
}

TEST(CsvTable, QuotesAndParsesBack) {
  alf::CsvTable t;
  t.header = {"family", "params"};
  t.rows = {{"agce", "a=1,q=2"}, {"x\"y", ""}};
  const std::string text = t.to_string();
  EXPECT_EQ(text, "family,params\nagce,\"a=1,q=2\"\n\"x\"\"y\",\n");
  const auto back = alf::parse_csv(text);
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
}

TEST(WriteFileAtomic, WritesWholeFile) {
  const auto dir = std::filesystem::temp_directory_path() / "alf_csv_test";
  std::filesystem::remove_all(dir);
  const auto path = dir / "nested" / "out.csv";
  alf::write_file_atomic(path, "a,b\n1,2\n");
  EXPECT_EQ(alf::read_file(path), "a,b\n1,2\n");
  EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  std::filesystem::remove_all(dir);
}

}  // namespace
