#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace panic_lab::csv {

// 17 significant digits: round-trips any IEEE-754 double. Missing (NaN)
// values become an empty field.
std::string format_double(double v);

std::vector<std::string> split_line(std::string_view line, char sep = ',');

// Parses a numeric field; empty text yields NaN. Throws InputError on junk.
double parse_double(std::string_view field);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line per row

  // Index of a named column; throws InputError if absent.
  [[nodiscard]] std::size_t column_index(std::string_view name) const;
  [[nodiscard]] std::vector<double> numeric_column(std::string_view name) const;
  [[nodiscard]] std::vector<std::string> text_column(std::string_view name) const;
};

// Reads a header + rows CSV. Rows whose field count differs from the header
// raise InputError with the line number.
Table read_table(std::istream& in);
Table read_table(const std::filesystem::path& path);

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void header(std::span<const std::string> names);
  void header(std::initializer_list<std::string_view> names);

  // Appends one field to the current row.
  Writer& field(std::string_view text);
  Writer& field(double v);
  Writer& field(long long v);
  Writer& field(int v) { return field(static_cast<long long>(v)); }
  Writer& field(std::size_t v) { return field(static_cast<long long>(v)); }
  void end_row();

 private:
  std::ostream& out_;
  bool row_started_ = false;
};

}  // namespace panic_lab::csv
