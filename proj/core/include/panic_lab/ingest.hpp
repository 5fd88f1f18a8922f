#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "panic_lab/panel.hpp"

namespace panic_lab::ingest {

enum class PanelFormat { kWide, kLong };

struct IngestOptions {
  PanelFormat format = PanelFormat::kWide;
  std::string timestamp_format = "%Y-%m-%dT%H:%M:%S";
  bool drop_overnight = true;  // applied when converting to returns
  double min_coverage = 0.9;
  int forward_fill_limit = 2;

  void validate() const;
};

struct IngestReport {
  std::vector<std::string> dropped_symbols;
  std::map<std::string, double> coverage;  // every symbol seen in the file
  std::size_t filled_cells = 0;
  std::vector<std::string> warnings;
};

struct LoadedPanel {
  PricePanel panel;
  IngestReport report;
};

/// Reads a price panel from CSV. Wide: `timestamp,<SYM1>,<SYM2>,...`;
/// long: `timestamp,symbol,price`. Empty fields are missing cells.
LoadedPanel load_panel(const std::filesystem::path& path,
                       const IngestOptions& options = {});
LoadedPanel load_panel(std::istream& in, const IngestOptions& options = {});

struct ExtremeReturn {
  std::size_t row = 0;  // bar index of the later observation
  std::string symbol;
  double log_return = 0.0;
};

struct ValidationReport {
  std::map<std::string, double> coverage;
  std::size_t session_count = 0;
  std::map<std::size_t, std::size_t> session_lengths;  // bars -> sessions
  std::vector<ExtremeReturn> extreme_returns;
  std::vector<std::string> issues;
};

inline constexpr double kExtremeLogReturn = 0.5;

ValidationReport validate_panel(const PricePanel& panel);

/// Reads a wide return panel (as written by the simulator). Values must be
/// finite; sessions are assigned by calendar date.
ReturnPanel load_return_panel(const std::filesystem::path& path,
                              const std::string& timestamp_format =
                                  "%Y-%m-%dT%H:%M:%S");
ReturnPanel load_return_panel(std::istream& in,
                              const std::string& timestamp_format =
                                  "%Y-%m-%dT%H:%M:%S");

// Wide CSV writer matching the loader's input format.
void write_wide(std::ostream& out, const std::vector<Timestamp>& stamps,
                const std::vector<std::string>& symbols, const Matrix& values);

}  // namespace panic_lab::ingest
