#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace panic_lab::cli {

struct SimulateArgs {
  std::filesystem::path config;  // empty: all defaults
  std::filesystem::path out;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
};

struct AnalyzeArgs {
  std::filesystem::path panel;
  std::filesystem::path out;
  bool returns = false;  // panel holds returns (simulate output), not prices
  bool long_format = false;
  bool deseasonalize = false;
  int aic_old_window = 0;  // 0: skip
  double min_coverage = 0.9;
  int forward_fill_limit = 2;
  bool keep_overnight = false;
  unsigned threads = 1;
};

struct VariogramArgs {
  std::filesystem::path xsec;
  std::filesystem::path out;
  std::string column = "aic";
  int max_lag = 100;
  int fit_min = 1;
  int fit_max = 100;
};

struct LeverageArgs {
  std::filesystem::path xsec;
  std::filesystem::path out;
  int max_lag = 50;
  bool normalize = false;
};

struct AicVolArgs {
  std::filesystem::path xsec;
  std::filesystem::path out;
  double bin_width = 0.25;
};

struct ReportArgs {
  std::filesystem::path xsec;
  std::filesystem::path out;
  std::vector<std::string> windows;  // name=start:end, half-open row ranges
  int histogram_bins = 20;
};

struct Window {
  std::string name;
  std::size_t begin = 0;
  std::size_t end = 0;
};

Window parse_window(const std::string& text, std::size_t n_rows);

// Each command throws InputError / IoError; main maps them to exit codes.
void run_simulate(const SimulateArgs& args);
void run_analyze(const AnalyzeArgs& args);
void run_variogram(const VariogramArgs& args);
void run_leverage(const LeverageArgs& args);
void run_aicvol(const AicVolArgs& args);
void run_report(const ReportArgs& args);

// --threads value if given, else PANIC_LAB_THREADS, else 1. 0 means auto.
unsigned threads_from(std::optional<unsigned> flag);

}  // namespace panic_lab::cli
