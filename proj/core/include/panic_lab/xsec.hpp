#pragma once

#include <span>
#include <vector>

#include "panic_lab/panel.hpp"

namespace panic_lab::xsec {

// Per-timestamp panic signatures. Undefined entries are NaN (kMissing).
struct XsecSeries {
  std::vector<Timestamp> timestamps;
  std::vector<double> dispersion;
  std::vector<double> kurtosis;  // excess
  std::vector<double> s_values;
  std::vector<double> aic;
  std::vector<double> market;

  [[nodiscard]] std::size_t size() const noexcept { return timestamps.size(); }
};

struct SeasonalProfile {
  std::vector<std::int64_t> bin_index;
  std::vector<double> mean_value;
  std::vector<std::size_t> count;
};

/// Population standard deviation across the row. Requires N >= 2.
double dispersion(std::span<const double> row);

/// Excess kurtosis m4 / m2^2 - 3 from population central moments.
/// Requires N >= 4; returns NaN when the row has zero dispersion.
double xsec_kurtosis(std::span<const double> row);

/// Mean of sign(r_i), with sign(0) = 0.
double sum_of_signs(std::span<const double> row);

/// Average pairwise product of return signs over all i < j.
double aic_signs(std::span<const double> row);

/// Average pairwise product of returns standardized by each stock's trailing
/// mean and standard deviation over `window` bars ending at t (inclusive).
/// Entries before the first full window, or with a flat stock in the window,
/// are NaN.
std::vector<double> aic_old(const ReturnPanel& panel, int window);

XsecSeries xsec_series(const ReturnPanel& panel);

/// Mean of `values` grouped by intraday bin; NaN values are skipped.
SeasonalProfile seasonal_profile(std::span<const double> values,
                                 std::span<const Timestamp> timestamps);

/// value[t] / profile mean of bin(t). NaN values pass through.
std::vector<double> deseasonalize(std::span<const double> values,
                                  std::span<const Timestamp> timestamps,
                                  const SeasonalProfile& profile);

std::size_t session_count(std::span<const Timestamp> timestamps);

}  // namespace panic_lab::xsec
