#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace panic_lab::mem {

// A statistic indexed by positive integer lag. Lags with too few valid pairs
// are omitted, so `lags` may have gaps.
struct LagFunction {
  std::vector<int> lags;
  std::vector<double> values;
  std::vector<std::size_t> counts;

  [[nodiscard]] std::size_t size() const noexcept { return lags.size(); }
  [[nodiscard]] std::optional<double> at(int lag) const;
};

struct FitResult {
  std::map<std::string, double> params;
  double residual_rms = 0.0;
  std::pair<int, int> lag_range{0, 0};
  std::vector<int> excluded_lags;
  // fit_exponential: slope within 1e-12 of zero, so T is reported as +inf.
  bool infinite_timescale = false;
  // fit_exponential: -1 when the fit ran on -values, +1 otherwise.
  int sign = -1;
};

struct BinnedCurve {
  std::vector<double> bin_centers;
  std::vector<double> means;
  std::vector<std::size_t> counts;
};

struct Histogram {
  std::vector<double> edges;  // n_bins + 1
  std::vector<std::size_t> counts;
};

/// Mean squared increment <(x(t) - x(t+tau))^2> for tau = 1..max_lag.
LagFunction variogram(std::span<const double> series, int max_lag);

/// Sample autocorrelation for tau = 1..max_lag, normalized by the overall
/// variance. Throws on a constant series.
LagFunction autocorrelation(std::span<const double> series, int max_lag);

/// Least-squares line through (log lag, log value) for lags in
/// [lag_min, lag_max]. params: gamma = |slope|, slope, intercept.
FitResult fit_power_law(const LagFunction& fn, int lag_min, int lag_max);

/// <aic(t + tau) * r(t)> for tau = 1..max_lag. NaN entries are skipped.
LagFunction leverage(std::span<const double> correlation_series,
                     std::span<const double> market_returns, int max_lag);

/// Fits L(tau) = -A exp(-tau / T) in log space. All values must share one
/// sign; params: A, T, slope, intercept.
FitResult fit_exponential(const LagFunction& fn);

/// Drops lags whose value is >= 0 (reported in excluded_lags) and fits the
/// remaining negative part with fit_exponential.
FitResult fit_exponential_negative(const LagFunction& fn);

/// Mean AIC in bins of |r_M| measured in units of its sample standard
/// deviation. Empty bins are omitted.
BinnedCurve aic_vs_volatility(std::span<const double> aic,
                              std::span<const double> market_returns,
                              double bin_width_std = 0.25);

/// Sarle's bimodality coefficient (g^2 + 1) / (k + 3 (n-1)^2 / ((n-2)(n-3)))
/// with bias-corrected sample skewness g and excess kurtosis k.
double bimodality_coefficient(std::span<const double> samples);

inline constexpr double kBimodalThreshold = 5.0 / 9.0;

/// Uniform-width histogram over [lo, hi]; the top edge is inclusive.
Histogram histogram(std::span<const double> samples, int n_bins,
                    double lo = -1.0, double hi = 1.0);

/// Pearson correlation over pairs where both values are present.
double pearson(std::span<const double> x, std::span<const double> y);

}  // namespace panic_lab::mem
