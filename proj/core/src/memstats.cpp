#include "panic_lab/memstats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "panic_lab/error.hpp"

namespace panic_lab::mem {

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
};

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double r = y[k] - (f.intercept + f.slope * x[k]);
    ss += r * r;
  }
  f.residual_rms = std::sqrt(ss / n);
  return f;
}

void check_lag_args(std::size_t length, int max_lag) {
  if (max_lag < 1) throw InputError("max_lag must be >= 1");
  if (length <= static_cast<std::size_t>(max_lag)) {
    throw InputError("series length must exceed max_lag");
  }
}

}  // namespace

std::optional<double> LagFunction::at(int lag) const {
  for (std::size_t k = 0; k < lags.size(); ++k) {
    if (lags[k] == lag) return values[k];
  }
  return std::nullopt;
}

LagFunction variogram(std::span<const double> series, int max_lag) {
  check_lag_args(series.size(), max_lag);
  LagFunction out;
  for (int tau = 1; tau <= max_lag; ++tau) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t t = 0; t + tau < series.size(); ++t) {
      const double a = series[t];
      const double b = series[t + tau];
      if (is_missing(a) || is_missing(b)) continue;
      sum += (a - b) * (a - b);
      ++count;
    }
    if (count < 2) continue;
    out.lags.push_back(tau);
    out.values.push_back(sum / static_cast<double>(count));
    out.counts.push_back(count);
  }
  return out;
}

LagFunction autocorrelation(std::span<const double> series, int max_lag) {
  check_lag_args(series.size(), max_lag);
  double mean = 0.0;
  std::size_t valid = 0;
  for (double v : series) {
    if (is_missing(v)) continue;
    mean += v;
    ++valid;
  }
  if (valid < 2) throw InputError("autocorrelation: fewer than 2 values");
  mean /= static_cast<double>(valid);
  double var = 0.0;
  for (double v : series) {
    if (!is_missing(v)) var += (v - mean) * (v - mean);
  }
  var /= static_cast<double>(valid);
  if (!(var > 0.0)) throw InputError("autocorrelation: zero variance");

  LagFunction out;
  for (int tau = 1; tau <= max_lag; ++tau) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t t = 0; t + tau < series.size(); ++t) {
      const double a = series[t];
      const double b = series[t + tau];
      if (is_missing(a) || is_missing(b)) continue;
      sum += (a - mean) * (b - mean);
      ++count;
    }
    if (count < 2) continue;
    out.lags.push_back(tau);
    out.values.push_back(sum / static_cast<double>(count) / var);
    out.counts.push_back(count);
  }
  return out;
}

FitResult fit_power_law(const LagFunction& fn, int lag_min, int lag_max) {
  std::vector<double> x, y;
  for (std::size_t k = 0; k < fn.size(); ++k) {
    const int lag = fn.lags[k];
    if (lag < lag_min || lag > lag_max) continue;
    if (!(fn.values[k] > 0.0)) {
      throw InputError("fit_power_law: non-positive value at lag " +
                       std::to_string(lag));
    }
    x.push_back(std::log(static_cast<double>(lag)));
    y.push_back(std::log(fn.values[k]));
  }
  if (x.size() < 3) {
    throw InputError("fit_power_law: fewer than 3 lags in range");
  }
  const auto line = least_squares(x, y);
  FitResult out;
  out.params["slope"] = line.slope;
  out.params["intercept"] = line.intercept;
  out.params["gamma"] = std::abs(line.slope);
  out.residual_rms = line.residual_rms;
  out.lag_range = {static_cast<int>(std::lround(std::exp(x.front()))),
                   static_cast<int>(std::lround(std::exp(x.back())))};
  out.sign = line.slope < 0.0 ? -1 : 1;
  return out;
}

LagFunction leverage(std::span<const double> correlation_series,
                     std::span<const double> market_returns, int max_lag) {
  if (correlation_series.size() != market_returns.size()) {
    throw InputError("leverage: series lengths differ");
  }
  check_lag_args(market_returns.size(), max_lag);
  LagFunction out;
  for (int tau = 1; tau <= max_lag; ++tau) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t t = 0; t + tau < market_returns.size(); ++t) {
      const double c = correlation_series[t + tau];
      const double r = market_returns[t];
      if (is_missing(c) || is_missing(r)) continue;
      sum += c * r;
      ++count;
    }
    if (count == 0) continue;
    out.lags.push_back(tau);
    out.values.push_back(sum / static_cast<double>(count));
    out.counts.push_back(count);
  }
  return out;
}

FitResult fit_exponential(const LagFunction& fn) {
  if (fn.size() < 3) throw InputError("fit_exponential: need >= 3 lags");
  bool any_neg = false, any_pos = false;
  std::vector<int> bad;
  for (std::size_t k = 0; k < fn.size(); ++k) {
    if (fn.values[k] < 0.0) any_neg = true;
    if (fn.values[k] > 0.0) any_pos = true;
    if (fn.values[k] == 0.0) bad.push_back(fn.lags[k]);
  }
  if ((any_neg && any_pos) || !bad.empty()) {
    std::string msg = "fit_exponential: values change sign";
    if (!bad.empty()) msg += " (zero at lag " + std::to_string(bad[0]) + ")";
    throw InputError(msg + "; use fit_exponential_negative to drop lags");
  }
  const int sign = any_neg ? -1 : 1;
  std::vector<double> x, y;
  for (std::size_t k = 0; k < fn.size(); ++k) {
    x.push_back(static_cast<double>(fn.lags[k]));
    y.push_back(std::log(sign * fn.values[k]));
  }
  const auto line = least_squares(x, y);
  FitResult out;
  out.sign = sign;
  out.params["slope"] = line.slope;
  out.params["intercept"] = line.intercept;
  out.params["A"] = std::exp(line.intercept);
  out.infinite_timescale = std::abs(line.slope) <= 1e-12;
  out.params["T"] = out.infinite_timescale
                        ? std::numeric_limits<double>::infinity()
                        : -1.0 / line.slope;
  out.residual_rms = line.residual_rms;
  out.lag_range = {fn.lags.front(), fn.lags.back()};
  return out;
}

FitResult fit_exponential_negative(const LagFunction& fn) {
  LagFunction kept;
  std::vector<int> excluded;
  for (std::size_t k = 0; k < fn.size(); ++k) {
    if (fn.values[k] < 0.0) {
      kept.lags.push_back(fn.lags[k]);
      kept.values.push_back(fn.values[k]);
      kept.counts.push_back(fn.counts[k]);
    } else {
      excluded.push_back(fn.lags[k]);
    }
  }
  if (kept.size() < 3) {
    throw InputError("fit_exponential: fewer than 3 negative lags (" +
                     std::to_string(excluded.size()) + " excluded)");
  }
  auto out = fit_exponential(kept);
  out.excluded_lags = std::move(excluded);
  return out;
}

BinnedCurve aic_vs_volatility(std::span<const double> aic,
                              std::span<const double> market_returns,
                              double bin_width_std) {
  if (aic.size() != market_returns.size()) {
    throw InputError("aic_vs_volatility: series lengths differ");
  }
  if (!(bin_width_std > 0.0)) {
    throw InputError("aic_vs_volatility: bin width must be > 0");
  }
  std::vector<double> vol;
  vol.reserve(market_returns.size());
  for (double r : market_returns) vol.push_back(std::abs(r));

  double mean = 0.0;
  std::size_t n = 0;
  for (std::size_t t = 0; t < vol.size(); ++t) {
    if (is_missing(vol[t]) || is_missing(aic[t])) continue;
    mean += vol[t];
    ++n;
  }
  if (n < 2) throw InputError("aic_vs_volatility: fewer than 2 observations");
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t t = 0; t < vol.size(); ++t) {
    if (is_missing(vol[t]) || is_missing(aic[t])) continue;
    ss += (vol[t] - mean) * (vol[t] - mean);
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) {
    throw InputError("aic_vs_volatility: market volatility has zero spread");
  }

  std::map<long long, std::pair<double, std::size_t>> bins;
  for (std::size_t t = 0; t < vol.size(); ++t) {
    if (is_missing(vol[t]) || is_missing(aic[t])) continue;
    const auto b = static_cast<long long>(std::floor(vol[t] / sd / bin_width_std));
    auto& [sum, count] = bins[b];
    sum += aic[t];
    ++count;
  }
  BinnedCurve out;
  for (const auto& [b, sc] : bins) {
    out.bin_centers.push_back((static_cast<double>(b) + 0.5) * bin_width_std);
    out.means.push_back(sc.first / static_cast<double>(sc.second));
    out.counts.push_back(sc.second);
  }
  return out;
}

double bimodality_coefficient(std::span<const double> samples) {
  std::vector<double> xs;
  xs.reserve(samples.size());
  for (double v : samples) {
    if (!is_missing(v)) xs.push_back(v);
  }
  const auto n = static_cast<double>(xs.size());
  if (xs.size() < 4) throw InputError("bimodality_coefficient: need n >= 4");
  double mean = 0.0;
  for (double v : xs) mean += v;
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : xs) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  if (*lo == *hi || !(m2 > 0.0)) {
    throw InputError("bimodality_coefficient: zero variance");
  }
  const double g1 = m3 / std::pow(m2, 1.5);
  const double g2 = m4 / (m2 * m2) - 3.0;
  const double skew = std::sqrt(n * (n - 1.0)) / (n - 2.0) * g1;
  const double kurt =
      (n - 1.0) / ((n - 2.0) * (n - 3.0)) * ((n + 1.0) * g2 + 6.0);
  return (skew * skew + 1.0) /
         (kurt + 3.0 * (n - 1.0) * (n - 1.0) / ((n - 2.0) * (n - 3.0)));
}

Histogram histogram(std::span<const double> samples, int n_bins, double lo,
                    double hi) {
  if (n_bins < 2) throw InputError("histogram: need n_bins >= 2");
  if (!(hi > lo)) throw InputError("histogram: empty range");
  Histogram out;
  out.edges.resize(static_cast<std::size_t>(n_bins) + 1);
  for (int k = 0; k <= n_bins; ++k) {
    out.edges[k] = lo + (hi - lo) * static_cast<double>(k) / n_bins;
  }
  out.counts.assign(static_cast<std::size_t>(n_bins), 0);
  const double width = (hi - lo) / n_bins;
  for (double v : samples) {
    if (is_missing(v) || v < lo || v > hi) continue;
    auto b = static_cast<int>(std::floor((v - lo) / width));
    if (b >= n_bins) b = n_bins - 1;
    ++out.counts[b];
  }
  return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("pearson: lengths differ");
  double mx = 0.0, my = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (is_missing(x[k]) || is_missing(y[k])) continue;
    mx += x[k];
    my += y[k];
    ++n;
  }
  if (n < 2) return kMissing;
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (is_missing(x[k]) || is_missing(y[k])) continue;
    sxx += (x[k] - mx) * (x[k] - mx);
    syy += (y[k] - my) * (y[k] - my);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) return kMissing;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace panic_lab::mem
