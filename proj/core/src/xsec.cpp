#include "panic_lab/xsec.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "panic_lab/error.hpp"

namespace panic_lab::xsec {

namespace {

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

struct CentralMoments {
  double m2 = 0.0;
  double m4 = 0.0;
};

CentralMoments central_moments(std::span<const double> row) {
  const double mean = row_mean(row);
  CentralMoments m;
  for (double v : row) {
    const double d = v - mean;
    const double d2 = d * d;
    m.m2 += d2;
    m.m4 += d2 * d2;
  }
  const auto n = static_cast<double>(row.size());
  m.m2 /= n;
  m.m4 /= n;
  return m;
}

}  // namespace

double dispersion(std::span<const double> row) {
  if (row.size() < 2) throw InputError("dispersion: need N >= 2");
  return std::sqrt(central_moments(row).m2);
}

double xsec_kurtosis(std::span<const double> row) {
  if (row.size() < 4) throw InputError("xsec_kurtosis: need N >= 4");
  const auto m = central_moments(row);
  if (!(m.m2 > 0.0)) return kMissing;
  return m.m4 / (m.m2 * m.m2) - 3.0;
}

double sum_of_signs(std::span<const double> row) {
  if (row.empty()) return kMissing;
  long long total = 0;
  for (double v : row) total += sign_of(v);
  return static_cast<double>(total) / static_cast<double>(row.size());
}

double aic_signs(std::span<const double> row) {
  if (row.size() < 2) throw InputError("aic_signs: need N >= 2");
  // sum_{i<j} s_i s_j = ((sum s)^2 - sum s^2) / 2, exact in integers.
  long long net = 0;
  long long nonzero = 0;
  for (double v : row) {
    const int s = sign_of(v);
    net += s;
    nonzero += s * s;
  }
  const auto n = static_cast<long long>(row.size());
  const long long pair_sum2 = net * net - nonzero;  // twice the pair sum
  return static_cast<double>(pair_sum2) / static_cast<double>(n * (n - 1));
}

std::vector<double> aic_old(const ReturnPanel& panel, int window) {
  const std::size_t rows = panel.n_bars();
  const std::size_t n = panel.n_symbols();
  if (window < 2) throw InputError("aic_old: window must be >= 2");
  if (rows <= static_cast<std::size_t>(window)) {
    throw InputError("aic_old: need more bars than the window");
  }
  if (n < 2) throw InputError("aic_old: need N >= 2");

  const auto w = static_cast<std::size_t>(window);
  std::vector<double> out(rows, kMissing);
  std::vector<double> z(n);
  for (std::size_t t = w - 1; t < rows; ++t) {
    bool flat = false;
    for (std::size_t i = 0; i < n && !flat; ++i) {
      double mean = 0.0;
      for (std::size_t k = t + 1 - w; k <= t; ++k) mean += panel.returns(k, i);
      mean /= static_cast<double>(w);
      double ss = 0.0;
      for (std::size_t k = t + 1 - w; k <= t; ++k) {
        const double d = panel.returns(k, i) - mean;
        ss += d * d;
      }
      const double sd = std::sqrt(ss / static_cast<double>(w));
      // rounding leaves ss slightly above zero for a constant window
      double lo = panel.returns(t, i), hi = lo;
      for (std::size_t k = t + 1 - w; k <= t; ++k) {
        lo = std::min(lo, panel.returns(k, i));
        hi = std::max(hi, panel.returns(k, i));
      }
      if (lo == hi || !(sd > 0.0)) {
        flat = true;
        break;
      }
      z[i] = (panel.returns(t, i) - mean) / sd;
    }
    if (flat) continue;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double v : z) {
      sum += v;
      sum_sq += v * v;
    }
    const auto nn = static_cast<double>(n);
    out[t] = (sum * sum - sum_sq) / (nn * (nn - 1.0));
  }
  return out;
}

XsecSeries xsec_series(const ReturnPanel& panel) {
  panel.check();
  const std::size_t rows = panel.n_bars();
  if (panel.n_symbols() < 2) throw InputError("xsec_series: need N >= 2");
  const bool kurtosis_defined = panel.n_symbols() >= 4;

  XsecSeries out;
  out.timestamps = panel.timestamps;
  out.dispersion.resize(rows);
  out.kurtosis.resize(rows);
  out.s_values.resize(rows);
  out.aic.resize(rows);
  out.market.resize(rows);
  for (std::size_t t = 0; t < rows; ++t) {
    const auto row = panel.returns.row(t);
    out.dispersion[t] = dispersion(row);
    out.kurtosis[t] = kurtosis_defined ? xsec_kurtosis(row) : kMissing;
    out.s_values[t] = sum_of_signs(row);
    out.aic[t] = aic_signs(row);
    out.market[t] = row_mean(row);
  }
  return out;
}

SeasonalProfile seasonal_profile(std::span<const double> values,
                                 std::span<const Timestamp> timestamps) {
  if (values.size() != timestamps.size()) {
    throw InputError("seasonal_profile: values and timestamps differ in length");
  }
  if (values.empty()) throw InputError("seasonal_profile: empty series");
  std::map<std::int64_t, std::pair<double, std::size_t>> acc;
  for (std::size_t t = 0; t < values.size(); ++t) {
    if (is_missing(values[t])) continue;
    auto& [sum, count] = acc[timestamps[t].intraday_bin];
    sum += values[t];
    ++count;
  }
  SeasonalProfile out;
  for (const auto& [bin, sc] : acc) {
    out.bin_index.push_back(bin);
    out.mean_value.push_back(sc.first / static_cast<double>(sc.second));
    out.count.push_back(sc.second);
  }
  return out;
}

std::vector<double> deseasonalize(std::span<const double> values,
                                  std::span<const Timestamp> timestamps,
                                  const SeasonalProfile& profile) {
  if (values.size() != timestamps.size()) {
    throw InputError("deseasonalize: values and timestamps differ in length");
  }
  std::map<std::int64_t, double> by_bin;
  for (std::size_t k = 0; k < profile.bin_index.size(); ++k) {
    if (profile.mean_value[k] == 0.0) {
      throw InputError("deseasonalize: zero profile mean at bin " +
                       std::to_string(profile.bin_index[k]));
    }
    by_bin[profile.bin_index[k]] = profile.mean_value[k];
  }
  std::vector<double> out(values.size());
  for (std::size_t t = 0; t < values.size(); ++t) {
    const auto it = by_bin.find(timestamps[t].intraday_bin);
    if (it == by_bin.end()) {
      throw InputError("deseasonalize: profile has no bin " +
                       std::to_string(timestamps[t].intraday_bin));
    }
    out[t] = values[t] / it->second;
  }
  return out;
}

std::size_t session_count(std::span<const Timestamp> timestamps) {
  std::size_t sessions = 0;
  for (std::size_t t = 0; t < timestamps.size(); ++t) {
    if (t == 0 || timestamps[t].session_id != timestamps[t - 1].session_id) {
      ++sessions;
    }
  }
  return sessions;
}

}  // namespace panic_lab::xsec
