#include "panic_ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>

#include "panic_lab/xsec.hpp"

namespace panic_lab::acceptance {

namespace {

double mean_of(std::span<const double> v) {
  double sum = 0.0;
  std::size_t n = 0;
  for (double x : v) {
    if (std::isnan(x)) continue;
    sum += x;
    ++n;
  }
  return n ? sum / static_cast<double>(n) : std::nan("");
}

std::span<const double> slice(const std::vector<double>& v, int begin, int end) {
  return std::span<const double>(v).subspan(static_cast<std::size_t>(begin),
                                            static_cast<std::size_t>(end - begin));
}

double bc_or_nan(std::span<const double> s) {
  try {
    return mem::bimodality_coefficient(s);
  } catch (...) {
    return std::nan("");
  }
}

}  // namespace

sim::SimConfig reference_config(std::uint64_t seed) {
  sim::SimConfig c;
  c.phase_coupling = kReferenceCoupling;
  c.vol_smooth = kReferenceVolSmooth;
  c.seed = seed;
  return c;
}

std::vector<sim::ShockEvent> reference_shocks() {
  sim::ShockEvent endo;
  endo.kind = sim::ShockKind::kEndogenous;
  endo.start = kEndoStart;
  endo.stock_index = 0;
  endo.magnitude_std = kEndoMagnitude;
  sim::ShockEvent exo;
  exo.kind = sim::ShockKind::kExogenous;
  exo.start = kExoStart;
  exo.duration = kExoDuration;
  exo.sigma_shock = kSigmaShock;
  return {endo, exo};
}

RunOutcome evaluate_run(const sim::SimResult& result) {
  const auto x = xsec::xsec_series(result.returns);
  RunOutcome o;

  const int e0 = kExoStart, e1 = kExoStart + kExoDuration;
  const int p0 = kExoStart - kExoDuration;
  o.exo_dispersion_ratio =
      mean_of(slice(x.dispersion, e0, e1)) / mean_of(slice(x.dispersion, p0, e0));
  o.exo_disp_kurt_corr =
      mem::pearson(slice(x.dispersion, e0, e1), slice(x.kurtosis, e0, e1));
  o.exo_bc_window = bc_or_nan(slice(x.s_values, e0, e1));
  o.exo_bc_pre = bc_or_nan(slice(x.s_values, p0, e0));

  const int n0 = kEndoStart, n1 = kEndoStart + kEndoWindow;
  o.endo_dispersion_ratio = mean_of(slice(x.dispersion, n0, n1)) /
                            mean_of(slice(x.dispersion, n0 - kEndoWindow, n0));
  o.endo_disp_kurt_corr =
      mem::pearson(slice(x.dispersion, n0, n1), slice(x.kurtosis, n0, n1));

  // Bins of width 0.25 std have an edge at exactly 1 std, so splitting the
  // binned curve at center 1 equals splitting the raw observations.
  const auto curve = mem::aic_vs_volatility(x.aic, x.market, 0.25);
  double hi = 0.0, lo = 0.0;
  std::size_t nh = 0, nl = 0;
  for (std::size_t k = 0; k < curve.bin_centers.size(); ++k) {
    const double w = static_cast<double>(curve.counts[k]);
    if (curve.bin_centers[k] > 1.0) {
      hi += curve.means[k] * w;
      nh += curve.counts[k];
    } else {
      lo += curve.means[k] * w;
      nl += curve.counts[k];
    }
  }
  o.aic_high_vol = nh ? hi / static_cast<double>(nh) : std::nan("");
  o.aic_low_vol = nl ? lo / static_cast<double>(nl) : std::nan("");

  const auto vg = mem::variogram(x.aic, kVariogramMaxLag);
  try {
    const auto fit = mem::fit_power_law(vg, 1, kVariogramMaxLag);
    o.variogram_slope = fit.params.at("slope");
    o.variogram_gamma = fit.params.at("gamma");
  } catch (...) {
    o.variogram_slope = o.variogram_gamma = std::nan("");
  }
  o.leverage = mem::leverage(x.aic, x.market, kLeverageMaxLag);
  return o;
}

EnsembleSummary run_ensemble(const sim::SimConfig& base, int n_seeds,
                             std::uint64_t first_seed, unsigned threads) {
  EnsembleSummary out;
  const auto shocks = reference_shocks();
  for (int k = 0; k < n_seeds; ++k) {
    auto config = base;
    config.seed = first_seed + static_cast<std::uint64_t>(k);
    out.runs.push_back(evaluate_run(sim::simulate(config, shocks, threads)));
  }
  auto& pooled = out.pooled_leverage;
  pooled = out.runs.front().leverage;
  for (std::size_t j = 0; j < pooled.size(); ++j) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& r : out.runs) {
      const auto v = r.leverage.at(pooled.lags[j]);
      if (v) {
        sum += *v;
        ++count;
      }
    }
    pooled.values[j] = sum / static_cast<double>(count);
    pooled.counts[j] = count;
  }
  return out;
}

namespace {

template <typename Pred>
int count_runs(const std::vector<RunOutcome>& runs, Pred pred) {
  return static_cast<int>(std::count_if(runs.begin(), runs.end(), pred));
}

}  // namespace

int EnsembleSummary::exo_dispersion_rises() const {
  return count_runs(runs, [](const RunOutcome& r) { return r.exo_dispersion_ratio > 1.5; });
}
int EnsembleSummary::exo_corr_negative() const {
  return count_runs(runs, [](const RunOutcome& r) { return r.exo_disp_kurt_corr < 0.0; });
}
int EnsembleSummary::exo_bimodal_window() const {
  return count_runs(runs, [](const RunOutcome& r) {
    return r.exo_bc_window > mem::kBimodalThreshold;
  });
}
int EnsembleSummary::exo_unimodal_pre() const {
  return count_runs(runs, [](const RunOutcome& r) {
    return r.exo_bc_pre < mem::kBimodalThreshold;
  });
}
int EnsembleSummary::endo_dispersion_rises() const {
  return count_runs(runs, [](const RunOutcome& r) { return r.endo_dispersion_ratio > 1.0; });
}
int EnsembleSummary::endo_corr_nonnegative() const {
  return count_runs(runs, [](const RunOutcome& r) { return r.endo_disp_kurt_corr >= 0.0; });
}
int EnsembleSummary::aic_vol_monotone() const {
  return count_runs(runs, [](const RunOutcome& r) { return r.aic_high_vol > r.aic_low_vol; });
}
int EnsembleSummary::memory_present() const {
  return count_runs(runs, [](const RunOutcome& r) {
    return r.variogram_slope > 0.0 && r.variogram_gamma > 0.001 &&
           r.variogram_gamma < 0.5;
  });
}

}  // namespace panic_lab::acceptance
