#include "panic_lab/simengine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "panic_lab/error.hpp"
#include "panic_lab/parallel.hpp"

namespace panic_lab::sim {

namespace {

constexpr std::uint32_t kReturnStream = 0;
constexpr std::uint32_t kStateStream = 1;
constexpr std::uint32_t kCommonLane = 0xFFFFFFFFu;

void require(bool ok, const char* field, const std::string& what) {
  if (!ok) throw InputError(std::string(field) + ": " + what);
}

// Trailing-window statistics over the market-return history.
struct MarketHistory {
  std::vector<double> values;

  double mean_abs(int window) const {
    const auto n = std::min<std::size_t>(values.size(), window);
    if (n == 0) return 0.0;
    double sum = 0.0;
    for (std::size_t k = values.size() - n; k < values.size(); ++k) {
      sum += std::abs(values[k]);
    }
    return sum / static_cast<double>(n);
  }

  double stddev(int window) const {
    const auto n = std::min<std::size_t>(values.size(), window);
    if (n < 2) return 0.0;
    double mean = 0.0;
    for (std::size_t k = values.size() - n; k < values.size(); ++k) {
      mean += values[k];
    }
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t k = values.size() - n; k < values.size(); ++k) {
      const double d = values[k] - mean;
      ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(n));
  }
};

}  // namespace

double SimConfig::per_step(double annualized) const {
  return annualized / std::sqrt(steps_per_year);
}

void SimConfig::validate() const {
  require(n_stocks >= 2, "n_stocks", "must be >= 2");
  require(n_steps >= 1, "n_steps", "must be >= 1");
  require(n_terms >= 1, "n_terms", "must be >= 1");
  require(burn_in >= n_terms, "burn_in", "must be >= n_terms");
  require(std::isfinite(g), "g", "must be finite");
  require(std::isfinite(kappa), "kappa", "must be finite");
  require(std::isfinite(alpha_mem), "alpha_mem", "must be finite");
  require(skew_sign == 1 || skew_sign == -1, "skew_sign", "must be +1 or -1");
  require(sigma0 > 0.0 && std::isfinite(sigma0), "sigma0", "must be > 0");
  require(steps_per_year > 0.0 && std::isfinite(steps_per_year),
          "steps_per_year", "must be > 0");
  require(vol_floor > 0.0 && vol_floor <= 1.0, "vol_floor", "must be in (0, 1]");
  require(b > 0.0 && std::isfinite(b), "b", "must be > 0");
  require(noise_amp >= 0.0 && std::isfinite(noise_amp), "noise_amp",
          "must be >= 0");
  require(std::isfinite(phase_coupling), "phase_coupling", "must be finite");
  require(sigma_c_window >= 2, "sigma_c_window", "must be >= 2");
  require(vol_smooth >= 1, "vol_smooth", "must be >= 1");
  require(s_init >= -1.0 && s_init <= 1.0, "s_init", "must be in [-1, 1]");
}

void validate_schedule(const SimConfig& config,
                       std::span<const ShockEvent> shocks) {
  for (std::size_t k = 0; k < shocks.size(); ++k) {
    const auto& e = shocks[k];
    const std::string where = "shocks[" + std::to_string(k) + "]";
    if (e.start < 0 || e.start >= config.n_steps) {
      throw InputError(where + ".start: outside [0, n_steps)");
    }
    if (e.kind == ShockKind::kExogenous) {
      if (e.duration < 1) throw InputError(where + ".duration: must be >= 1");
      if (!std::isfinite(e.sigma_shock) ||
          config.sigma0 + e.sigma_shock <= 0.0) {
        throw InputError(where + ".sigma_shock: base volatility must stay > 0");
      }
    } else {
      if (e.stock_index < 0 || e.stock_index >= config.n_stocks) {
        throw InputError(where + ".stock_index: outside [0, n_stocks)");
      }
      if (e.magnitude_std == 0.0 || !std::isfinite(e.magnitude_std)) {
        throw InputError(where + ".magnitude_std: must be finite and != 0");
      }
    }
  }
}

double SimResult::clamp_rate() const {
  if (vols.empty()) return 0.0;
  double total = 0.0;
  for (int c : clamped_count) total += c;
  return total / static_cast<double>(vols.rows() * vols.cols());
}

std::vector<double> kernel_weights(double g, double alpha_mem, int n_terms) {
  if (n_terms < 1) throw InputError("n_terms: must be >= 1");
  std::vector<double> w(static_cast<std::size_t>(n_terms));
  for (int tau = 1; tau <= n_terms; ++tau) {
    w[tau - 1] = g / std::pow(static_cast<double>(tau), alpha_mem);
  }
  return w;
}

VolatilityKernel::VolatilityKernel(const SimConfig& config)
    : sigma0_(config.step_sigma0()),
      skew_(config.skew_sign * config.kappa),
      floor_(config.vol_floor),
      norm_(config.feedback_norm) {
  const auto w = kernel_weights(config.g, config.alpha_mem, config.n_terms);
  square_w_.resize(w.size());
  linear_w_.resize(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double tau = static_cast<double>(k + 1);
    square_w_[k] = w[k] / tau;
    linear_w_[k] = w[k] / std::sqrt(tau);
    mass_ += w[k];
  }
}

double VolatilityKernel::normalizer(double sigma_base) const noexcept {
  if (norm_ == FeedbackNorm::kSigma0) return sigma0_;
  return sigma_base * std::sqrt(1.0 + mass_);
}

double VolatilityKernel::variance(std::span<const double> history,
                                  double sigma_base, bool* clamped) const {
  const std::size_t n = square_w_.size();
  if (history.size() < n + 1) {
    throw InputError("update_volatility: need " + std::to_string(n + 1) +
                     " log prices, got " + std::to_string(history.size()));
  }
  const double* y = history.data() + history.size() - 1;  // y_t
  double sq = 0.0;
  double lin = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = y[0] - y[-static_cast<std::ptrdiff_t>(k + 1)];
    sq += square_w_[k] * d * d;
    lin += linear_w_[k] * d;
  }
  const double norm = normalizer(sigma_base);
  const double bracket = 1.0 + sq / (norm * norm) + skew_ * lin / norm;
  const double base2 = sigma_base * sigma_base;
  const double var = base2 * bracket;
  const double lowest = floor_ * base2;
  const bool hit = !(var >= lowest);
  if (clamped != nullptr) *clamped = hit;
  return hit ? lowest : var;
}

double update_volatility(std::span<const double> log_price_history,
                         const SimConfig& params, double sigma_base) {
  if (!(sigma_base > 0.0)) {
    throw InputError("update_volatility: sigma_base must be > 0");
  }
  return VolatilityKernel(params).variance(log_price_history, sigma_base);
}

double phase_coefficient(double sigma_m, double sigma_c,
                         const SimConfig& params) {
  const double gap = sigma_c - sigma_m;
  if (params.coupling_scale == CouplingScale::kAbsolute) {
    return params.phase_coupling * gap;
  }
  if (sigma_c > 0.0) return params.phase_coupling * gap / sigma_c;
  // No market history yet: calm unless the market already moved.
  return sigma_m > 0.0 ? -params.phase_coupling : params.phase_coupling;
}

double euler_correlation_step(double s, double a, double b, double noise_amp,
                              double noise) {
  const double next = s + (-a * s - b * s * s * s) + noise_amp * noise;
  return std::clamp(next, -1.0, 1.0);
}

double step_correlation(double s, double sigma_m, double sigma_c,
                        const SimConfig& params, double noise) {
  return euler_correlation_step(s, phase_coefficient(sigma_m, sigma_c, params),
                                params.b, params.noise_amp, noise);
}

std::vector<double> correlated_noise(std::size_t n, double rho,
                                     GaussianStream& rng) {
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw InputError("correlated_noise: rho must be in [0, 1]");
  }
  const double a = std::sqrt(rho);
  const double c = std::sqrt(1.0 - rho);
  const double common = rng.next();
  std::vector<double> out(n);
  for (auto& v : out) v = one_factor(a, c, common, rng.next());
  return out;
}

SimResult simulate(const SimConfig& config, std::span<const ShockEvent> shocks,
                   unsigned threads) {
  config.validate();
  validate_schedule(config, shocks);

  const auto n = static_cast<std::size_t>(config.n_stocks);
  const auto steps = static_cast<std::size_t>(config.n_steps);
  const auto burn = static_cast<std::size_t>(config.burn_in);
  const std::size_t total = burn + steps;
  const double sigma0 = config.step_sigma0();

  const VolatilityKernel kernel(config);
  const KeyedGaussian return_noise(config.seed, kReturnStream);
  const KeyedGaussian state_noise(config.seed, kStateStream);

  // Per-stock log-price paths, y[i][k] before step k; y starts at 0.
  std::vector<std::vector<double>> y(n, std::vector<double>(total + 1, 0.0));

  SimResult result;
  result.config_echo = config;
  result.shocks_echo.assign(shocks.begin(), shocks.end());
  result.returns.symbols.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "S%03zu", i);
    result.returns.symbols.emplace_back(name);
  }
  result.returns.timestamps =
      synthetic_timestamps(steps, config.bars_per_session);
  result.returns.returns = Matrix(steps, n);
  result.vols = Matrix(steps, n);
  result.s_path.resize(steps);
  result.sigma_m_path.resize(steps);
  result.sigma_c_path.resize(steps);
  result.clamped_count.assign(steps, 0);

  MarketHistory market;
  market.values.reserve(total);

  std::vector<double> step_returns(n);
  std::vector<double> step_vols(n);
  std::vector<unsigned char> step_clamped(n);
  ThreadPool pool(resolve_threads(threads));

  double s = config.s_init;
  for (std::size_t k = 0; k < total; ++k) {
    const bool warm = k >= burn;
    const auto t = static_cast<std::ptrdiff_t>(k) -
                   static_cast<std::ptrdiff_t>(burn);

    double sigma_m = 0.0;
    double sigma_c = 0.0;
    double sigma_base = sigma0;
    double rho = 0.0;
    int forced_stock = -1;
    double forced_magnitude = 0.0;

    if (warm) {
      sigma_m = market.mean_abs(config.vol_smooth);
      sigma_c = market.stddev(config.sigma_c_window);
      s = step_correlation(s, sigma_m, sigma_c, config, state_noise(k, 0));
      rho = std::clamp(s * s, 0.0, 1.0);

      double annual_base = config.sigma0;
      for (const auto& e : shocks) {
        if (e.kind == ShockKind::kExogenous && t >= e.start &&
            t < e.start + e.duration) {
          annual_base += e.sigma_shock;
        } else if (e.kind == ShockKind::kEndogenous && t == e.start) {
          forced_stock = e.stock_index;
          forced_magnitude = e.magnitude_std;
        }
      }
      sigma_base = config.per_step(annual_base);
    }

    const double common = return_noise(k, kCommonLane);
    const double load_common = std::sqrt(rho);
    const double load_own = std::sqrt(1.0 - rho);

    pool.parallel_for(n, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        double sigma = sigma0;
        bool clamped = false;
        if (warm) {
          const std::span<const double> hist(y[i].data(), k + 1);
          sigma = std::sqrt(kernel.variance(hist, sigma_base, &clamped));
        }
        double w = one_factor(load_common, load_own, common,
                              return_noise(k, static_cast<std::uint32_t>(i)));
        if (static_cast<int>(i) == forced_stock) w = forced_magnitude;
        const double r = sigma * w;
        y[i][k + 1] = y[i][k] + r;
        step_returns[i] = r;
        step_vols[i] = sigma;
        step_clamped[i] = clamped ? 1 : 0;
      }
    });

    double sum = 0.0;
    for (double r : step_returns) sum += r;
    market.values.push_back(sum / static_cast<double>(n));

    if (warm) {
      const auto row = static_cast<std::size_t>(t);
      int clamped = 0;
      for (std::size_t i = 0; i < n; ++i) {
        result.returns.returns(row, i) = step_returns[i];
        result.vols(row, i) = step_vols[i];
        clamped += step_clamped[i];
      }
      result.clamped_count[row] = clamped;
      result.s_path[row] = s;
      result.sigma_m_path[row] = sigma_m;
      result.sigma_c_path[row] = sigma_c;
    }
  }
  return result;
}

std::string to_string(FeedbackNorm v) {
  return v == FeedbackNorm::kSigma0 ? "sigma0" : "stationary";
}

std::string to_string(CouplingScale v) {
  return v == CouplingScale::kAbsolute ? "absolute" : "relative";
}

std::string to_string(ShockKind v) {
  return v == ShockKind::kExogenous ? "exogenous" : "endogenous";
}

}  // namespace panic_lab::sim
