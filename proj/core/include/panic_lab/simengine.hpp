#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "panic_lab/matrix.hpp"
#include "panic_lab/panel.hpp"
#include "panic_lab/rng.hpp"

namespace panic_lab::sim {

// Normalizer used for the squared and linear feedback sums.
//   kSigma0:     fixed at the per-step base volatility. Unstable once the
//                kernel mass sum(g_tau) exceeds 1.
//   kStationary: sigma_base * sqrt(1 + sum(g_tau)), the unconditional
//                volatility of the process, so the bracket stays O(1) and
//                an exogenous shock rescales the whole process.
enum class FeedbackNorm { kSigma0, kStationary };

// How the phase-transition coefficient a depends on (sigma_c - sigma_m).
//   kAbsolute: a = coupling * (sigma_c - sigma_m), volatilities per step.
//   kRelative: a = coupling * (sigma_c - sigma_m) / sigma_c.
enum class CouplingScale { kAbsolute, kRelative };

struct SimConfig {
  int n_stocks = 100;
  int n_steps = 2000;
  int burn_in = 100;

  double g = 0.35;
  double kappa = 0.15;
  double alpha_mem = 1.15;
  int n_terms = 100;
  int skew_sign = -1;

  double sigma0 = 0.20;          // annualized
  double steps_per_year = 252.0;
  double vol_floor = 0.01;       // fraction of sigma_base^2
  FeedbackNorm feedback_norm = FeedbackNorm::kStationary;

  double b = 0.01;
  double noise_amp = 0.1;
  double phase_coupling = 1.0;
  CouplingScale coupling_scale = CouplingScale::kAbsolute;
  int sigma_c_window = 100;
  int vol_smooth = 1;
  double s_init = 0.0;

  std::size_t bars_per_session = 0;  // 0: one session
  std::uint64_t seed = 0;

  [[nodiscard]] double per_step(double annualized) const;
  [[nodiscard]] double step_sigma0() const { return per_step(sigma0); }

  // Throws InputError naming the offending field.
  void validate() const;

  bool operator==(const SimConfig&) const = default;
};

enum class ShockKind { kExogenous, kEndogenous };

struct ShockEvent {
  ShockKind kind = ShockKind::kExogenous;
  int start = 0;
  int duration = 1;            // exogenous
  double sigma_shock = 0.0;    // exogenous, annualized like sigma0
  int stock_index = 0;         // endogenous
  double magnitude_std = 0.0;  // endogenous, in units of the stock's sigma_t

  bool operator==(const ShockEvent&) const = default;
};

void validate_schedule(const SimConfig& config,
                       std::span<const ShockEvent> shocks);

struct SimResult {
  ReturnPanel returns;
  Matrix vols;  // per-step sigma_t^i
  std::vector<double> s_path;
  std::vector<double> sigma_m_path;
  std::vector<double> sigma_c_path;
  std::vector<int> clamped_count;  // stocks whose variance hit the floor
  SimConfig config_echo;
  std::vector<ShockEvent> shocks_echo;

  [[nodiscard]] double clamp_rate() const;
};

/// g / tau^alpha for tau = 1..n_terms.
std::vector<double> kernel_weights(double g, double alpha_mem, int n_terms);

// Precomputed feedback kernel for one configuration.
class VolatilityKernel {
 public:
  explicit VolatilityKernel(const SimConfig& config);

  // history holds log prices oldest to newest; only the last n_terms + 1
  // entries are read. Returns the floored variance; `clamped` reports
  // whether the floor engaged.
  [[nodiscard]] double variance(std::span<const double> history,
                                double sigma_base,
                                bool* clamped = nullptr) const;

  [[nodiscard]] double kernel_mass() const noexcept { return mass_; }
  [[nodiscard]] double normalizer(double sigma_base) const noexcept;
  [[nodiscard]] int n_terms() const noexcept {
    return static_cast<int>(square_w_.size());
  }

 private:
  std::vector<double> square_w_;  // g_tau / tau
  std::vector<double> linear_w_;  // g_tau / sqrt(tau)
  double mass_ = 0.0;
  double sigma0_ = 0.0;
  double skew_ = 0.0;  // skew_sign * kappa
  double floor_ = 0.0;
  FeedbackNorm norm_ = FeedbackNorm::kStationary;
};

/// Variance sigma_t^2 of the volatility-feedback model for one stock.
double update_volatility(std::span<const double> log_price_history,
                         const SimConfig& params, double sigma_base);

/// Linear coefficient a of the correlation-state drift.
double phase_coefficient(double sigma_m, double sigma_c,
                         const SimConfig& params);

/// One Euler step (dt = 1) of ds = (-a s - b s^3) dt + noise_amp * noise,
/// clamped to [-1, 1].
double euler_correlation_step(double s, double a, double b, double noise_amp,
                              double noise);

double step_correlation(double s, double sigma_m, double sigma_c,
                        const SimConfig& params, double noise);

// One-factor mix with pairwise correlation rho.
inline double one_factor(double sqrt_rho, double sqrt_one_minus_rho,
                         double common, double own) {
  return sqrt_rho * common + sqrt_one_minus_rho * own;
}

/// n equicorrelated standard normals with pairwise correlation rho.
std::vector<double> correlated_noise(std::size_t n, double rho,
                                     GaussianStream& rng);

/// Runs the full multi-stock simulation. Output is bit-identical for any
/// thread count.
SimResult simulate(const SimConfig& config, std::span<const ShockEvent> shocks,
                   unsigned threads = 1);

std::string to_string(FeedbackNorm v);
std::string to_string(CouplingScale v);
std::string to_string(ShockKind v);

}  // namespace panic_lab::sim
