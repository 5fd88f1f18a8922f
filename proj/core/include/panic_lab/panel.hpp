#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "panic_lab/matrix.hpp"

namespace panic_lab {

struct Timestamp {
  std::int64_t epoch_seconds = 0;
  std::int64_t session_id = 0;    // trading-day index
  std::int64_t intraday_bin = 0;  // 0-based bar index within the session

  bool operator==(const Timestamp&) const = default;
};

struct PricePanel {
  std::vector<Timestamp> timestamps;
  std::vector<std::string> symbols;
  Matrix prices;  // T x N, strictly positive

  [[nodiscard]] std::size_t n_bars() const noexcept { return prices.rows(); }
  [[nodiscard]] std::size_t n_symbols() const noexcept { return prices.cols(); }

  // Throws InputError naming the first violated invariant.
  void check() const;

  bool operator==(const PricePanel&) const = default;
};

// Row t holds the log-return realized over bar t; timestamps[t] is the bar's
// closing stamp.
struct ReturnPanel {
  std::vector<Timestamp> timestamps;
  std::vector<std::string> symbols;
  Matrix returns;

  [[nodiscard]] std::size_t n_bars() const noexcept { return returns.rows(); }
  [[nodiscard]] std::size_t n_symbols() const noexcept { return returns.cols(); }

  void check() const;

  bool operator==(const ReturnPanel&) const = default;
};

struct MarketSeries {
  std::vector<Timestamp> timestamps;
  std::vector<double> values;
};

/// Log-returns between consecutive bars. With `drop_overnight`, rows whose
/// two observations belong to different sessions are removed.
ReturnPanel log_returns(const PricePanel& prices, bool drop_overnight);

/// Equal-weight cross-sectional mean return per bar.
MarketSeries market_return(const ReturnPanel& panel);

double row_mean(std::span<const double> row);

// Synthetic clock for simulated panels: sessions on consecutive calendar days
// starting 2000-01-03. `bars_per_session == 0` puts every bar in one session.
std::vector<Timestamp> synthetic_timestamps(std::size_t n_bars,
                                            std::size_t bars_per_session);

// Recomputes session_id / intraday_bin from the calendar date of each
// epoch_seconds value (UTC, no timezone math).
void assign_sessions(std::vector<Timestamp>& stamps);

std::string format_iso(std::int64_t epoch_seconds);

// Parses `text` with a strftime-style pattern; throws InputError on mismatch.
std::int64_t parse_time(const std::string& text,
                        const std::string& pattern = "%Y-%m-%dT%H:%M:%S");

}  // namespace panic_lab
