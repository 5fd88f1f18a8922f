#include "panic_lab/panel.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <iomanip>
#include <sstream>

#include "panic_lab/error.hpp"

namespace panic_lab {

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

std::int64_t day_of(std::int64_t epoch_seconds) {
  // floor division so pre-1970 stamps land on the right day
  auto d = epoch_seconds / kSecondsPerDay;
  if (epoch_seconds % kSecondsPerDay < 0) --d;
  return d;
}

void check_stamps(const std::vector<Timestamp>& stamps, std::size_t rows) {
  if (stamps.size() != rows) {
    throw InputError("timestamp count " + std::to_string(stamps.size()) +
                     " does not match row count " + std::to_string(rows));
  }
  for (std::size_t t = 1; t < stamps.size(); ++t) {
    if (stamps[t].epoch_seconds <= stamps[t - 1].epoch_seconds) {
      throw InputError("timestamps not strictly increasing at row " +
                       std::to_string(t));
    }
    const bool new_session = stamps[t].session_id != stamps[t - 1].session_id;
    if (new_session && stamps[t].intraday_bin != 0) {
      throw InputError("intraday_bin does not reset at session start, row " +
                       std::to_string(t));
    }
  }
}

}  // namespace

void PricePanel::check() const {
  if (prices.rows() < 2 || prices.cols() < 2) {
    throw InputError("price panel needs at least 2 bars and 2 symbols");
  }
  if (symbols.size() != prices.cols()) {
    throw InputError("symbol count does not match column count");
  }
  check_stamps(timestamps, prices.rows());
  for (std::size_t t = 0; t < prices.rows(); ++t) {
    for (std::size_t i = 0; i < prices.cols(); ++i) {
      const double p = prices(t, i);
      if (!(p > 0.0) || !std::isfinite(p)) {
        throw InputError("non-positive price at row " + std::to_string(t) +
                         ", column " + std::to_string(i) + " (" + symbols[i] +
                         ")");
      }
    }
  }
}

void ReturnPanel::check() const {
  if (symbols.size() != returns.cols()) {
    throw InputError("symbol count does not match column count");
  }
  check_stamps(timestamps, returns.rows());
  for (double v : returns.data()) {
    if (!std::isfinite(v)) throw InputError("non-finite return in panel");
  }
}

ReturnPanel log_returns(const PricePanel& prices, bool drop_overnight) {
  prices.check();
  const std::size_t n = prices.n_symbols();

  std::vector<std::size_t> keep;
  keep.reserve(prices.n_bars() - 1);
  for (std::size_t t = 1; t < prices.n_bars(); ++t) {
    if (drop_overnight && prices.timestamps[t].session_id !=
                              prices.timestamps[t - 1].session_id) {
      continue;
    }
    keep.push_back(t);
  }

  ReturnPanel out;
  out.symbols = prices.symbols;
  out.returns = Matrix(keep.size(), n);
  out.timestamps.reserve(keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const std::size_t t = keep[k];
    out.timestamps.push_back(prices.timestamps[t]);
    for (std::size_t i = 0; i < n; ++i) {
      out.returns(k, i) = std::log(prices.prices(t, i)) -
                          std::log(prices.prices(t - 1, i));
    }
  }
  return out;
}

double row_mean(std::span<const double> row) {
  double sum = 0.0;
  for (double v : row) sum += v;
  return sum / static_cast<double>(row.size());
}

MarketSeries market_return(const ReturnPanel& panel) {
  if (panel.n_symbols() == 0 || panel.n_bars() == 0) {
    throw InputError("market_return: empty panel");
  }
  MarketSeries out;
  out.timestamps = panel.timestamps;
  out.values.reserve(panel.n_bars());
  for (std::size_t t = 0; t < panel.n_bars(); ++t) {
    out.values.push_back(row_mean(panel.returns.row(t)));
  }
  return out;
}

std::vector<Timestamp> synthetic_timestamps(std::size_t n_bars,
                                            std::size_t bars_per_session) {
  using namespace std::chrono;
  const std::int64_t origin =
      sys_days{year{2000} / January / 3}.time_since_epoch().count() *
      kSecondsPerDay;
  const std::size_t per_session =
      bars_per_session == 0 ? n_bars : bars_per_session;
  if (per_session > static_cast<std::size_t>(kSecondsPerDay)) {
    throw InputError("too many bars for one synthetic session; set "
                     "bars_per_session");
  }
  // Spread bars evenly over the day so every bar keeps its calendar date.
  const std::int64_t spacing =
      per_session == 0
          ? 1
          : std::max<std::int64_t>(1, kSecondsPerDay /
                                          static_cast<std::int64_t>(per_session));

  std::vector<Timestamp> out(n_bars);
  for (std::size_t t = 0; t < n_bars; ++t) {
    const auto session = static_cast<std::int64_t>(t / per_session);
    const auto bin = static_cast<std::int64_t>(t % per_session);
    out[t] = {origin + session * kSecondsPerDay + bin * spacing, session, bin};
  }
  return out;
}

void assign_sessions(std::vector<Timestamp>& stamps) {
  std::int64_t session = -1;
  std::int64_t bin = 0;
  std::int64_t last_day = 0;
  for (auto& ts : stamps) {
    const auto day = day_of(ts.epoch_seconds);
    if (session < 0 || day != last_day) {
      ++session;
      bin = 0;
      last_day = day;
    }
    ts.session_id = session;
    ts.intraday_bin = bin++;
  }
}

std::string format_iso(std::int64_t epoch_seconds) {
  using namespace std::chrono;
  const auto day = day_of(epoch_seconds);
  const year_month_day ymd{sys_days{days{day}}};
  const auto secs = epoch_seconds - day * kSecondsPerDay;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lld",
                static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()),
                static_cast<long long>(secs / 3600),
                static_cast<long long>((secs / 60) % 60),
                static_cast<long long>(secs % 60));
  return buf;
}

std::int64_t parse_time(const std::string& text, const std::string& pattern) {
  std::tm tm{};
  std::istringstream in(text);
  in >> std::get_time(&tm, pattern.c_str());
  if (in.fail()) {
    throw InputError("timestamp '" + text + "' does not match pattern '" +
                     pattern + "'");
  }
  in >> std::ws;
  if (!in.eof()) {
    throw InputError("trailing characters in timestamp '" + text + "'");
  }
  using namespace std::chrono;
  const year_month_day ymd{year{tm.tm_year + 1900},
                           month{static_cast<unsigned>(tm.tm_mon + 1)},
                           day{static_cast<unsigned>(tm.tm_mday)}};
  if (!ymd.ok()) throw InputError("invalid calendar date '" + text + "'");
  const std::int64_t days_since = sys_days{ymd}.time_since_epoch().count();
  return days_since * kSecondsPerDay + tm.tm_hour * 3600 + tm.tm_min * 60 +
         tm.tm_sec;
}

}  // namespace panic_lab
