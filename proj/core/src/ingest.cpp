#include "panic_lab/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <unordered_map>

#include "panic_lab/csv.hpp"
#include "panic_lab/error.hpp"

namespace panic_lab::ingest {

namespace {

struct RawPanel {
  std::vector<std::int64_t> times;
  std::vector<std::string> symbols;
  std::vector<std::vector<double>> columns;  // per symbol, NaN = missing
  std::vector<std::size_t> lines;            // source line per row
};

std::string at_line(std::size_t line) {
  return "line " + std::to_string(line) + ": ";
}

double parse_price(const std::string& text, std::size_t line,
                   const std::string& symbol) {
  double v = 0.0;
  try {
    v = csv::parse_double(text);
  } catch (const InputError& e) {
    throw InputError(at_line(line) + e.what());
  }
  if (is_missing(v)) return v;
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InputError(at_line(line) + "non-positive price for " + symbol);
  }
  return v;
}

std::int64_t parse_stamp(const std::string& text, std::size_t line,
                         const IngestOptions& options) {
  try {
    return parse_time(text, options.timestamp_format);
  } catch (const InputError& e) {
    throw InputError(at_line(line) + e.what());
  }
}

RawPanel read_wide(const csv::Table& table, const IngestOptions& options) {
  if (table.header.size() < 2 || table.header[0] != "timestamp") {
    throw InputError("wide CSV header must be timestamp,<SYM1>,...");
  }
  RawPanel raw;
  raw.symbols.assign(table.header.begin() + 1, table.header.end());
  raw.columns.assign(raw.symbols.size(), {});
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto line = table.line_numbers[r];
    const auto& row = table.rows[r];
    const auto t = parse_stamp(row[0], line, options);
    if (!raw.times.empty() && t <= raw.times.back()) {
      throw InputError(at_line(line) + "timestamps not strictly increasing");
    }
    raw.times.push_back(t);
    raw.lines.push_back(line);
    for (std::size_t i = 0; i < raw.symbols.size(); ++i) {
      raw.columns[i].push_back(parse_price(row[i + 1], line, raw.symbols[i]));
    }
  }
  return raw;
}

RawPanel read_long(const csv::Table& table, const IngestOptions& options) {
  const auto ts_col = table.column_index("timestamp");
  const auto sym_col = table.column_index("symbol");
  const auto px_col = table.column_index("price");

  struct Cell {
    std::int64_t time;
    std::size_t symbol;
    double price;
    std::size_t line;
  };
  std::vector<Cell> cells;
  RawPanel raw;
  std::unordered_map<std::string, std::size_t> symbol_ids;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto line = table.line_numbers[r];
    const auto& row = table.rows[r];
    const auto& sym = row[sym_col];
    if (sym.empty()) throw InputError(at_line(line) + "empty symbol");
    auto [it, inserted] = symbol_ids.try_emplace(sym, raw.symbols.size());
    if (inserted) raw.symbols.push_back(sym);
    cells.push_back({parse_stamp(row[ts_col], line, options), it->second,
                     parse_price(row[px_col], line, sym), line});
  }

  std::vector<std::pair<std::int64_t, std::size_t>> stamps;  // time, line
  for (const auto& c : cells) stamps.emplace_back(c.time, c.line);
  std::sort(stamps.begin(), stamps.end());
  for (const auto& [t, line] : stamps) {
    if (raw.times.empty() || raw.times.back() != t) {
      raw.times.push_back(t);
      raw.lines.push_back(line);
    }
  }
  raw.columns.assign(raw.symbols.size(),
                     std::vector<double>(raw.times.size(), kMissing));
  std::vector<std::vector<bool>> seen(
      raw.symbols.size(), std::vector<bool>(raw.times.size(), false));
  for (const auto& c : cells) {
    const auto row = static_cast<std::size_t>(
        std::lower_bound(raw.times.begin(), raw.times.end(), c.time) -
        raw.times.begin());
    if (seen[c.symbol][row]) {
      throw InputError(at_line(c.line) + "duplicate entry for " +
                       raw.symbols[c.symbol]);
    }
    seen[c.symbol][row] = true;
    raw.columns[c.symbol][row] = c.price;
  }
  return raw;
}

LoadedPanel finish(RawPanel raw, const IngestOptions& options) {
  LoadedPanel out;
  auto& report = out.report;
  const std::size_t rows = raw.times.size();
  if (rows < 2) throw InputError("panel needs at least 2 bars");

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < raw.symbols.size(); ++i) {
    const auto present = static_cast<double>(std::count_if(
        raw.columns[i].begin(), raw.columns[i].end(),
        [](double v) { return !is_missing(v); }));
    const double coverage = present / static_cast<double>(rows);
    report.coverage[raw.symbols[i]] = coverage;
    if (coverage < options.min_coverage) {
      report.dropped_symbols.push_back(raw.symbols[i]);
      char msg[160];
      std::snprintf(msg, sizeof msg,
                    "dropped %s: coverage %.3f below min_coverage %.3f",
                    raw.symbols[i].c_str(), coverage, options.min_coverage);
      report.warnings.emplace_back(msg);
    } else {
      kept.push_back(i);
    }
  }
  if (kept.size() < 2) {
    throw InputError("fewer than 2 symbols left after coverage filter");
  }

  auto& panel = out.panel;
  panel.prices = Matrix(rows, kept.size());
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const auto& col = raw.columns[kept[k]];
    const auto& sym = raw.symbols[kept[k]];
    panel.symbols.push_back(sym);
    std::size_t gap = 0;
    for (std::size_t t = 0; t < rows; ++t) {
      if (!is_missing(col[t])) {
        panel.prices(t, k) = col[t];
        gap = 0;
        continue;
      }
      if (t == 0) {
        throw InputError(at_line(raw.lines[t]) + "missing first price for " +
                         sym + " (nothing to forward-fill)");
      }
      if (++gap > static_cast<std::size_t>(options.forward_fill_limit)) {
        throw InputError(at_line(raw.lines[t]) + "gap in " + sym +
                         " exceeds forward_fill_limit " +
                         std::to_string(options.forward_fill_limit));
      }
      panel.prices(t, k) = panel.prices(t - 1, k);
      ++report.filled_cells;
    }
  }

  panel.timestamps.resize(rows);
  for (std::size_t t = 0; t < rows; ++t) {
    panel.timestamps[t].epoch_seconds = raw.times[t];
  }
  assign_sessions(panel.timestamps);
  panel.check();
  return out;
}

}  // namespace

void IngestOptions::validate() const {
  if (!(min_coverage > 0.0 && min_coverage <= 1.0)) {
    throw InputError("min_coverage must be in (0, 1]");
  }
  if (forward_fill_limit < 0) {
    throw InputError("forward_fill_limit must be >= 0");
  }
  if (timestamp_format.empty()) throw InputError("empty timestamp_format");
}

LoadedPanel load_panel(std::istream& in, const IngestOptions& options) {
  options.validate();
  const auto table = csv::read_table(in);
  auto raw = options.format == PanelFormat::kWide ? read_wide(table, options)
                                                  : read_long(table, options);
  return finish(std::move(raw), options);
}

LoadedPanel load_panel(const std::filesystem::path& path,
                       const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return load_panel(in, options);
}

ReturnPanel load_return_panel(std::istream& in,
                              const std::string& timestamp_format) {
  IngestOptions options;
  options.timestamp_format = timestamp_format;
  const auto table = csv::read_table(in);
  if (table.header.size() < 2 || table.header[0] != "timestamp") {
    throw InputError("wide CSV header must be timestamp,<SYM1>,...");
  }
  ReturnPanel panel;
  panel.symbols.assign(table.header.begin() + 1, table.header.end());
  panel.returns = Matrix(table.rows.size(), panel.symbols.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto line = table.line_numbers[r];
    const auto& row = table.rows[r];
    const auto t = parse_stamp(row[0], line, options);
    if (!panel.timestamps.empty() &&
        t <= panel.timestamps.back().epoch_seconds) {
      throw InputError(at_line(line) + "timestamps not strictly increasing");
    }
    panel.timestamps.push_back({t, 0, 0});
    for (std::size_t i = 0; i < panel.symbols.size(); ++i) {
      double v = 0.0;
      try {
        v = csv::parse_double(row[i + 1]);
      } catch (const InputError& e) {
        throw InputError(at_line(line) + e.what());
      }
      if (!std::isfinite(v)) {
        throw InputError(at_line(line) + "missing return for " +
                         panel.symbols[i]);
      }
      panel.returns(r, i) = v;
    }
  }
  if (panel.n_bars() == 0) throw InputError("return panel has no rows");
  assign_sessions(panel.timestamps);
  panel.check();
  return panel;
}

ReturnPanel load_return_panel(const std::filesystem::path& path,
                              const std::string& timestamp_format) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return load_return_panel(in, timestamp_format);
}

ValidationReport validate_panel(const PricePanel& panel) {
  ValidationReport report;
  const std::size_t rows = panel.n_bars();
  const std::size_t n = panel.n_symbols();

  for (std::size_t i = 0; i < n; ++i) {
    std::size_t good = 0;
    for (std::size_t t = 0; t < rows; ++t) {
      const double p = panel.prices(t, i);
      if (p > 0.0 && std::isfinite(p)) ++good;
    }
    const std::string& sym = i < panel.symbols.size() ? panel.symbols[i]
                                                      : std::to_string(i);
    report.coverage[sym] =
        rows == 0 ? 0.0 : static_cast<double>(good) / static_cast<double>(rows);
    if (good != rows) {
      report.issues.push_back(sym + ": " + std::to_string(rows - good) +
                              " invalid price cells");
    }
  }

  std::size_t run = 0;
  for (std::size_t t = 0; t < panel.timestamps.size(); ++t) {
    if (t > 0) {
      if (panel.timestamps[t].epoch_seconds <=
          panel.timestamps[t - 1].epoch_seconds) {
        report.issues.push_back("timestamps not increasing at row " +
                                std::to_string(t));
      }
      if (panel.timestamps[t].session_id !=
          panel.timestamps[t - 1].session_id) {
        ++report.session_lengths[run];
        run = 0;
      }
    }
    ++run;
  }
  if (run > 0) ++report.session_lengths[run];
  for (const auto& [len, count] : report.session_lengths) {
    report.session_count += count;
  }

  for (std::size_t t = 1; t < rows; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      const double a = panel.prices(t - 1, i);
      const double b = panel.prices(t, i);
      if (!(a > 0.0) || !(b > 0.0)) continue;
      const double r = std::log(b) - std::log(a);
      if (std::abs(r) > kExtremeLogReturn) {
        const std::string& sym = panel.symbols[i];
        report.extreme_returns.push_back({t, sym, r});
        char msg[160];
        std::snprintf(msg, sizeof msg, "extreme log-return %.4f for %s at row %zu",
                      r, sym.c_str(), t);
        report.issues.emplace_back(msg);
      }
    }
  }
  return report;
}

void write_wide(std::ostream& out, const std::vector<Timestamp>& stamps,
                const std::vector<std::string>& symbols, const Matrix& values) {
  csv::Writer w(out);
  w.field("timestamp");
  for (const auto& s : symbols) w.field(s);
  w.end_row();
  for (std::size_t t = 0; t < values.rows(); ++t) {
    w.field(format_iso(stamps[t].epoch_seconds));
    for (double v : values.row(t)) w.field(v);
    w.end_row();
  }
}

}  // namespace panic_lab::ingest
