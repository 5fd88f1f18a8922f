#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>

#include "json.hpp"

#include "manifest.hpp"
#include "panic_lab/csv.hpp"
#include "panic_lab/error.hpp"
#include "panic_lab/ingest.hpp"
#include "panic_lab/memstats.hpp"
#include "panic_lab/parallel.hpp"
#include "panic_lab/simengine.hpp"
#include "panic_lab/xsec.hpp"
#include "sim_config.hpp"

namespace panic_lab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string());
  }
}

class OutFile {
 public:
  explicit OutFile(fs::path path) : path_(std::move(path)), out_(path_) {
    if (!out_) throw IoError("cannot write " + path_.string());
  }
  std::ostream& stream() { return out_; }
  void close() {
    out_.close();
    if (!out_) throw IoError("write failed: " + path_.string());
  }

 private:
  fs::path path_;
  std::ofstream out_;
};

// Non-finite doubles become null so the output stays valid JSON.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json fit_to_json(const mem::FitResult& fit) {
  json params = json::object();
  for (const auto& [k, v] : fit.params) params[k] = number(v);
  return {{"params", params},
          {"residual_rms", number(fit.residual_rms)},
          {"lag_range", {fit.lag_range.first, fit.lag_range.second}},
          {"excluded_lags", fit.excluded_lags},
          {"infinite_timescale", fit.infinite_timescale}};
}

void write_lag_function(const fs::path& path, const mem::LagFunction& fn,
                        std::string_view value_name) {
  OutFile f(path);
  csv::Writer w(f.stream());
  w.header({"lag", value_name, "count"});
  for (std::size_t k = 0; k < fn.size(); ++k) {
    w.field(fn.lags[k]).field(fn.values[k]).field(fn.counts[k]);
    w.end_row();
  }
  f.close();
}

void write_json(const fs::path& path, const json& doc) {
  OutFile f(path);
  f.stream() << doc.dump(2) << '\n';
  f.close();
}

csv::Table read_xsec(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("no such file: " + path.string());
  return csv::read_table(path);
}

json input_record(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return {{"path", path.string()}, {"sha256", sha256_hex(bytes)}};
}

void finish(RunManifest& m, const fs::path& out) {
  m.finished = utc_now_iso();
  m.write(out);
}

}  // namespace

unsigned threads_from(std::optional<unsigned> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("PANIC_LAB_THREADS"); env && *env) {
    unsigned v = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto [ptr, ec] = std::from_chars(env, end, v);
    if (ec != std::errc() || ptr != end) {
      throw InputError("PANIC_LAB_THREADS: expected a non-negative integer");
    }
    return v;
  }
  return 1;
}

Window parse_window(const std::string& text, std::size_t n_rows) {
  const auto eq = text.find('=');
  const auto colon = text.find(':', eq == std::string::npos ? 0 : eq);
  if (eq == std::string::npos || eq == 0 || colon == std::string::npos) {
    throw InputError("window '" + text + "': expected name=start:end");
  }
  const auto parse = [&](std::string_view s) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw InputError("window '" + text + "': bad index '" + std::string(s) + "'");
    }
    return v;
  };
  const std::string_view view(text);
  Window w{text.substr(0, eq), parse(view.substr(eq + 1, colon - eq - 1)),
           parse(view.substr(colon + 1))};
  if (w.begin >= w.end) {
    throw InputError("window '" + text + "': empty range");
  }
  if (w.end > n_rows) {
    throw InputError("window '" + text + "': outside data range [0, " +
                     std::to_string(n_rows) + ")");
  }
  return w;
}

void run_simulate(const SimulateArgs& args) {
  RunManifest manifest;
  manifest.command = "simulate";
  manifest.started = utc_now_iso();

  SimulateSpec spec;
  if (!args.config.empty()) {
    spec = load_simulate_spec(args.config);
  } else {
    spec = parse_simulate_spec(json::object());
  }
  if (args.seed) spec.config.seed = *args.seed;
  manifest.resolved_config = to_json(spec);
  manifest.seed = spec.config.seed;

  ensure_dir(args.out);
  const auto result = sim::simulate(spec.config, spec.shocks,
                                    resolve_threads(args.threads));

  const auto returns_path = args.out / "returns.csv";
  {
    OutFile f(returns_path);
    ingest::write_wide(f.stream(), result.returns.timestamps,
                       result.returns.symbols, result.returns.returns);
    f.close();
  }
  const auto state_path = args.out / "state.csv";
  {
    OutFile f(state_path);
    csv::Writer w(f.stream());
    w.header({"t", "s", "sigma_m", "sigma_c", "clamped_count"});
    for (std::size_t t = 0; t < result.s_path.size(); ++t) {
      w.field(t).field(result.s_path[t]).field(result.sigma_m_path[t]);
      w.field(result.sigma_c_path[t]).field(result.clamped_count[t]);
      w.end_row();
    }
    f.close();
  }
  const double clamp = result.clamp_rate();
  if (clamp > 0.01) {
    std::cerr << "warning: variance floor engaged on " << clamp * 100.0
              << "% of stock-steps\n";
  }
  manifest.output_files = {returns_path, state_path};
  finish(manifest, args.out);
}

void run_analyze(const AnalyzeArgs& args) {
  RunManifest manifest;
  manifest.command = "analyze";
  manifest.started = utc_now_iso();
  manifest.resolved_config = {
      {"input", input_record(args.panel)},
      {"returns", args.returns},
      {"format", args.long_format ? "long" : "wide"},
      {"deseasonalize", args.deseasonalize},
      {"aic_old_window", args.aic_old_window},
      {"min_coverage", args.min_coverage},
      {"forward_fill_limit", args.forward_fill_limit},
      {"drop_overnight", !args.keep_overnight},
  };
  if (args.aic_old_window < 0) {
    throw InputError("--aic-old-window: must be >= 0");
  }

  ReturnPanel panel;
  if (args.returns) {
    panel = ingest::load_return_panel(args.panel);
  } else {
    ingest::IngestOptions options;
    options.format = args.long_format ? ingest::PanelFormat::kLong
                                      : ingest::PanelFormat::kWide;
    options.min_coverage = args.min_coverage;
    options.forward_fill_limit = args.forward_fill_limit;
    options.drop_overnight = !args.keep_overnight;
    auto loaded = ingest::load_panel(args.panel, options);
    for (const auto& w : loaded.report.warnings) {
      std::cerr << "warning: " << w << '\n';
    }
    panel = log_returns(loaded.panel, options.drop_overnight);
  }
  ensure_dir(args.out);

  auto series = xsec::xsec_series(panel);
  const auto sessions = xsec::session_count(series.timestamps);
  const auto disp_profile =
      xsec::seasonal_profile(series.dispersion, series.timestamps);
  if (args.deseasonalize) {
    if (sessions < 2) {
      std::cerr << "warning: --deseasonalize needs more than one session; "
                   "columns left unchanged\n";
    } else {
      series.dispersion = xsec::deseasonalize(series.dispersion,
                                              series.timestamps, disp_profile);
      const auto aic_profile =
          xsec::seasonal_profile(series.aic, series.timestamps);
      series.aic = xsec::deseasonalize(series.aic, series.timestamps,
                                       aic_profile);
    }
  }

  const auto xsec_path = args.out / "xsec.csv";
  {
    OutFile f(xsec_path);
    csv::Writer w(f.stream());
    w.header({"timestamp", "dispersion", "kurtosis", "s", "aic", "market"});
    for (std::size_t t = 0; t < series.size(); ++t) {
      w.field(format_iso(series.timestamps[t].epoch_seconds));
      w.field(series.dispersion[t]).field(series.kurtosis[t]);
      w.field(series.s_values[t]).field(series.aic[t]).field(series.market[t]);
      w.end_row();
    }
    f.close();
  }
  manifest.output_files.push_back(xsec_path);

  if (args.aic_old_window > 0) {
    const auto old = xsec::aic_old(panel, args.aic_old_window);
    const auto path = args.out / "xsec_aicold.csv";
    OutFile f(path);
    csv::Writer w(f.stream());
    w.header({"timestamp", "aic_old"});
    for (std::size_t t = 0; t < old.size(); ++t) {
      w.field(format_iso(panel.timestamps[t].epoch_seconds)).field(old[t]);
      w.end_row();
    }
    f.close();
    manifest.output_files.push_back(path);
  }

  const auto seasonal_path = args.out / "seasonal_dispersion.csv";
  {
    OutFile f(seasonal_path);
    csv::Writer w(f.stream());
    w.header({"bin", "mean_dispersion", "count"});
    for (std::size_t k = 0; k < disp_profile.bin_index.size(); ++k) {
      w.field(static_cast<long long>(disp_profile.bin_index[k]));
      w.field(disp_profile.mean_value[k]).field(disp_profile.count[k]);
      w.end_row();
    }
    f.close();
  }
  manifest.output_files.push_back(seasonal_path);
  finish(manifest, args.out);
}

void run_variogram(const VariogramArgs& args) {
  RunManifest manifest;
  manifest.command = "variogram";
  manifest.started = utc_now_iso();
  manifest.resolved_config = {{"input", input_record(args.xsec)},
                              {"column", args.column},
                              {"max_lag", args.max_lag},
                              {"fit_range", {args.fit_min, args.fit_max}}};
  const auto table = read_xsec(args.xsec);
  const auto values = table.numeric_column(args.column);
  if (args.max_lag < 1) throw InputError("--max-lag: must be >= 1");
  if (values.size() <= static_cast<std::size_t>(args.max_lag)) {
    throw InputError("--max-lag: series has only " +
                     std::to_string(values.size()) + " rows");
  }
  if (args.fit_min < 1 || args.fit_max < args.fit_min) {
    throw InputError("--fit-range: need 1 <= a <= b");
  }
  ensure_dir(args.out);

  const auto vg = mem::variogram(values, args.max_lag);
  const auto acf = mem::autocorrelation(values, args.max_lag);
  const auto vg_path = args.out / "variogram.csv";
  const auto acf_path = args.out / "acf.csv";
  write_lag_function(vg_path, vg, "V");
  write_lag_function(acf_path, acf, "C");

  const auto try_fit = [&](const mem::LagFunction& fn) -> json {
    try {
      return fit_to_json(mem::fit_power_law(fn, args.fit_min, args.fit_max));
    } catch (const InputError& e) {
      return {{"error", e.what()}};
    }
  };
  const auto fit_path = args.out / "fit.json";
  write_json(fit_path, {{"column", args.column},
                        {"variogram", try_fit(vg)},
                        {"acf", try_fit(acf)}});
  manifest.output_files = {vg_path, acf_path, fit_path};
  finish(manifest, args.out);
}

void run_leverage(const LeverageArgs& args) {
  RunManifest manifest;
  manifest.command = "leverage";
  manifest.started = utc_now_iso();
  manifest.resolved_config = {{"input", input_record(args.xsec)},
                              {"max_lag", args.max_lag},
                              {"normalize", args.normalize}};
  const auto table = read_xsec(args.xsec);
  const auto aic = table.numeric_column("aic");
  auto market = table.numeric_column("market");
  if (args.max_lag < 1) throw InputError("--max-lag: must be >= 1");
  if (aic.size() <= static_cast<std::size_t>(args.max_lag)) {
    throw InputError("--max-lag: series has only " +
                     std::to_string(aic.size()) + " rows");
  }
  if (args.normalize) {
    double sum = 0.0, sq = 0.0;
    std::size_t n = 0;
    for (double r : market) {
      if (is_missing(r)) continue;
      sum += r;
      sq += r * r;
      ++n;
    }
    const double mean = n ? sum / static_cast<double>(n) : 0.0;
    const double sd =
        n ? std::sqrt(std::max(0.0, sq / static_cast<double>(n) - mean * mean))
          : 0.0;
    if (!(sd > 0.0)) throw InputError("--normalize: market return is constant");
    for (double& r : market) r /= sd;
  }
  ensure_dir(args.out);

  const auto lev = mem::leverage(aic, market, args.max_lag);
  const auto lev_path = args.out / "leverage.csv";
  write_lag_function(lev_path, lev, "L");

  json fit;
  try {
    const auto f = mem::fit_exponential_negative(lev);
    fit = fit_to_json(f);
    fit["A"] = number(f.params.at("A"));
    fit["T"] = f.infinite_timescale ? json("inf") : number(f.params.at("T"));
  } catch (const InputError& e) {
    fit = {{"error", e.what()}};
  }
  const auto fit_path = args.out / "fit.json";
  write_json(fit_path, fit);
  manifest.output_files = {lev_path, fit_path};
  finish(manifest, args.out);
}

void run_aicvol(const AicVolArgs& args) {
  RunManifest manifest;
  manifest.command = "aicvol";
  manifest.started = utc_now_iso();
  manifest.resolved_config = {{"input", input_record(args.xsec)},
                              {"bin_width", args.bin_width}};
  if (!(args.bin_width > 0.0)) throw InputError("--bin-width: must be > 0");
  const auto table = read_xsec(args.xsec);
  const auto curve = mem::aic_vs_volatility(table.numeric_column("aic"),
                                            table.numeric_column("market"),
                                            args.bin_width);
  ensure_dir(args.out);
  const auto path = args.out / "aic_vs_vol.csv";
  OutFile f(path);
  csv::Writer w(f.stream());
  w.header({"bin_center", "mean_aic", "count"});
  for (std::size_t k = 0; k < curve.bin_centers.size(); ++k) {
    w.field(curve.bin_centers[k]).field(curve.means[k]).field(curve.counts[k]);
    w.end_row();
  }
  f.close();
  manifest.output_files = {path};
  finish(manifest, args.out);
}

void run_report(const ReportArgs& args) {
  RunManifest manifest;
  manifest.command = "report";
  manifest.started = utc_now_iso();
  manifest.resolved_config = {{"input", input_record(args.xsec)},
                              {"windows", args.windows},
                              {"histogram_bins", args.histogram_bins}};
  if (args.windows.empty()) throw InputError("--windows: at least one required");
  if (args.histogram_bins < 2) throw InputError("--bins: must be >= 2");

  const auto table = read_xsec(args.xsec);
  const auto disp = table.numeric_column("dispersion");
  const auto kurt = table.numeric_column("kurtosis");
  const auto s = table.numeric_column("s");
  const auto aic = table.numeric_column("aic");

  json windows = json::object();
  for (const auto& text : args.windows) {
    const auto w = parse_window(text, table.rows.size());
    if (windows.contains(w.name)) {
      throw InputError("window '" + w.name + "' given twice");
    }
    const auto slice = [&](const std::vector<double>& v) {
      return std::span<const double>(v).subspan(w.begin, w.end - w.begin);
    };
    double aic_sum = 0.0, disp_sum = 0.0;
    std::size_t aic_n = 0, disp_n = 0;
    for (double x : slice(aic)) {
      if (!is_missing(x)) { aic_sum += x; ++aic_n; }
    }
    for (double x : slice(disp)) {
      if (!is_missing(x)) { disp_sum += x; ++disp_n; }
    }
    std::vector<double> s_present;
    for (double x : slice(s)) {
      if (!is_missing(x)) s_present.push_back(x);
    }
    double bc = kMissing;
    try {
      bc = mem::bimodality_coefficient(s_present);
    } catch (const InputError&) {
      // degenerate sample: reported as null
    }
    const auto hist = mem::histogram(s_present, args.histogram_bins);
    windows[w.name] = {
        {"start", w.begin},
        {"end", w.end},
        {"rows", w.end - w.begin},
        {"dispersion_kurtosis_corr", number(mem::pearson(slice(disp), slice(kurt)))},
        {"mean_dispersion", number(disp_n ? disp_sum / static_cast<double>(disp_n) : kMissing)},
        {"mean_aic", number(aic_n ? aic_sum / static_cast<double>(aic_n) : kMissing)},
        {"s_bimodality", number(bc)},
        {"s_bimodal", std::isfinite(bc) && bc > mem::kBimodalThreshold},
        {"s_histogram", {{"edges", hist.edges}, {"counts", hist.counts}}},
    };
  }
  ensure_dir(args.out);
  const auto path = args.out / "report.json";
  write_json(path, {{"windows", windows}});
  manifest.output_files = {path};
  finish(manifest, args.out);
}

}  // namespace panic_lab::cli
