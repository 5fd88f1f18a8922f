#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "cli/manifest.hpp"
#include "panic_lab/error.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitIo = 3;

}  // namespace

int main(int argc, char** argv) {
  using namespace panic_lab::cli;

  CLI::App app{"Volatility-feedback market simulator and panic-signature analytics",
               "panic-lab"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  std::optional<unsigned> threads;
  const auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", threads,
                    "Worker threads, 0 = all cores (env PANIC_LAB_THREADS)");
  };

  SimulateArgs sim;
  std::optional<std::uint64_t> seed;
  auto* simulate = app.add_subcommand("simulate", "Run the multi-stock simulation");
  simulate->add_option("--config", sim.config, "JSON config file");
  simulate->add_option("--out", sim.out, "Output directory")->required();
  simulate->add_option("--seed", seed, "Override the config seed");
  add_threads(simulate);

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Cross-sectional statistics of a panel");
  analyze->add_option("--panel", an.panel, "Price panel CSV (or returns with --returns)")->required();
  analyze->add_option("--out", an.out, "Output directory")->required();
  analyze->add_flag("--returns", an.returns, "Input is a wide return panel such as simulate's returns.csv");
  analyze->add_flag("--long", an.long_format, "Price panel in long format (timestamp,symbol,price)");
  analyze->add_flag("--deseasonalize", an.deseasonalize, "Divide dispersion and aic by their intraday profile");
  analyze->add_option("--aic-old-window", an.aic_old_window, "Also write xsec_aicold.csv with this window");
  analyze->add_option("--min-coverage", an.min_coverage, "Drop symbols below this coverage");
  analyze->add_option("--fill-limit", an.forward_fill_limit, "Longest forward-filled gap");
  analyze->add_flag("--keep-overnight", an.keep_overnight, "Keep returns across session boundaries");
  add_threads(analyze);

  VariogramArgs vg;
  std::vector<int> fit_range;
  auto* variogram = app.add_subcommand("variogram", "Variogram, ACF and power-law fits");
  variogram->add_option("--xsec", vg.xsec, "xsec.csv from analyze")->required();
  variogram->add_option("--out", vg.out, "Output directory")->required();
  variogram->add_option("--column", vg.column, "Column to analyze")->capture_default_str();
  variogram->add_option("--max-lag", vg.max_lag, "Largest lag")->capture_default_str();
  variogram->add_option("--fit-range", fit_range, "Fit lags a b")->expected(2);

  LeverageArgs lv;
  auto* leverage = app.add_subcommand("leverage", "Correlation-leverage L(tau) and exponential fit");
  leverage->add_option("--xsec", lv.xsec, "xsec.csv from analyze")->required();
  leverage->add_option("--out", lv.out, "Output directory")->required();
  leverage->add_option("--max-lag", lv.max_lag, "Largest lag")->capture_default_str();
  leverage->add_flag("--normalize", lv.normalize, "Scale market returns to unit variance");

  AicVolArgs av;
  auto* aicvol = app.add_subcommand("aicvol", "Mean AIC binned by market volatility");
  aicvol->add_option("--xsec", av.xsec, "xsec.csv from analyze")->required();
  aicvol->add_option("--out", av.out, "Output directory")->required();
  aicvol->add_option("--bin-width", av.bin_width, "Bin width in standard deviations")->capture_default_str();

  ReportArgs rp;
  auto* report = app.add_subcommand("report", "Per-window panic statistics");
  report->add_option("--xsec", rp.xsec, "xsec.csv from analyze")->required();
  report->add_option("--out", rp.out, "Output directory")->required();
  report->add_option("--windows", rp.windows, "name=start:end, repeatable")->required();
  report->add_option("--bins", rp.histogram_bins, "S histogram bins")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (simulate->parsed()) {
      sim.seed = seed;
      sim.threads = threads_from(threads);
      run_simulate(sim);
    } else if (analyze->parsed()) {
      an.threads = threads_from(threads);
      run_analyze(an);
    } else if (variogram->parsed()) {
      if (!fit_range.empty()) {
        vg.fit_min = fit_range[0];
        vg.fit_max = fit_range[1];
      } else {
        vg.fit_min = 1;
        vg.fit_max = vg.max_lag;
      }
      run_variogram(vg);
    } else if (leverage->parsed()) {
      run_leverage(lv);
    } else if (aicvol->parsed()) {
      run_aicvol(av);
    } else if (report->parsed()) {
      run_report(rp);
    }
  } catch (const panic_lab::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const panic_lab::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
