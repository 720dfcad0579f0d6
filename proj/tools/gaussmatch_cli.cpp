// gaussmatch command line: rate experiments, certificates, lower bounds,
// refits, property checks and plots.
//
// Exit codes: 0 success, 1 check failures, 2 configuration errors.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gaussmatch/bounds/trace.hpp"
#include "gaussmatch/harness/checks.hpp"
#include "gaussmatch/harness/config.hpp"
#include "gaussmatch/harness/experiment.hpp"
#include "gaussmatch/harness/fit.hpp"
#include "gaussmatch/harness/outputs.hpp"
#include "gaussmatch/sampling.hpp"
#include "gaussmatch/smoothing/certificate.hpp"

namespace gh = gaussmatch::harness;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;

struct ConfigFlags {
  std::string file;
  std::map<std::string, std::string> values;
};

void add_config_flags(CLI::App* sub, ConfigFlags& flags) {
  sub->add_option("--config", flags.file, "key=value configuration file; flags override it");
  for (const auto& key : gh::config_keys())
    sub->add_option("--" + key, flags.values[key], "configuration key '" + key + "'");
}

gh::ExperimentConfig build_config(const ConfigFlags& flags, CLI::App* sub) {
  gh::ExperimentConfig cfg;
  if (!flags.file.empty()) cfg = gh::parse_config_file(flags.file, cfg);
  for (const auto& [key, value] : flags.values)
    if (sub->count("--" + key) > 0) gh::apply_key_value(cfg, key, value);
  return cfg;
}

std::optional<gh::RateFit> try_fit(const gh::ResultTable& table, std::ostream& log) {
  try {
    return gh::fit_rate(table);
  } catch (const gaussmatch::InvalidArgument& e) {
    log << "fit skipped: " << e.what() << "\n";
    return std::nullopt;
  }
}

int cmd_simulate(const ConfigFlags& flags, CLI::App* sub) {
  gh::ExperimentConfig cfg = build_config(flags, sub);
  if (cfg.n_grid.empty()) cfg.n_grid = {64, 128, 256, 512, 1024};
  cfg.validate();
  const gh::ResultTable table = gh::run_experiment(cfg);
  const auto fit = try_fit(table, std::cerr);
  const auto paths = gh::emit_outputs(cfg, table, fit);
  for (const auto& a : table.aggregate())
    std::cout << "n=" << a.n << "  mean=" << a.mean << "  se=" << a.se << "  reps=" << a.count << "\n";
  if (fit) std::cout << "slope " << fit->slope << " +/- " << fit->slope_se << "  (reference " << -cfg.p / cfg.d << ")\n";
  for (const auto& w : table.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "wrote " << paths.csv << ", " << paths.json << ", " << paths.svg << "\n";
  return 0;
}

int cmd_certify(const ConfigFlags& flags, CLI::App* sub, bool print_json) {
  gh::ExperimentConfig cfg = build_config(flags, sub);
  cfg.estimator = gh::Estimator::certificate;
  if (cfg.n_grid.empty()) cfg.n_grid = {256};
  if (!cfg.replicates) cfg.replicates = 1;
  cfg.validate();

  gaussmatch::smoothing::CertificateOptions opt;
  opt.variant = cfg.variant;
  opt.c = cfg.c;
  opt.min_n = cfg.min_n;
  opt.y_samples = cfg.y_samples;
  std::ofstream file;
  const bool to_file = sub->count("--out") > 0;
  if (to_file) {
    std::filesystem::create_directories(cfg.out_dir);
    file.open(std::filesystem::path(cfg.out_dir) / "certificates.jsonl");
    if (!file) throw std::runtime_error("cannot write to " + cfg.out_dir);
  }
  for (std::size_t n : cfg.n_grid)
    for (int r = 0; r < cfg.replicates_for(n); ++r) {
      auto sx = gaussmatch::Stream::derive(cfg.seed, n, r, gaussmatch::StreamPurpose::sample_x);
      auto aux = gaussmatch::Stream::derive(cfg.seed, n, r, gaussmatch::StreamPurpose::localize);
      const auto sample = gaussmatch::sample_gaussian(n, cfg.d, sx);
      const auto rep = gaussmatch::smoothing::upper_bound_certificate(sample, cfg.p, opt, aux);
      const auto j = gaussmatch::smoothing::to_json(rep);
      if (to_file) file << j.dump() << "\n";
      if (print_json || !to_file) {
        std::cout << (print_json ? j.dump(2) : j.dump()) << "\n";
      }
    }
  return 0;
}

int cmd_lower_bound(const std::string& n_grid, int d) {
  const auto grid = gh::parse_n_grid(n_grid);
  for (std::size_t n : grid) {
    const auto cfg = gaussmatch::bounds::LowerBoundConfig::defaults(static_cast<double>(n), d);
    const auto I = gaussmatch::bounds::trace_integral(cfg);
    auto row = gaussmatch::bounds::to_json(cfg, I);
    const auto corr = gaussmatch::bounds::lower_bound_corrections(cfg);
    row["explicit_terms"] = corr.explicit_terms;
    row["log10_rosenthal_per_unit"] = corr.log10_rosenthal_per_unit;
    row["corrections_certified"] = corr.certified;
    if (d == 1 || d == 2) row["growth_ratio"] = gaussmatch::bounds::growth_ratio(cfg);
    std::cout << row.dump() << "\n";
  }
  return 0;
}

int cmd_fit(const std::string& csv, bool as_json) {
  const auto table = gh::read_csv(csv);
  const auto fit = gh::fit_rate(table);
  if (as_json) {
    std::cout << gh::to_json(fit).dump(2) << "\n";
  } else {
    std::cout << "slope " << fit.slope << " +/- " << fit.slope_se << "\nintercept " << fit.intercept << " +/- "
              << fit.intercept_se << "\n";
    for (const auto& w : fit.warnings) std::cerr << "warning: " << w << "\n";
  }
  return 0;
}

int cmd_check(const std::string& suite, bool as_json, std::uint64_t seed) {
  gh::CheckOptions opt;
  opt.seed = seed;
  const auto report = gh::run_check(suite, opt);
  if (as_json) {
    std::cout << report.to_json().dump(2) << "\n";
  } else {
    for (const auto& e : report.entries)
      std::cout << (e.passed ? "PASS " : "FAIL ") << e.suite << " / " << e.name << "  measured=" << e.measured
                << "  threshold=" << e.threshold << (e.detail.empty() ? "" : "  (" + e.detail + ")") << "\n";
    std::cout << report.entries.size() - report.failures() << "/" << report.entries.size() << " passed in "
              << report.seconds << " s\n";
  }
  return report.all_passed() ? 0 : kExitCheckFailed;
}

int cmd_plot(const std::string& csv, const std::string& out, double p, int d) {
  const auto table = gh::read_csv(csv);
  const auto fit = try_fit(table, std::cerr);
  std::ofstream f(out);
  if (!f) throw std::runtime_error("cannot write " + out);
  f << gh::to_svg(table, fit, -p / d, csv);
  std::cout << "wrote " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian empirical measure transport laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", gh::software_version());

  ConfigFlags sim_flags, cert_flags;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo rate experiment over an n-grid");
  add_config_flags(simulate, sim_flags);

  auto* certify = app.add_subcommand("certify", "Upper-bound certificates for fresh samples");
  add_config_flags(certify, cert_flags);
  bool cert_pretty = false;
  certify->add_flag("--pretty", cert_pretty, "Indented JSON on stdout");

  auto* lower = app.add_subcommand("lower-bound", "Trace-integral lower bound with default parameters");
  std::string lb_grid = "1000,1000000,1000000000,1000000000000";
  int lb_d = 2;
  lower->add_option("--n-grid", lb_grid, "Comma separated n values");
  lower->add_option("--d", lb_d, "Dimension")->check(CLI::PositiveNumber);

  auto* fit = app.add_subcommand("fit", "Refit the rate of an existing results CSV");
  std::string fit_csv;
  bool fit_json = false;
  fit->add_option("csv", fit_csv, "results.csv")->required()->check(CLI::ExistingFile);
  fit->add_flag("--json", fit_json, "JSON output");

  auto* check = app.add_subcommand("check", "Run property suites");
  std::string suite = "all";
  bool check_json = false;
  std::uint64_t check_seed = 20261019;
  check->add_option("suite", suite, "kernel, spectral, ot, pipeline, bounds or all")
      ->check(CLI::IsMember({"kernel", "spectral", "ot", "pipeline", "bounds", "all"}));
  check->add_flag("--json", check_json, "JSON report");
  check->add_option("--seed", check_seed, "Seed for randomized checks");

  auto* plot = app.add_subcommand("plot", "Log-log SVG of a results CSV");
  std::string plot_csv, plot_out = "rates.svg";
  double plot_p = 2.0;
  int plot_d = 3;
  plot->add_option("csv", plot_csv, "results.csv")->required()->check(CLI::ExistingFile);
  plot->add_option("--out", plot_out, "Output SVG path");
  plot->add_option("--p", plot_p, "Exponent for the reference slope");
  plot->add_option("--d", plot_d, "Dimension for the reference slope");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*simulate) return cmd_simulate(sim_flags, simulate);
    if (*certify) return cmd_certify(cert_flags, certify, cert_pretty);
    if (*lower) return cmd_lower_bound(lb_grid, lb_d);
    if (*fit) return cmd_fit(fit_csv, fit_json);
    if (*check) return cmd_check(suite, check_json, check_seed);
    if (*plot) return cmd_plot(plot_csv, plot_out, plot_p, plot_d);
  } catch (const gaussmatch::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return 0;
}
