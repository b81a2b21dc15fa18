// Command-line front end: parameter sweeps, figure reproduction and the
// verification battery.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "ness/acceptance.hpp"
#include "ness/harness.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kRowError = 1;
constexpr int kConfigError = 2;

int report_rows(const std::vector<ness::SweepRow>& rows, const std::string& what) {
  int failed = 0;
  for (const auto& r : rows)
    if (!r.ok()) {
      ++failed;
      std::fprintf(stderr, "%s: row %g failed: %s\n", what.c_str(), r.sweep_value, r.error.c_str());
    }
  return failed;
}

int run_config(ness::RunConfig cfg, const std::string& out) {
  const auto rows = ness::run_sweep(cfg);
  const std::string path = out.empty() ? (cfg.output.empty() ? cfg.name + ".csv" : cfg.output) : out;
  ness::emit_csv(rows, cfg, path);
  std::fprintf(stderr, "wrote %zu rows to %s\n", rows.size(), path.c_str());
  return report_rows(rows, cfg.name) ? kRowError : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement measures of biased free fermions scattering off an impurity"};
  app.require_subcommand(1);

  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep from a JSON config");
  std::string config, out, pipeline;
  sweep->add_option("--config", config, "run configuration")->required();
  sweep->add_option("--out", out, "CSV output path (overrides the config)");
  sweep->add_option("--pipeline", pipeline, "numeric, analytic or both")
      ->check(CLI::IsMember({"numeric", "analytic", "both"}));

  auto* verify = app.add_subcommand("verify", "run the acceptance battery");
  bool fast = false;
  verify->add_flag("--fast", fast, "fewer parameter points");

  auto* figure = app.add_subcommand("figure", "reproduce one figure panel from its checked-in config");
  std::string fig_id, out_dir = ".", config_dir = NESS_CONFIG_DIR;
  figure->add_option("id", fig_id, "panel id, e.g. 2a")->required();
  figure->add_option("--out-dir", out_dir, "directory for the CSV files");
  figure->add_option("--config-dir", config_dir, "directory holding fig<id>.json");
  figure->add_option("--pipeline", pipeline, "numeric, analytic or both")
      ->check(CLI::IsMember({"numeric", "analytic", "both"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*sweep) {
      auto cfg = ness::RunConfig::load(config);
      if (!pipeline.empty()) ness::set_pipeline(cfg, pipeline);
      return run_config(cfg, out);
    }
    if (*verify) {
      bool all = true;
      ness::run_acceptance({fast}, [&](const ness::CheckResult& r) {
        std::cout << ness::format_result(r) << std::endl;
        all = all && r.pass;
      });
      return all ? kOk : kRowError;
    }
    if (*figure) {
      auto series = ness::load_figure(fig_id, config_dir);
      std::filesystem::create_directories(out_dir);
      int status = kOk;
      for (auto& s : series) {
        if (!pipeline.empty()) ness::set_pipeline(s.config, pipeline);
        const auto path = std::filesystem::path(out_dir) / ("fig" + fig_id + "_" + s.label + ".csv");
        if (run_config(s.config, path.string()) != kOk) status = kRowError;
      }
      return status;
    }
  } catch (const ness::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRowError;
  }
  return kOk;
}
