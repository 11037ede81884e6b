#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "run_config.hpp"

using epim::cli::RunConfig;

int main(int argc, char** argv) {
  CLI::App app{
      "epim: regularized e-processes and possibilistic inference.\n"
      "Commands emit plot-ready CSV data and JSON reports; identical config\n"
      "and seed reproduce identical bytes."};
  app.require_subcommand(0, 1);

  std::string config_path, out_dir, seed_str, alpha_str, grid_nodes_str;
  bool print_defaults = false;
  app.add_option("--config", config_path, "flat key=value config file");
  app.add_option("--seed", seed_str, "override config key seed");
  app.add_option("--out-dir", out_dir, "override config key out_dir");
  app.add_option("--alpha", alpha_str, "override config key alpha");
  app.add_option("--grid-nodes", grid_nodes_str, "override config key grid_nodes");
  app.add_flag("--print-defaults", print_defaults, "print all config keys with defaults and exit");

  std::string figure_id;
  auto* fig = app.add_subcommand("figure", "write one figure's data series as CSV + manifest");
  fig->add_option("id", figure_id, "fig2|fig3|fig4|fig5|fig6|fig7|fig8|appD")->required();
  fig->fallthrough();

  auto* ware = app.add_subcommand(
      "ware", "two-arm trial analysis: regions, tests, marginal contour, intervals");
  ware->fallthrough();

  std::string monitor_source = "-";
  auto* monitor =
      app.add_subcommand("monitor", "stream observations (file or '-' for stdin), one per line");
  monitor->add_option("source", monitor_source, "input path, or - for stdin");
  monitor->fallthrough();

  std::string check_id;
  auto* simulate = app.add_subcommand("simulate", "run a Monte Carlo validity audit");
  simulate->add_option("check", check_id, "ville|expectation|decision|contraction")->required();
  simulate->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // usage error, regardless of CLI11's own code
  }

  if (print_defaults) {
    RunConfig::print_defaults(std::cout);
    return 0;
  }

  try {
    RunConfig cfg = RunConfig::load(config_path);
    if (!seed_str.empty()) cfg.set("seed", seed_str);
    if (!out_dir.empty()) cfg.set("out_dir", out_dir);
    if (!alpha_str.empty()) cfg.set("alpha", alpha_str);
    if (!grid_nodes_str.empty()) cfg.set("grid_nodes", grid_nodes_str);

    if (fig->parsed()) return epim::cli::cmd_figure(cfg, figure_id);
    if (ware->parsed()) return epim::cli::cmd_ware(cfg);
    if (monitor->parsed()) return epim::cli::cmd_monitor(cfg, monitor_source);
    if (simulate->parsed()) return epim::cli::cmd_simulate(cfg, check_id);

    std::cout << app.help();
    return 1;
  } catch (const epim::cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const epim::cli::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
