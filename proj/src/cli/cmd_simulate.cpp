#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "epim/calibration.hpp"
#include "epim/eprocess.hpp"
#include "epim/im.hpp"
#include "epim/io.hpp"
#include "epim/possibility.hpp"
#include "epim/regularization.hpp"
#include "epim/validity_sim.hpp"
#include "run_config.hpp"

namespace epim::cli {

namespace {

constexpr std::uint64_t kHypothesisStream = 0x68797073;  // "hyps"

// Rule lists use commas both between rules and inside threshold(c,h), so
// split only at depth zero.
std::vector<std::string> split_rules(const std::string& raw) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : raw) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

StoppingRule parse_rule(const std::string& s) {
  size_t open = s.find('(');
  size_t close = s.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open) {
    throw UsageError("bad stopping rule '" + s + "' (expected fixed(n), threshold(c,h), or horizon(n))");
  }
  std::string kind = s.substr(0, open);
  std::string args = s.substr(open + 1, close - open - 1);
  try {
    if (kind == "fixed") return StoppingRule::make_fixed(std::stoi(args));
    if (kind == "horizon") return StoppingRule::make_horizon(std::stoi(args));
    if (kind == "threshold") {
      size_t comma = args.find(',');
      if (comma == std::string::npos) throw UsageError("threshold rule needs two arguments");
      return StoppingRule::make_threshold(std::stod(args.substr(0, comma)),
                                          std::stoi(args.substr(comma + 1)));
    }
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    throw UsageError("bad stopping rule arguments in '" + s + "'");
  }
  throw UsageError("unknown stopping rule kind '" + kind + "'");
}

SimConfig build_sim_config(const RunConfig& cfg, const Grid1D& grid) {
  SimConfig sc;
  sc.draw_obs = [](Rng& rng, double theta) { return theta + rng.normal(); };

  double center = cfg.num("sim_prior_center");
  double k = cfg.num("sim_k");
  std::string prior = cfg.str("sim_prior");
  if (prior == "point_mass") {
    sc.prior = PriorSampler{[center](Rng&) { return center; },
                            "point mass at " + format_double(center)};
  } else if (prior == "normal") {
    if (!(k > 0.0)) throw UsageError("sim_k must be > 0 for a normal prior");
    double sd = std::sqrt(k);
    sc.prior = PriorSampler{[center, sd](Rng& rng) { return center + sd * rng.normal(); },
                            "normal(" + format_double(center) + ", " + format_double(k) + ")"};
  } else {
    throw UsageError("sim_prior must be point_mass or normal, got '" + prior + "'");
  }

  std::string reg = cfg.str("sim_regularizer");
  if (reg == "vacuous") {
    sc.prior_contour = make_prior(PriorKind::vacuous, k, grid);
    sc.rho = vacuous_regularizer();
  } else if (reg == "gaussian_surprise") {
    sc.prior_contour = make_prior(PriorKind::gaussian_surprise, k, grid);
    sc.rho = regularizer_from_contour(sc.prior_contour,
                                      beta_mixture_calibrator(cfg.num("calibrator_kappa")));
  } else {
    throw UsageError("sim_regularizer must be vacuous or gaussian_surprise, got '" + reg + "'");
  }

  sc.check_membership = cfg.flag("sim_check_membership");
  sc.base = savage_dickey_gaussian(cfg.num("sd_variance"));
  for (const std::string& r : split_rules(cfg.str("sim_rules"))) sc.rules.push_back(parse_rule(r));
  sc.alphas = cfg.nums("sim_alphas");
  for (double a : sc.alphas) {
    if (!(a > 0.0 && a < 1.0)) throw UsageError("sim_alphas entries must lie in (0, 1)");
  }
  sc.reps = cfg.inum("sim_reps");
  sc.n_max = cfg.inum("sim_n_max");
  sc.master_seed = cfg.seed_of("seed");
  sc.label = sc.prior.name + " / " + sc.rho.provenance;
  return sc;
}

int finish_sim(const RunConfig& cfg, const SimReport& report, const std::string& filename) {
  std::string text = sim_report_json(report);
  write_text_file(out_path(cfg, filename), text);
  std::cout << text;
  nlohmann::ordered_json p;
  p["check"] = report.check;
  p["label"] = report.label;
  p["reps"] = report.reps;
  p["all_pass"] = report.all_pass;
  write_manifest(cfg, "simulate " + report.check, p, {filename},
                 report.check + "_manifest.json");
  return report.all_pass ? 0 : 3;
}

int simulate_decision(const RunConfig& cfg, const Grid1D& grid) {
  SimConfig sc = build_sim_config(cfg, grid);
  sc.reps = cfg.inum("decision_reps");
  sc.rules = {parse_rule(cfg.str("decision_rule"))};
  Grid1D contour_grid{cfg.num("grid_lo"), cfg.num("grid_hi"), cfg.inum("decision_grid_nodes")};
  contour_grid.validate();
  Grid1D action_grid{cfg.num("action_lo"), cfg.num("action_hi"), cfg.inum("action_nodes")};
  action_grid.validate();
  LossFunction loss = squared_error_loss(action_grid.points());
  SimReport report = run_decision_bound_check(sc, loss, contour_grid);
  return finish_sim(cfg, report, "decision_report.json");
}

int simulate_contraction(const RunConfig& cfg, const Grid1D& grid) {
  double k = cfg.num("contraction_k");
  Contour prior = make_prior(PriorKind::gaussian_surprise, k, grid);
  RegularizedEProcess ereg =
      regularize(savage_dickey_gaussian(cfg.num("sd_variance")),
                 regularizer_from_contour(prior, beta_mixture_calibrator(cfg.num("calibrator_kappa"))));
  Grid1D data_grid{cfg.num("grid_lo"), cfg.num("grid_hi"), cfg.inum("contraction_data_nodes")};
  data_grid.validate();

  int count = cfg.inum("contraction_hypotheses");
  if (count < 1) throw UsageError("contraction_hypotheses must be >= 1");
  Rng rng(counter_mix(cfg.seed_of("seed"), kHypothesisStream));
  std::vector<std::pair<double, double>> hypotheses;
  double span = grid.hi - grid.lo;
  for (int i = 0; i < count; ++i) {
    double a = grid.lo + rng.uniform() * (span - 0.1);
    double b = std::min(grid.hi, a + 0.05 + rng.uniform() * 1.95);
    hypotheses.emplace_back(a, b);
  }

  ContractionReport report =
      run_contraction_check(prior, ereg, cfg.inum("contraction_n"), data_grid, grid, hypotheses);
  std::string text = contraction_report_json(report);
  write_text_file(out_path(cfg, "contraction_report.json"), text);
  std::cout << text;
  nlohmann::ordered_json p;
  p["check"] = "contraction";
  p["K"] = k;
  p["n"] = cfg.inum("contraction_n");
  p["hypotheses"] = count;
  p["all_pass"] = report.all_pass;
  write_manifest(cfg, "simulate contraction", p, {"contraction_report.json"},
                 "contraction_manifest.json");
  return report.all_pass ? 0 : 3;
}

}  // namespace

int cmd_simulate(const RunConfig& cfg, const std::string& check_id) {
  Grid1D grid = config_grid(cfg);
  if (check_id == "ville") {
    return finish_sim(cfg, run_ville_check(build_sim_config(cfg, grid)), "ville_report.json");
  }
  if (check_id == "expectation") {
    return finish_sim(cfg, run_expectation_check(build_sim_config(cfg, grid)),
                      "expectation_report.json");
  }
  if (check_id == "decision") return simulate_decision(cfg, grid);
  if (check_id == "contraction") return simulate_contraction(cfg, grid);
  throw UsageError("unknown check '" + check_id +
                   "' (expected ville, expectation, decision, or contraction)");
}

}  // namespace epim::cli
