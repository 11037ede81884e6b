#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "epim/calibration.hpp"
#include "epim/eprocess.hpp"
#include "epim/im.hpp"
#include "epim/io.hpp"
#include "epim/possibility.hpp"
#include "epim/regularization.hpp"
#include "run_config.hpp"

namespace epim::cli {

namespace {

Calibrator config_calibrator(const RunConfig& cfg) {
  return beta_mixture_calibrator(cfg.num("calibrator_kappa"));
}

Dataset mean_dataset(double zbar, int n) {
  return Dataset::from_observations(std::vector<double>(static_cast<size_t>(n), zbar));
}

// Student t with 2 degrees of freedom: N(0,1) / sqrt(Exp(1)).
double draw_t2(Rng& rng) { return rng.normal() / std::sqrt(-std::log(rng.uniform())); }

std::vector<double> linspace(double lo, double hi, int nodes) {
  Grid1D g{lo, hi, nodes};
  g.validate();
  return g.points();
}

std::string k_label(double k) { return "K=" + format_double(k); }

nlohmann::ordered_json base_params(const RunConfig& cfg) {
  nlohmann::ordered_json p;
  p["calibrator_kappa"] = cfg.num("calibrator_kappa");
  p["grid_lo"] = cfg.num("grid_lo");
  p["grid_hi"] = cfg.num("grid_hi");
  p["grid_nodes"] = cfg.inum("grid_nodes");
  return p;
}

std::vector<std::pair<std::string, Regularizer>> gaussian_regularizer_ladder(
    const RunConfig& cfg, const Grid1D& grid) {
  Calibrator cal = config_calibrator(cfg);
  std::vector<std::pair<std::string, Regularizer>> regs;
  regs.emplace_back("vacuous", vacuous_regularizer());
  for (double k : cfg.nums("prior_ks")) {
    regs.emplace_back(k_label(k),
                      regularizer_from_contour(make_prior(PriorKind::gaussian_surprise, k, grid), cal));
  }
  return regs;
}

int fig2(const RunConfig& cfg) {
  Grid1D grid = config_grid(cfg);
  double v = cfg.num("sd_variance");
  int n = cfg.inum("fig2_n");
  EProcess base = savage_dickey_gaussian(v);
  auto regs = gaussian_regularizer_ladder(cfg, grid);

  std::vector<SeriesPoint> rows;
  for (double zbar : cfg.nums("fig2_zbars")) {
    Dataset data = mean_dataset(zbar, n);
    for (const auto& [label, rho] : regs) {
      RegularizedEProcess ereg = regularize(base, rho);
      std::string series = "zbar=" + format_double(zbar) + "|" + label;
      for (int i = 0; i < grid.nodes; ++i) {
        double t = grid.point(i);
        rows.push_back({t, std::exp(ereg.log_value(data, n, t)), series});
      }
    }
  }
  write_series_csv(out_path(cfg, "fig2.csv"), rows);

  nlohmann::ordered_json p = base_params(cfg);
  p["n"] = n;
  p["sd_variance"] = v;
  p["zbars"] = cfg.nums("fig2_zbars");
  p["prior_ks"] = cfg.nums("prior_ks");
  write_manifest(cfg, "figure fig2", p, {"fig2.csv"}, "fig2_manifest.json");
  return 0;
}

int fig3(const RunConfig& cfg) {
  Grid1D grid = config_grid(cfg);
  EProcess base = savage_dickey_gaussian(cfg.num("sd_variance"));
  auto regs = gaussian_regularizer_ladder(cfg, grid);
  std::vector<Regularizer> rhos;
  std::vector<std::string> labels;
  for (auto& [label, rho] : regs) {
    labels.push_back(label);
    rhos.push_back(rho);
  }
  GrowthTable table = run_growth_curve([](Rng& r) { return r.normal(); },
                                       cfg.num("fig3_theta_star"), base, rhos, labels,
                                       cfg.inum("fig3_n_max"), cfg.inum("fig3_reps"),
                                       cfg.seed_of("seed"));
  write_growth_csv(out_path(cfg, "fig3.csv"), table);

  nlohmann::ordered_json p = base_params(cfg);
  p["sd_variance"] = cfg.num("sd_variance");
  p["theta_star"] = cfg.num("fig3_theta_star");
  p["n_max"] = cfg.inum("fig3_n_max");
  p["reps"] = cfg.inum("fig3_reps");
  p["truth"] = "standard normal";
  p["prior_ks"] = cfg.nums("prior_ks");
  write_manifest(cfg, "figure fig3", p, {"fig3.csv"}, "fig3_manifest.json");
  return 0;
}

int fig4(const RunConfig& cfg) {
  Grid1D grid = config_grid(cfg);
  double eta = eta_upper_bound(cfg.num("fig4_epsilon"));
  double th0 = cfg.num("fig4_theta_hat0");
  int n = cfg.inum("fig4_n");
  Contour prior = make_prior(PriorKind::median_prior, 1.0, grid);
  Regularizer reg = regularizer_from_contour(prior, config_calibrator(cfg));
  EProcess med = median_quasi_eprocess(eta, th0);

  std::vector<SeriesPoint> rows;
  for (int i = 0; i < grid.nodes; ++i) {
    rows.push_back({grid.point(i), prior.q(grid.point(i)), "prior"});
  }
  std::vector<double> medians = cfg.nums("fig4_medians");
  for (size_t mi = 0; mi < medians.size(); ++mi) {
    Rng rng(counter_mix(cfg.seed_of("seed"), mi));
    Dataset data;
    for (int i = 0; i < n; ++i) data.append(medians[mi] + draw_t2(rng));
    for (bool regularized : {false, true}) {
      RegularizedEProcess ereg = regularize(med, regularized ? reg : vacuous_regularizer());
      IMContour c = im_contour(ereg, data, n, grid);
      std::string series = std::string(regularized ? "regularized" : "unregularized") +
                           "|m=" + format_double(medians[mi]);
      for (int i = 0; i < grid.nodes; ++i) {
        rows.push_back({grid.point(i), c.pi(grid.point(i)), series});
      }
    }
  }
  write_series_csv(out_path(cfg, "fig4.csv"), rows);

  nlohmann::ordered_json p = base_params(cfg);
  p["n"] = n;
  p["medians"] = medians;
  p["epsilon"] = cfg.num("fig4_epsilon");
  p["eta"] = eta;
  p["theta_hat0"] = th0;
  p["data"] = "t(2) noise shifted to each median";
  write_manifest(cfg, "figure fig4", p, {"fig4.csv"}, "fig4_manifest.json");
  return 0;
}

struct WarePieces {
  Dataset data;
  Grid2D grid;
  RegularizedEProcess unregularized;
  RegularizedEProcess regularized;
};

WarePieces ware_pieces(const RunConfig& cfg) {
  WarePieces w;
  int nodes = cfg.inum("ware_grid_nodes");
  w.grid = Grid2D{{0.0, 1.0, nodes}, {0.0, 1.0, nodes}};
  WareCounts counts{cfg.num("ware_survivals_cmt"), cfg.num("ware_deaths_cmt"),
                    cfg.num("ware_survivals_ecmo"), cfg.num("ware_deaths_ecmo")};
  w.data = Dataset::from_counts(counts);
  EProcess base = ware_binomial(counts.survivals_cmt, counts.deaths_cmt, counts.survivals_ecmo,
                                counts.deaths_ecmo, cfg.num("ware_beta"));
  w.unregularized = regularize(base, vacuous_regularizer());
  w.regularized =
      regularize(base, regularizer_from_contour(make_ware_joint_prior(w.grid), config_calibrator(cfg)));
  return w;
}

nlohmann::ordered_json ware_params(const RunConfig& cfg) {
  nlohmann::ordered_json p;
  p["survivals_cmt"] = cfg.num("ware_survivals_cmt");
  p["deaths_cmt"] = cfg.num("ware_deaths_cmt");
  p["survivals_ecmo"] = cfg.num("ware_survivals_ecmo");
  p["deaths_ecmo"] = cfg.num("ware_deaths_ecmo");
  p["beta"] = cfg.num("ware_beta");
  p["ware_grid_nodes"] = cfg.inum("ware_grid_nodes");
  p["calibrator_kappa"] = cfg.num("calibrator_kappa");
  return p;
}

void write_contour2_csv(const std::string& path, const Grid2D& grid,
                        const RegularizedEProcess& ereg, const Dataset& data) {
  std::ostringstream os;
  os << "theta_cmt,theta_ecmo,pi\n";
  for (int ia = 0; ia < grid.a.nodes; ++ia) {
    for (int ib = 0; ib < grid.b.nodes; ++ib) {
      double lv = ereg.log_value2(data, grid.a.point(ia), grid.b.point(ib));
      os << format_double(grid.a.point(ia)) << ',' << format_double(grid.b.point(ib)) << ','
         << format_double(std::exp(-std::max(0.0, lv))) << '\n';
    }
  }
  write_text_file(path, os.str());
}

int fig5(const RunConfig& cfg) {
  WarePieces w = ware_pieces(cfg);
  write_contour2_csv(out_path(cfg, "fig5_unregularized.csv"), w.grid, w.unregularized, w.data);
  write_contour2_csv(out_path(cfg, "fig5_regularized.csv"), w.grid, w.regularized, w.data);
  write_manifest(cfg, "figure fig5", ware_params(cfg),
                 {"fig5_unregularized.csv", "fig5_regularized.csv"}, "fig5_manifest.json");
  return 0;
}

Contour2D contour2_of(const RegularizedEProcess& ereg, const Dataset& data, const Grid2D& grid,
                      const std::string& name) {
  Contour2D c;
  c.grid = grid;
  c.q = [ereg, data](double a, double b) {
    return std::exp(-std::max(0.0, ereg.log_value2(data, a, b)));
  };
  c.name = name;
  return c;
}

int fig6(const RunConfig& cfg) {
  WarePieces w = ware_pieces(cfg);
  Grid1D delta_grid{-1.0, 1.0, cfg.inum("delta_nodes")};
  delta_grid.validate();

  std::vector<SeriesPoint> rows;
  nlohmann::ordered_json p = ware_params(cfg);
  p["delta_nodes"] = cfg.inum("delta_nodes");
  for (bool regularized : {false, true}) {
    const RegularizedEProcess& ereg = regularized ? w.regularized : w.unregularized;
    std::string name = regularized ? "regularized" : "unregularized";
    MarginalResult m = extension_marginal(contour2_of(ereg, w.data, w.grid, name), delta_grid);
    for (int i = 0; i < delta_grid.nodes; ++i) {
      rows.push_back({delta_grid.point(i), m.phi.q(delta_grid.point(i)), name});
    }
    auto [lo, hi] = marginal_expectation_interval(m.phi);
    p["delta_interval_" + name] = {lo, hi};
    p["excluded_delta_nodes_" + name] = m.excluded;
  }
  write_series_csv(out_path(cfg, "fig6.csv"), rows);
  write_manifest(cfg, "figure fig6", p, {"fig6.csv"}, "fig6_manifest.json");
  return 0;
}

int fig7(const RunConfig& cfg) {
  Grid1D grid = config_grid(cfg);
  int n = cfg.inum("fig7_n");
  double zbar = cfg.num("fig7_zbar");
  Dataset data = mean_dataset(zbar, n);
  RegularizedEProcess ereg = regularize(savage_dickey_gaussian(cfg.num("sd_variance")),
                                        vacuous_regularizer());
  IMContour c = im_contour(ereg, data, n, grid);
  LossFunction loss = squared_error_loss(
      linspace(cfg.num("action_lo"), cfg.num("action_hi"), cfg.inum("action_nodes")));

  std::vector<double> risks = risk_curve(c, loss);
  double a_star = optimal_action(c, loss);
  double upper = upper_expected_loss(c, loss, a_star);
  double lower = lower_expected_loss(c, loss, a_star);

  std::vector<SeriesPoint> rows;
  for (int i = 0; i < grid.nodes; ++i) {
    rows.push_back({grid.point(i), c.pi(grid.point(i)), "contour"});
  }
  std::string loss_series = "loss|a=" + format_double(a_star);
  for (int i = 0; i < grid.nodes; ++i) {
    double t = grid.point(i);
    rows.push_back({t, loss.loss(a_star, t), loss_series});
  }
  write_series_csv(out_path(cfg, "fig7.csv"), rows);

  std::vector<SeriesPoint> risk_rows;
  for (size_t i = 0; i < loss.actions.size(); ++i) {
    risk_rows.push_back({loss.actions[i], risks[i], "upper_risk"});
  }
  write_series_csv(out_path(cfg, "fig7_risk.csv"), risk_rows);

  nlohmann::ordered_json p = base_params(cfg);
  p["n"] = n;
  p["zbar"] = zbar;
  p["sd_variance"] = cfg.num("sd_variance");
  p["decision"] = {{"action", a_star},
                   {"upper_risk", upper},
                   {"lower_risk", lower},
                   {"risk_curve", "fig7_risk.csv"}};
  write_manifest(cfg, "figure fig7", p, {"fig7.csv", "fig7_risk.csv"}, "fig7_manifest.json");
  return 0;
}

int fig8(const RunConfig& cfg) {
  Grid1D grid = config_grid(cfg);
  double zbar = cfg.num("fig8_zbar");
  RegularizedEProcess ereg = regularize(savage_dickey_gaussian(cfg.num("sd_variance")),
                                        vacuous_regularizer());
  LossFunction loss = squared_error_loss(
      linspace(cfg.num("action_lo"), cfg.num("action_hi"), cfg.inum("action_nodes")));

  std::vector<SeriesPoint> contour_rows, risk_rows;
  nlohmann::ordered_json decisions = nlohmann::ordered_json::array();
  for (double nd : cfg.nums("fig8_ns")) {
    int n = static_cast<int>(nd);
    Dataset data = mean_dataset(zbar, n);
    IMContour c = im_contour(ereg, data, n, grid);
    std::string series = "n=" + std::to_string(n);
    for (int i = 0; i < grid.nodes; ++i) {
      contour_rows.push_back({grid.point(i), c.pi(grid.point(i)), series});
    }
    std::vector<double> risks = risk_curve(c, loss);
    for (size_t i = 0; i < loss.actions.size(); ++i) {
      risk_rows.push_back({loss.actions[i], risks[i], series});
    }
    double a_star = optimal_action(c, loss);
    decisions.push_back({{"n", n},
                         {"action", a_star},
                         {"upper_risk", upper_expected_loss(c, loss, a_star)},
                         {"lower_risk", lower_expected_loss(c, loss, a_star)}});
  }
  write_series_csv(out_path(cfg, "fig8_contours.csv"), contour_rows);
  write_series_csv(out_path(cfg, "fig8_risk.csv"), risk_rows);

  nlohmann::ordered_json p = base_params(cfg);
  p["zbar"] = zbar;
  p["ns"] = cfg.nums("fig8_ns");
  p["sd_variance"] = cfg.num("sd_variance");
  p["decisions"] = decisions;
  write_manifest(cfg, "figure fig8", p, {"fig8_contours.csv", "fig8_risk.csv"},
                 "fig8_manifest.json");
  return 0;
}

int appd(const RunConfig& cfg) {
  Grid1D grid = config_grid(cfg);
  int n = cfg.inum("fig7_n");
  double zbar = cfg.num("fig7_zbar");
  double k = cfg.num("appd_k");
  Dataset data = mean_dataset(zbar, n);
  EProcess base = savage_dickey_gaussian(cfg.num("sd_variance"));
  Calibrator cal = config_calibrator(cfg);

  std::vector<SeriesPoint> rows;
  auto add_series = [&](const Regularizer& rho, const std::string& name) {
    RegularizedEProcess ereg = regularize(base, rho);
    for (int i = 0; i < grid.nodes; ++i) {
      double t = grid.point(i);
      rows.push_back({t, ereg.log_value(data, n, t), name});
    }
  };
  add_series(vacuous_regularizer(), "vacuous");
  add_series(regularizer_from_contour(make_prior(PriorKind::mean_bound, k, grid), cal),
             "mean_bound");
  add_series(regularizer_from_contour(make_prior(PriorKind::event_bound, k, grid), cal),
             "event_bound");
  write_series_csv(out_path(cfg, "appd.csv"), rows);

  nlohmann::ordered_json p = base_params(cfg);
  p["n"] = n;
  p["zbar"] = zbar;
  p["K"] = k;
  p["sd_variance"] = cfg.num("sd_variance");
  p["y"] = "log regularized e-value";
  write_manifest(cfg, "figure appD", p, {"appd.csv"}, "appd_manifest.json");
  return 0;
}

}  // namespace

int cmd_figure(const RunConfig& cfg, const std::string& figure_id) {
  if (figure_id == "fig2") return fig2(cfg);
  if (figure_id == "fig3") return fig3(cfg);
  if (figure_id == "fig4") return fig4(cfg);
  if (figure_id == "fig5") return fig5(cfg);
  if (figure_id == "fig6") return fig6(cfg);
  if (figure_id == "fig7") return fig7(cfg);
  if (figure_id == "fig8") return fig8(cfg);
  if (figure_id == "appD" || figure_id == "appd") return appd(cfg);
  throw UsageError("unknown figure id '" + figure_id +
                   "' (expected fig2..fig8 or appD)");
}

}  // namespace epim::cli
