#include <algorithm>
#include <cmath>
#include <iostream>
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

nlohmann::ordered_json region_json(const ConfidenceRegion& region, const Grid2D& grid,
                                   double alpha) {
  nlohmann::ordered_json r;
  r["alpha"] = alpha;
  r["empty"] = region.empty;
  int count = 0;
  double clo = 0, chi = 0, elo = 0, ehi = 0;
  bool first = true;
  for (int ia = 0; ia < grid.a.nodes; ++ia) {
    for (int ib = 0; ib < grid.b.nodes; ++ib) {
      if (!region.mask[grid.index(ia, ib)]) continue;
      ++count;
      double tc = grid.a.point(ia), te = grid.b.point(ib);
      if (first) {
        clo = chi = tc;
        elo = ehi = te;
        first = false;
      } else {
        clo = std::min(clo, tc);
        chi = std::max(chi, tc);
        elo = std::min(elo, te);
        ehi = std::max(ehi, te);
      }
    }
  }
  r["node_count"] = count;
  if (count > 0) {
    r["theta_cmt_range"] = {clo, chi};
    r["theta_ecmo_range"] = {elo, ehi};
  }
  return r;
}

nlohmann::ordered_json test_json(const CompositeTestResult& t) {
  return {{"reject", t.reject},
          {"min_log_ereg", t.min_log_e},
          {"argmin_theta_cmt", t.argmin_a},
          {"argmin_theta_ecmo", t.argmin_b}};
}

}  // namespace

int cmd_ware(const RunConfig& cfg) {
  int nodes = cfg.inum("ware_grid_nodes");
  Grid2D grid{{0.0, 1.0, nodes}, {0.0, 1.0, nodes}};
  grid.validate();
  WareCounts counts{cfg.num("ware_survivals_cmt"), cfg.num("ware_deaths_cmt"),
                    cfg.num("ware_survivals_ecmo"), cfg.num("ware_deaths_ecmo")};
  Dataset data = Dataset::from_counts(counts);
  double alpha = cfg.num("alpha");
  if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("alpha must lie in (0, 1)");

  EProcess base = ware_binomial(counts.survivals_cmt, counts.deaths_cmt, counts.survivals_ecmo,
                                counts.deaths_ecmo, cfg.num("ware_beta"));
  Calibrator cal = beta_mixture_calibrator(cfg.num("calibrator_kappa"));
  std::vector<std::pair<std::string, RegularizedEProcess>> variants;
  variants.emplace_back("unregularized", regularize(base, vacuous_regularizer()));
  variants.emplace_back("regularized",
                        regularize(base, regularizer_from_contour(make_ware_joint_prior(grid), cal)));

  // H0: ECMO is no better than CMT (theta_ecmo <= theta_cmt), and its
  // complement, tested on the same grid.
  std::vector<char> h_le(grid.size(), 0), h_gt(grid.size(), 0);
  for (int ia = 0; ia < grid.a.nodes; ++ia) {
    for (int ib = 0; ib < grid.b.nodes; ++ib) {
      bool le = grid.b.point(ib) <= grid.a.point(ia);
      h_le[grid.index(ia, ib)] = le ? 1 : 0;
      h_gt[grid.index(ia, ib)] = le ? 0 : 1;
    }
  }

  Grid1D delta_grid{-1.0, 1.0, cfg.inum("delta_nodes")};
  delta_grid.validate();

  nlohmann::ordered_json report;
  report["survivals_cmt"] = counts.survivals_cmt;
  report["deaths_cmt"] = counts.deaths_cmt;
  report["survivals_ecmo"] = counts.survivals_ecmo;
  report["deaths_ecmo"] = counts.deaths_ecmo;
  report["beta"] = cfg.num("ware_beta");
  report["calibrator_kappa"] = cfg.num("calibrator_kappa");
  report["grid_nodes_per_axis"] = nodes;
  report["alpha"] = alpha;

  std::vector<SeriesPoint> marginal_rows;
  for (const auto& [name, ereg] : variants) {
    ConfidenceRegion region = confidence_region2(ereg, data, alpha, grid);
    report["region_" + name] = region_json(region, grid, alpha);

    CompositeTestResult t_le = composite_test2(ereg, data, h_le, alpha, grid);
    CompositeTestResult t_gt = composite_test2(ereg, data, h_gt, alpha, grid);
    nlohmann::ordered_json tests;
    tests["ecmo_le_cmt"] = test_json(t_le);
    tests["ecmo_gt_cmt"] = test_json(t_gt);
    tests["retains_ecmo_le_cmt"] = !t_le.reject;
    report["tests_" + name] = tests;

    Contour2D c2;
    c2.grid = grid;
    c2.name = name;
    c2.q = [ereg = ereg, data](double a, double b) {
      return std::exp(-std::max(0.0, ereg.log_value2(data, a, b)));
    };
    MarginalResult m = extension_marginal(c2, delta_grid);
    for (int i = 0; i < delta_grid.nodes; ++i) {
      marginal_rows.push_back({delta_grid.point(i), m.phi.q(delta_grid.point(i)), name});
    }
    auto [lo, hi] = marginal_expectation_interval(m.phi);
    report["delta_expectation_interval_" + name] = {lo, hi};
  }
  write_series_csv(out_path(cfg, "ware_marginal.csv"), marginal_rows);

  std::string text = report.dump(2) + "\n";
  write_text_file(out_path(cfg, "ware_report.json"), text);
  std::cout << text;

  nlohmann::ordered_json p;
  p["alpha"] = alpha;
  p["delta_nodes"] = cfg.inum("delta_nodes");
  for (auto it = report.begin(); it != report.end(); ++it) {
    if (it.key().rfind("region_", 0) != 0 && it.key().rfind("tests_", 0) != 0) {
      p[it.key()] = it.value();
    }
  }
  write_manifest(cfg, "ware", p, {"ware_report.json", "ware_marginal.csv"},
                 "ware_manifest.json");
  return 0;
}

}  // namespace epim::cli
