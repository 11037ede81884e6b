// Acceptance gate: one [PASS]/[FAIL] line per criterion, exit code = number
// of failures. Tolerances are pinned here on purpose; do not loosen them to
// make a run green.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "epim/calibration.hpp"
#include "epim/eprocess.hpp"
#include "epim/im.hpp"
#include "epim/possibility.hpp"
#include "epim/regularization.hpp"
#include "epim/rng.hpp"
#include "epim/special.hpp"
#include "epim/validity_sim.hpp"

using namespace epim;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double secs() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

int g_failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail, double secs) {
  std::printf("[%s] %2d %-28s %s (%.2fs)\n", pass ? "PASS" : "FAIL", id, name, detail.c_str(),
              secs);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Dataset repeated_mean(double zbar, int n) {
  return Dataset::from_observations(std::vector<double>(static_cast<size_t>(n), zbar));
}

// 1. Calibrator admissibility: |int_0^1 du/gamma(u) - 1| < 1e-4 for
//    kappa in {0.5, 1, 2} at 1e4 quadrature nodes.
void criterion_1() {
  Timer t;
  double worst = 0.0;
  for (double kappa : {0.5, 1.0, 2.0}) {
    worst = std::max(worst, admissibility_residual(beta_mixture_calibrator(kappa), 10000));
  }
  report(1, "calibrator admissibility", worst < 1e-4, fmt("worst residual %.3g < 1e-4", worst),
         t.secs());
}

// 2. Gaussian-mean mixture e-value: closed form vs quadrature, rel err
//    < 1e-6 on 100 random (n, zbar, theta, v) tuples.
void criterion_2() {
  Timer t;
  Rng rng(20250819);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    int n = 1 + static_cast<int>(rng.uniform() * 50.0);
    double zbar = -3.0 + 6.0 * rng.uniform();
    double theta = -3.0 + 6.0 * rng.uniform();
    double v = rng.uniform() < 0.5 ? 1.0 : 10.0;
    Dataset data = repeated_mean(zbar, n);
    EProcess sd = savage_dickey_gaussian(v);
    double cf = std::exp(sd.log_e(data, n, theta));
    double qd = savage_dickey_quadrature_oracle(v, data, n, theta, 20001);
    worst = std::max(worst, std::abs(cf - qd) / qd);
  }
  report(2, "closed form vs quadrature", worst < 1e-6, fmt("worst rel err %.3g < 1e-6", worst),
         t.secs());
}

// 3. Choquet upper expected squared-error loss at a = zbar matches the
//    closed form (1/n){2 + log(nv+1) + n zbar^2/(nv+1)} within 1e-3.
void criterion_3() {
  Timer t;
  Grid1D grid{-4.0, 4.0, 32001};
  RegularizedEProcess ereg = regularize(savage_dickey_gaussian(10.0), vacuous_regularizer());
  IMContour c = im_contour(ereg, repeated_mean(0.5, 5), 5, grid);
  LossFunction loss = squared_error_loss({0.5});
  double val = upper_expected_loss(c, loss, 0.5);
  double target = (1.0 / 5.0) * (2.0 + std::log(51.0) + (5.0 / 51.0) * 0.25);
  report(3, "closed-form upper loss", std::abs(val - target) < 1e-3,
         fmt("|%.6f - %.6f| = %.2g < 1e-3", val, target, std::abs(val - target)), t.secs());
}

struct WareSetup {
  Grid2D grid;
  Dataset data;
  RegularizedEProcess unregularized;
  RegularizedEProcess regularized;
};

WareSetup ware_setup() {
  WareSetup w;
  w.grid = Grid2D{{0.0, 1.0, 401}, {0.0, 1.0, 401}};
  WareCounts counts{6, 4, 9, 0};
  w.data = Dataset::from_counts(counts);
  EProcess base = ware_binomial(6, 4, 9, 0, 0.18);
  w.unregularized = regularize(base, vacuous_regularizer());
  w.regularized = regularize(
      base, regularizer_from_contour(make_ware_joint_prior(w.grid), beta_mixture_calibrator(1.0)));
  return w;
}

std::pair<double, double> ware_delta_interval(const WareSetup& w, const RegularizedEProcess& e) {
  Contour2D c2;
  c2.grid = w.grid;
  c2.name = "ware";
  c2.q = [&](double a, double b) {
    return std::exp(-std::max(0.0, e.log_value2(w.data, a, b)));
  };
  Grid1D delta_grid{-1.0, 1.0, 801};
  MarginalResult m = extension_marginal(c2, delta_grid);
  return marginal_expectation_interval(m.phi);
}

// 4. Two-arm trial expectation intervals for delta = theta_e - theta_c on a
//    401x401 grid, each endpoint within +-0.02 of the published values.
void criterion_4() {
  Timer t;
  WareSetup w = ware_setup();
  auto [ulo, uhi] = ware_delta_interval(w, w.unregularized);
  auto [rlo, rhi] = ware_delta_interval(w, w.regularized);
  bool pass = std::abs(ulo - (-0.042)) <= 0.02 && std::abs(uhi - 0.739) <= 0.02 &&
              std::abs(rlo - 0.086) <= 0.02 && std::abs(rhi - 0.820) <= 0.02;
  report(4, "two-arm delta intervals", pass,
         fmt("unreg [%.3f,%.3f] vs [-0.042,0.739]; reg [%.3f,%.3f] vs [0.086,0.820], tol 0.02",
             ulo, uhi, rlo, rhi),
         t.secs());
}

// 5. Both variants retain H0: theta_ecmo <= theta_cmt at alpha = 0.05.
void criterion_5() {
  Timer t;
  WareSetup w = ware_setup();
  std::vector<char> h_le = mask_where(w.grid, [](double a, double b) { return b <= a; });
  CompositeTestResult tu = composite_test2(w.unregularized, w.data, h_le, 0.05, w.grid);
  CompositeTestResult tr = composite_test2(w.regularized, w.data, h_le, 0.05, w.grid);
  report(5, "two-arm diagonal retained", !tu.reject && !tr.reject,
         fmt("min log e: unreg %.3f, reg %.3f, reject needs > %.3f", tu.min_log_e, tr.min_log_e,
             std::log(20.0)),
         t.secs());
}

SimConfig validity_config(bool point_mass_prior, int reps) {
  Grid1D grid{-4.0, 4.0, 801};
  SimConfig sc;
  sc.draw_obs = [](Rng& rng, double theta) { return theta + rng.normal(); };
  if (point_mass_prior) {
    sc.prior = PriorSampler{[](Rng&) { return 0.0; }, "point mass at 0"};
  } else {
    double sd = std::sqrt(0.1);
    sc.prior = PriorSampler{[sd](Rng& rng) { return sd * rng.normal(); }, "normal(0, 0.1)"};
  }
  sc.prior_contour = make_prior(PriorKind::gaussian_surprise, 0.1, grid);
  sc.rho = regularizer_from_contour(sc.prior_contour, beta_mixture_calibrator(1.0));
  sc.base = savage_dickey_gaussian(10.0);
  sc.rules = {StoppingRule::make_fixed(5), StoppingRule::make_fixed(20),
              StoppingRule::make_threshold(20.0, 100)};
  sc.alphas = {0.01, 0.05, 0.1};
  sc.reps = reps;
  sc.n_max = 100;
  sc.master_seed = 0xA11CEull;
  sc.label = sc.prior.name;
  return sc;
}

// 6. Stopped-e-value tail audit: violation rate <= alpha + 3 se for every
//    (prior, rule, alpha), 1e4 replications each prior.
void criterion_6() {
  Timer t;
  bool pass = true;
  double worst = -1.0;
  for (bool pm : {true, false}) {
    SimReport r = run_ville_check(validity_config(pm, 10000));
    for (const RateRow& row : r.rates) {
      pass = pass && row.pass;
      worst = std::max(worst, row.rate - (row.alpha + 3.0 * row.se));
    }
  }
  report(6, "stopped tail rates", pass, fmt("worst rate - (alpha+3se) = %.4g (pass needs <= 0)", worst),
         t.secs());
}

// 7. Stopped-e-value mean audit: mean <= 1 + 3 se for every (prior, rule).
void criterion_7() {
  Timer t;
  bool pass = true;
  double worst = -1.0;
  for (bool pm : {true, false}) {
    SimReport r = run_expectation_check(validity_config(pm, 10000));
    for (const MeanRow& row : r.means) {
      pass = pass && row.pass;
      worst = std::max(worst, row.mean - (1.0 + 3.0 * row.se));
    }
  }
  report(7, "stopped mean bound", pass, fmt("worst mean - (1+3se) = %.4g (pass needs <= 0)", worst),
         t.secs());
}

// 8. Decision bounds: the pointwise node certificate holds on every one of
//    1000 random replications, and the Monte Carlo mean of the sup ratio is
//    <= 1 + 3 se.
void criterion_8() {
  Timer t;
  SimConfig sc = validity_config(false, 1000);
  sc.rules = {StoppingRule::make_fixed(10)};
  sc.alphas = {0.05};
  Grid1D contour_grid{-4.0, 4.0, 2001};
  Grid1D action_grid{-2.0, 2.0, 81};
  LossFunction loss = squared_error_loss(action_grid.points());
  SimReport r = run_decision_bound_check(sc, loss, contour_grid);
  bool means_ok = true;
  double worst_mean = 0.0;
  for (const MeanRow& row : r.means) {
    means_ok = means_ok && row.pass;
    worst_mean = std::max(worst_mean, row.mean);
  }
  report(8, "decision certificates", r.pointwise_all && means_ok,
         fmt("pointwise failures %.0f/1000, mean sup ratio %.3f", double(r.pointwise_failures),
             worst_mean),
         t.secs());
}

// 9. Growth ordering at n = 30, theta* = 0.7, truth N(0,1), 500 reps:
//    mean log e^reg columns K=0.1 >= K=0.2 >= K=0.4 >= K=0.8 >= vacuous,
//    each adjacent slack >= -2 sqrt(se_a^2 + se_b^2).
void criterion_9() {
  Timer t;
  Grid1D grid{-4.0, 4.0, 801};
  Calibrator cal = beta_mixture_calibrator(1.0);
  std::vector<Regularizer> rhos;
  std::vector<std::string> labels;
  for (double k : {0.1, 0.2, 0.4, 0.8}) {
    rhos.push_back(regularizer_from_contour(make_prior(PriorKind::gaussian_surprise, k, grid), cal));
    labels.push_back("K=" + std::to_string(k));
  }
  rhos.push_back(vacuous_regularizer());
  labels.push_back("vacuous");
  GrowthTable g = run_growth_curve([](Rng& rng) { return rng.normal(); }, 0.7,
                                   savage_dickey_gaussian(10.0), rhos, labels, 30, 500, 0x97061ull);
  int at = 29;  // n = 30
  bool pass = true;
  double min_slack = 1e300;
  for (size_t i = 0; i + 1 < rhos.size(); ++i) {
    double diff = g.mean_log[i][at] - g.mean_log[i + 1][at];
    double band = 2.0 * std::sqrt(g.se_log[i][at] * g.se_log[i][at] +
                                  g.se_log[i + 1][at] * g.se_log[i + 1][at]);
    min_slack = std::min(min_slack, diff + band);
    pass = pass && (diff >= -band);
  }
  report(9, "growth ordering", pass, fmt("min slack diff+2se = %.3f (pass needs >= 0)", min_slack),
         t.secs());
}

// 10. No one-sided contraction: for each of 50 random interval hypotheses,
//     some dataset keeps the posterior upper probability >= prior - 1e-9.
void criterion_10() {
  Timer t;
  Grid1D param_grid{-4.0, 4.0, 801};
  Grid1D data_grid{-4.0, 4.0, 161};
  Contour prior = make_prior(PriorKind::gaussian_surprise, 0.2, param_grid);
  RegularizedEProcess ereg = regularize(
      savage_dickey_gaussian(10.0), regularizer_from_contour(prior, beta_mixture_calibrator(1.0)));
  Rng rng(0xC0117AC7ull);
  std::vector<std::pair<double, double>> hypotheses;
  for (int i = 0; i < 50; ++i) {
    double a = -4.0 + rng.uniform() * 7.9;
    double b = std::min(4.0, a + 0.05 + rng.uniform() * 1.95);
    hypotheses.emplace_back(a, b);
  }
  ContractionReport r = run_contraction_check(prior, ereg, 25, data_grid, param_grid, hypotheses);
  bool pass = true;
  double worst = 0.0;
  for (const ContractionRow& row : r.rows) {
    double deficit = row.prior_upper - row.max_posterior_upper;
    worst = std::max(worst, deficit);
    pass = pass && (deficit <= 1e-9);
  }
  report(10, "no upper contraction", pass, fmt("worst prior - max posterior = %.3g <= 1e-9", worst),
         t.secs());
}

// 11. Probability-to-possibility transform of N(0,1) matches the K=1
//     chi-squared surprise contour within 2e-3 at every grid node.
void criterion_11() {
  Timer t;
  Grid1D grid{-4.0, 4.0, 801};
  PriorSampler std_normal{[](Rng& rng) { return rng.normal(); }, "standard normal"};
  Contour mc = prob_to_possibility([](double y) { return normal_pdf(y); }, std_normal, 2000000,
                                   0x9055ull, grid);
  Contour exact = make_prior(PriorKind::gaussian_surprise, 1.0, grid);
  double worst = 0.0;
  for (int i = 0; i < grid.nodes; ++i) {
    worst = std::max(worst, std::abs(mc.q(grid.point(i)) - exact.q(grid.point(i))));
  }
  report(11, "transform cross-check", worst < 2e-3, fmt("sup |mc - exact| = %.3g < 2e-3", worst),
         t.secs());
}

// 12. Duality: the alpha level set of the contour equals the alpha
//     confidence region node-for-node, and the composite test rejects H
//     exactly when H misses the region; 100 random (alpha, interval) pairs.
void criterion_12() {
  Timer t;
  Grid1D grid{-4.0, 4.0, 801};
  RegularizedEProcess ereg = regularize(
      savage_dickey_gaussian(10.0),
      regularizer_from_contour(make_prior(PriorKind::gaussian_surprise, 0.1, grid),
                               beta_mixture_calibrator(1.0)));
  Dataset data = repeated_mean(0.5, 5);
  IMContour c = im_contour(ereg, data, 5, grid);
  Rng rng(0xD0A1ull);
  int bad = 0;
  for (int j = 0; j < 100; ++j) {
    double alpha = 0.01 + 0.49 * rng.uniform();
    ConfidenceRegion region = confidence_region(ereg, data, 5, alpha, grid);
    for (int i = 0; i < grid.nodes; ++i) {
      bool level = c.pi(grid.point(i)) >= alpha;
      if (level != static_cast<bool>(region.mask[static_cast<size_t>(i)])) ++bad;
    }
    double a = -4.0 + rng.uniform() * 7.9;
    double b = std::min(4.0, a + 0.05 + rng.uniform() * 1.95);
    std::vector<char> h = mask_where(grid, [&](double x) { return x >= a && x <= b; });
    bool any_overlap = false;
    for (int i = 0; i < grid.nodes; ++i) {
      if (h[static_cast<size_t>(i)] && region.mask[static_cast<size_t>(i)]) any_overlap = true;
    }
    CompositeTestResult test = composite_test(ereg, data, 5, h, alpha, grid);
    if (test.reject != !any_overlap) ++bad;
  }
  report(12, "region/test duality", bad == 0, fmt("%.0f disagreements (needs 0)", double(bad)),
         t.secs());
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  std::printf("%d of 12 criteria failed\n", g_failures);
  return g_failures;
}
