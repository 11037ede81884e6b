#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "epim/eprocess.hpp"
#include "epim/im.hpp"
#include "epim/possibility.hpp"
#include "epim/regularization.hpp"

namespace epim {

// One (prior, model, regularized e-process, rules, alphas) audit
// configuration. The prior sampler must be a member of the contour's credal
// set; runs refuse non-members when the guard is on.
struct SimConfig {
  std::function<double(Rng&, double)> draw_obs;  // one observation given theta
  PriorSampler prior;
  Contour prior_contour;  // credal set the prior claims membership of
  bool check_membership = true;
  EProcess base;
  Regularizer rho;
  std::vector<StoppingRule> rules;
  std::vector<double> alphas;
  int reps = 10000;
  int n_max = 100;  // simulated path length
  std::uint64_t master_seed = 1;
  std::string label;
};

struct RateRow {
  std::string rule;
  double alpha = 0.0;
  double rate = 0.0;
  double se = 0.0;  // sqrt(rate (1-rate) / reps)
  bool pass = true; // rate <= alpha + 3 se
};

struct MeanRow {
  std::string rule;
  double mean = 0.0;
  double se = 0.0;  // sample standard error
  bool pass = true; // mean <= 1 + 3 se
};

struct SimReport {
  std::string check;
  std::string label;
  std::vector<RateRow> rates;
  std::vector<MeanRow> means;
  bool pointwise_all = true;  // decision check: every replication certified
  int pointwise_failures = 0;
  bool all_pass = true;
  int reps = 0;
  std::uint64_t master_seed = 0;
};

// Replication r uses Rng(counter_mix(master_seed, r)), so results do not
// depend on execution order.

// Thm-1 rate audit: P{e^reg at the stopped index >= 1/alpha} <= alpha,
// per (rule, alpha). Throws std::runtime_error when the prior fails the
// membership guard.
SimReport run_ville_check(const SimConfig& config);

// Thm-1 expectation audit: mean of e^reg at the stopped index <= 1 per rule.
SimReport run_expectation_check(const SimConfig& config);

// Decision-bound audit: sup over actions of loss_a(Theta)/upper_risk(a) has
// mean <= 1 and P{ratio >= 1/alpha} <= alpha; each replication additionally
// certifies the pointwise bound ratio <= max(1, e^reg(Z^N, t)) at the grid
// node t nearest Theta (the exact node-level bound; see im.hpp). Contours
// are built on `grid`.
SimReport run_decision_bound_check(const SimConfig& config, const LossFunction& loss,
                                   const Grid1D& grid);

struct GrowthTable {
  std::vector<int> ns;                       // 1..n_max
  std::vector<std::string> labels;           // one per regularizer
  std::vector<std::vector<double>> mean_log; // [label][n-1]
  std::vector<std::vector<double>> se_log;   // matching standard errors
};

// Mean of log e^reg(z^n, theta_star) per n, one column per regularizer,
// data drawn from draw_truth. All columns share each replication's data
// (common random numbers), so column differences at fixed theta_star are
// exact regularizer log-ratios.
GrowthTable run_growth_curve(const std::function<double(Rng&)>& draw_truth, double theta_star,
                             const EProcess& base, const std::vector<Regularizer>& rhos,
                             const std::vector<std::string>& labels, int n_max, int reps,
                             std::uint64_t seed);

struct ContractionRow {
  double h_lo = 0.0, h_hi = 0.0;  // interval hypothesis
  double prior_upper = 0.0;
  double max_posterior_upper = 0.0;
  double prior_lower = 0.0;
  double min_posterior_lower = 0.0;
  bool pass = true;
};

struct ContractionReport {
  std::vector<ContractionRow> rows;
  bool all_pass = true;
};

// No-one-sided-contraction audit: for each interval hypothesis H, some
// dataset in the family keeps the posterior upper probability at or above
// the prior upper probability (within 1e-9), and some dataset keeps the
// posterior lower at or below the prior lower. Datasets range over mean
// values on data_grid with fixed n.
ContractionReport run_contraction_check(const Contour& prior, const RegularizedEProcess& ereg,
                                        int n, const Grid1D& data_grid,
                                        const Grid1D& param_grid,
                                        const std::vector<std::pair<double, double>>& hypotheses);

}  // namespace epim
