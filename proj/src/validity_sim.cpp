#include "epim/validity_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace epim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kMembershipStream = 0x6d626572;  // distinct from replication streams

void validate_config(const SimConfig& config, bool needs_rules) {
  if (!config.draw_obs) throw std::invalid_argument("sim config lacks draw_obs");
  if (!config.prior.draw) throw std::invalid_argument("sim config lacks a prior sampler");
  if (config.reps < 2) throw std::invalid_argument("reps must be >= 2");
  if (config.n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  if (needs_rules && config.rules.empty()) throw std::invalid_argument("no stopping rules");
  for (double a : config.alphas) {
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");
  }
}

void guard_membership(const SimConfig& config) {
  if (!config.check_membership) return;
  if (!config.prior_contour.q) {
    throw std::invalid_argument("membership guard needs a prior contour (or disable the guard)");
  }
  MembershipReport rep = credal_membership(config.prior_contour, config.prior, 20, 4000,
                                           counter_mix(config.master_seed, kMembershipStream));
  if (rep.verdict == Membership::non_member) {
    std::ostringstream os;
    os << "prior " << config.prior.name << " is not a member of the credal set of "
       << config.prior_contour.name << ": Q{q(Theta) <= " << rep.worst_alpha
       << "} estimated at " << rep.worst_rate << " (margin " << rep.margin << ")";
    throw std::runtime_error(os.str());
  }
}

Dataset simulate_data(Rng& rng, const SimConfig& config, double theta) {
  Dataset data;
  data.obs.reserve(static_cast<size_t>(config.n_max));
  for (int i = 0; i < config.n_max; ++i) data.append(config.draw_obs(rng, theta));
  return data;
}

struct MeanAcc {
  double sum = 0.0, sumsq = 0.0;
  long count = 0;
  void add(double x) {
    sum += x;
    sumsq += x * x;
    ++count;
  }
  double mean() const { return sum / count; }
  double se() const {
    double m = mean();
    double var = (sumsq - count * m * m) / (count - 1);
    return std::sqrt(std::max(var, 0.0) / count);
  }
};

RateRow make_rate_row(const std::string& rule, double alpha, long hits, int reps) {
  RateRow row;
  row.rule = rule;
  row.alpha = alpha;
  row.rate = static_cast<double>(hits) / reps;
  row.se = std::sqrt(row.rate * (1.0 - row.rate) / reps);
  row.pass = row.rate <= alpha + 3.0 * row.se;
  return row;
}

}  // namespace

SimReport run_ville_check(const SimConfig& config) {
  validate_config(config, true);
  if (config.alphas.empty()) throw std::invalid_argument("no alpha levels");
  guard_membership(config);
  RegularizedEProcess ereg = regularize(config.base, config.rho);

  size_t nr = config.rules.size(), na = config.alphas.size();
  std::vector<long> hits(nr * na, 0);
  for (int r = 0; r < config.reps; ++r) {
    Rng rng(counter_mix(config.master_seed, static_cast<std::uint64_t>(r)));
    double theta = config.prior.draw(rng);
    Dataset data = simulate_data(rng, config, theta);
    std::vector<double> path = ereg.log_value_path(data, config.n_max, theta);
    for (size_t ri = 0; ri < nr; ++ri) {
      double stopped = path[static_cast<size_t>(stop_index_log(config.rules[ri], path))];
      for (size_t ai = 0; ai < na; ++ai) {
        if (stopped >= -std::log(config.alphas[ai])) ++hits[ri * na + ai];
      }
    }
  }

  SimReport report;
  report.check = "ville";
  report.label = config.label;
  report.reps = config.reps;
  report.master_seed = config.master_seed;
  for (size_t ri = 0; ri < nr; ++ri) {
    for (size_t ai = 0; ai < na; ++ai) {
      report.rates.push_back(make_rate_row(config.rules[ri].label(), config.alphas[ai],
                                           hits[ri * na + ai], config.reps));
      report.all_pass = report.all_pass && report.rates.back().pass;
    }
  }
  return report;
}

SimReport run_expectation_check(const SimConfig& config) {
  validate_config(config, true);
  guard_membership(config);
  RegularizedEProcess ereg = regularize(config.base, config.rho);

  std::vector<MeanAcc> acc(config.rules.size());
  for (int r = 0; r < config.reps; ++r) {
    Rng rng(counter_mix(config.master_seed, static_cast<std::uint64_t>(r)));
    double theta = config.prior.draw(rng);
    Dataset data = simulate_data(rng, config, theta);
    std::vector<double> path = ereg.log_value_path(data, config.n_max, theta);
    for (size_t ri = 0; ri < config.rules.size(); ++ri) {
      int idx = stop_index_log(config.rules[ri], path);
      acc[ri].add(std::exp(path[static_cast<size_t>(idx)]));
    }
  }

  SimReport report;
  report.check = "expectation";
  report.label = config.label;
  report.reps = config.reps;
  report.master_seed = config.master_seed;
  for (size_t ri = 0; ri < config.rules.size(); ++ri) {
    MeanRow row;
    row.rule = config.rules[ri].label();
    row.mean = acc[ri].mean();
    row.se = acc[ri].se();
    row.pass = row.mean <= 1.0 + 3.0 * row.se;
    report.means.push_back(row);
    report.all_pass = report.all_pass && row.pass;
  }
  return report;
}

SimReport run_decision_bound_check(const SimConfig& config, const LossFunction& loss,
                                   const Grid1D& grid) {
  validate_config(config, true);
  grid.validate();
  if (loss.actions.empty()) throw std::invalid_argument("empty action grid");
  guard_membership(config);
  RegularizedEProcess ereg = regularize(config.base, config.rho);

  size_t nr = config.rules.size(), na = config.alphas.size();
  std::vector<long> hits(nr * na, 0);
  std::vector<MeanAcc> acc(nr);
  int pointwise_failures = 0;
  double h = grid.spacing();

  for (int r = 0; r < config.reps; ++r) {
    Rng rng(counter_mix(config.master_seed, static_cast<std::uint64_t>(r)));
    double theta = config.prior.draw(rng);
    Dataset data = simulate_data(rng, config, theta);
    std::vector<double> path = ereg.log_value_path(data, config.n_max, theta);
    for (size_t ri = 0; ri < nr; ++ri) {
      int n_stop = stop_index_log(config.rules[ri], path);
      IMContour contour = im_contour(ereg, data, n_stop, grid);
      std::vector<double> risks = risk_curve(contour, loss);

      int node = std::clamp(static_cast<int>(std::lround((theta - grid.lo) / h)), 0,
                            grid.nodes - 1);
      double t = grid.point(node);
      double ratio_theta = 0.0, ratio_node = 0.0;
      for (size_t ai = 0; ai < loss.actions.size(); ++ai) {
        double lt = loss.loss(loss.actions[ai], theta);
        if (lt > 0.0) ratio_theta = std::max(ratio_theta, lt / risks[ai]);
        double ln = loss.loss(loss.actions[ai], t);
        if (ln > 0.0) ratio_node = std::max(ratio_node, ln / risks[ai]);
      }
      double bound = std::max(1.0, std::exp(contour.log_ereg(t)));
      if (!(ratio_node <= bound * (1.0 + 1e-9))) ++pointwise_failures;

      acc[ri].add(ratio_theta);
      for (size_t ai = 0; ai < na; ++ai) {
        if (ratio_theta >= 1.0 / config.alphas[ai]) ++hits[ri * na + ai];
      }
    }
  }

  SimReport report;
  report.check = "decision";
  report.label = config.label;
  report.reps = config.reps;
  report.master_seed = config.master_seed;
  for (size_t ri = 0; ri < nr; ++ri) {
    for (size_t ai = 0; ai < na; ++ai) {
      report.rates.push_back(make_rate_row(config.rules[ri].label(), config.alphas[ai],
                                           hits[ri * na + ai], config.reps));
      report.all_pass = report.all_pass && report.rates.back().pass;
    }
    MeanRow row;
    row.rule = config.rules[ri].label();
    row.mean = acc[ri].mean();
    row.se = acc[ri].se();
    row.pass = row.mean <= 1.0 + 3.0 * row.se;
    report.means.push_back(row);
    report.all_pass = report.all_pass && row.pass;
  }
  report.pointwise_failures = pointwise_failures;
  report.pointwise_all = pointwise_failures == 0;
  report.all_pass = report.all_pass && report.pointwise_all;
  return report;
}

GrowthTable run_growth_curve(const std::function<double(Rng&)>& draw_truth, double theta_star,
                             const EProcess& base, const std::vector<Regularizer>& rhos,
                             const std::vector<std::string>& labels, int n_max, int reps,
                             std::uint64_t seed) {
  if (!draw_truth) throw std::invalid_argument("draw_truth required");
  if (!base.log_path) throw std::invalid_argument("base e-process lacks a path evaluator");
  if (rhos.empty() || rhos.size() != labels.size()) {
    throw std::invalid_argument("rhos/labels mismatch");
  }
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  if (reps < 2) throw std::invalid_argument("reps must be >= 2");

  // Common random numbers: every column sees the same base path, so a
  // column only shifts by its constant log rho(theta_star).
  std::vector<double> offsets(rhos.size());
  for (size_t c = 0; c < rhos.size(); ++c) {
    if (!rhos[c].log_rho) throw std::invalid_argument("regularizer lacks a 1D evaluator");
    offsets[c] = rhos[c].log_rho(theta_star);
  }

  std::vector<MeanAcc> acc(static_cast<size_t>(n_max));
  for (int r = 0; r < reps; ++r) {
    Rng rng(counter_mix(seed, static_cast<std::uint64_t>(r)));
    Dataset data;
    data.obs.reserve(static_cast<size_t>(n_max));
    for (int i = 0; i < n_max; ++i) data.append(draw_truth(rng));
    std::vector<double> path = base.log_path(data, n_max, theta_star);
    for (int n = 1; n <= n_max; ++n) acc[static_cast<size_t>(n - 1)].add(path[static_cast<size_t>(n)]);
  }

  GrowthTable table;
  table.labels = labels;
  table.ns.resize(static_cast<size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) table.ns[static_cast<size_t>(n - 1)] = n;
  table.mean_log.assign(rhos.size(), std::vector<double>(static_cast<size_t>(n_max)));
  table.se_log.assign(rhos.size(), std::vector<double>(static_cast<size_t>(n_max)));
  for (size_t c = 0; c < rhos.size(); ++c) {
    for (int n = 1; n <= n_max; ++n) {
      table.mean_log[c][static_cast<size_t>(n - 1)] = acc[static_cast<size_t>(n - 1)].mean() + offsets[c];
      table.se_log[c][static_cast<size_t>(n - 1)] = acc[static_cast<size_t>(n - 1)].se();
    }
  }
  return table;
}

ContractionReport run_contraction_check(const Contour& prior, const RegularizedEProcess& ereg,
                                        int n, const Grid1D& data_grid,
                                        const Grid1D& param_grid,
                                        const std::vector<std::pair<double, double>>& hypotheses) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!prior.q) throw std::invalid_argument("prior contour lacks an evaluator");
  if (hypotheses.empty()) throw std::invalid_argument("no hypotheses");
  data_grid.validate();
  param_grid.validate();

  std::vector<double> prior_q(static_cast<size_t>(param_grid.nodes));
  for (int i = 0; i < param_grid.nodes; ++i) {
    prior_q[static_cast<size_t>(i)] = prior.q(param_grid.point(i));
  }

  struct HypState {
    int lo = 0, hi = -1;  // node index range of H
    double prior_upper = 0.0, prior_lower = 0.0;
    double max_post_upper = -kInf, min_post_lower = kInf;
  };
  std::vector<HypState> states(hypotheses.size());
  for (size_t hi = 0; hi < hypotheses.size(); ++hi) {
    auto [a, b] = hypotheses[hi];
    if (!(a <= b)) throw std::invalid_argument("hypothesis interval reversed");
    HypState& st = states[hi];
    double in_max = -1.0, out_max = -1.0;
    st.lo = param_grid.nodes;
    for (int i = 0; i < param_grid.nodes; ++i) {
      double t = param_grid.point(i);
      if (t >= a && t <= b) {
        st.lo = std::min(st.lo, i);
        st.hi = std::max(st.hi, i);
        in_max = std::max(in_max, prior_q[static_cast<size_t>(i)]);
      } else {
        out_max = std::max(out_max, prior_q[static_cast<size_t>(i)]);
      }
    }
    if (st.hi < st.lo) throw std::invalid_argument("hypothesis misses the parameter grid");
    st.prior_upper = in_max;
    st.prior_lower = out_max < 0.0 ? 1.0 : 1.0 - out_max;
  }

  std::vector<double> post(static_cast<size_t>(param_grid.nodes));
  for (int di = 0; di < data_grid.nodes; ++di) {
    Dataset data = Dataset::from_observations(
        std::vector<double>(static_cast<size_t>(n), data_grid.point(di)));
    for (int i = 0; i < param_grid.nodes; ++i) {
      double lv = ereg.log_value(data, n, param_grid.point(i));
      post[static_cast<size_t>(i)] = std::exp(-std::max(0.0, lv));
    }
    for (auto& st : states) {
      double in_max = -1.0, out_max = -1.0;
      for (int i = 0; i < param_grid.nodes; ++i) {
        if (i >= st.lo && i <= st.hi) {
          in_max = std::max(in_max, post[static_cast<size_t>(i)]);
        } else {
          out_max = std::max(out_max, post[static_cast<size_t>(i)]);
        }
      }
      st.max_post_upper = std::max(st.max_post_upper, in_max);
      double lower = out_max < 0.0 ? 1.0 : 1.0 - out_max;
      st.min_post_lower = std::min(st.min_post_lower, lower);
    }
  }

  ContractionReport report;
  for (size_t hi = 0; hi < hypotheses.size(); ++hi) {
    const HypState& st = states[hi];
    ContractionRow row;
    row.h_lo = hypotheses[hi].first;
    row.h_hi = hypotheses[hi].second;
    row.prior_upper = st.prior_upper;
    row.max_posterior_upper = st.max_post_upper;
    row.prior_lower = st.prior_lower;
    row.min_posterior_lower = st.min_post_lower;
    row.pass = st.max_post_upper >= st.prior_upper - 1e-9 &&
               st.min_post_lower <= st.prior_lower + 1e-9;
    report.rows.push_back(row);
    report.all_pass = report.all_pass && row.pass;
  }
  return report;
}

}  // namespace epim
