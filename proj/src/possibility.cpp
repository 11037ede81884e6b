#include "epim/possibility.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <stdexcept>

#include "epim/special.hpp"

namespace epim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Nodes with positive contour, sorted by descending contour value, with the
// running maximum of g. The s-integrand sup{g: q > s} is the step function
// s -> gmax[k] on [q[k+1], q[k]), which both Choquet evaluators walk.
struct LevelSteps {
  std::vector<double> q;     // descending, > 0
  std::vector<double> gmax;  // prefix maxima of g in that order
};

LevelSteps build_steps(const std::vector<double>& contour_vals, const std::vector<double>& g_vals) {
  if (contour_vals.size() != g_vals.size()) {
    throw std::invalid_argument("contour/g value size mismatch");
  }
  std::vector<int> idx;
  idx.reserve(contour_vals.size());
  for (int i = 0; i < static_cast<int>(contour_vals.size()); ++i) {
    if (contour_vals[i] > 0.0) idx.push_back(i);
  }
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return contour_vals[a] > contour_vals[b]; });
  LevelSteps steps;
  steps.q.reserve(idx.size());
  steps.gmax.reserve(idx.size());
  double running = -kInf;
  for (int i : idx) {
    running = std::max(running, g_vals[i]);
    steps.q.push_back(contour_vals[i]);
    steps.gmax.push_back(running);
  }
  return steps;
}

}  // namespace

std::vector<double> contour_values(const Contour& c) {
  c.grid.validate();
  std::vector<double> v(static_cast<size_t>(c.grid.nodes));
  for (int i = 0; i < c.grid.nodes; ++i) v[static_cast<size_t>(i)] = c.q(c.grid.point(i));
  return v;
}

std::vector<double> contour_values(const Contour2D& c) {
  c.grid.validate();
  std::vector<double> v(c.grid.size());
  for (int ia = 0; ia < c.grid.a.nodes; ++ia) {
    double ta = c.grid.a.point(ia);
    for (int ib = 0; ib < c.grid.b.nodes; ++ib) {
      v[c.grid.index(ia, ib)] = c.q(ta, c.grid.b.point(ib));
    }
  }
  return v;
}

Contour contour_from_values(const Grid1D& grid, std::vector<double> values, std::string name) {
  grid.validate();
  if (static_cast<int>(values.size()) != grid.nodes) {
    throw std::invalid_argument("contour_from_values: size mismatch");
  }
  auto vals = std::make_shared<std::vector<double>>(std::move(values));
  Contour c;
  c.grid = grid;
  c.name = std::move(name);
  c.q = [grid, vals](double t) {
    if (t <= grid.lo) return vals->front();
    if (t >= grid.hi) return vals->back();
    double x = (t - grid.lo) / grid.spacing();
    int i = static_cast<int>(std::floor(x));
    if (i >= grid.nodes - 1) return vals->back();
    double f = x - i;
    return (*vals)[static_cast<size_t>(i)] * (1.0 - f) + (*vals)[static_cast<size_t>(i) + 1] * f;
  };
  return c;
}

std::vector<char> mask_where(const Grid1D& g, const std::function<bool(double)>& pred) {
  g.validate();
  std::vector<char> m(static_cast<size_t>(g.nodes), 0);
  for (int i = 0; i < g.nodes; ++i) m[static_cast<size_t>(i)] = pred(g.point(i)) ? 1 : 0;
  return m;
}

std::vector<char> mask_where(const Grid2D& g, const std::function<bool(double, double)>& pred) {
  g.validate();
  std::vector<char> m(g.size(), 0);
  for (int ia = 0; ia < g.a.nodes; ++ia) {
    double ta = g.a.point(ia);
    for (int ib = 0; ib < g.b.nodes; ++ib) {
      m[g.index(ia, ib)] = pred(ta, g.b.point(ib)) ? 1 : 0;
    }
  }
  return m;
}

namespace {

double upper_prob_impl(const std::vector<double>& vals, const std::vector<char>& hyp) {
  if (vals.size() != hyp.size()) throw std::invalid_argument("hypothesis mask size mismatch");
  double best = -1.0;
  for (size_t i = 0; i < vals.size(); ++i) {
    if (hyp[i]) best = std::max(best, vals[i]);
  }
  if (best < 0.0) throw std::invalid_argument("empty hypothesis on grid");
  return best;
}

}  // namespace

double upper_probability(const Contour& c, const std::vector<char>& hypothesis) {
  return upper_prob_impl(contour_values(c), hypothesis);
}

double upper_probability(const Contour2D& c, const std::vector<char>& hypothesis) {
  return upper_prob_impl(contour_values(c), hypothesis);
}

double choquet_upper_exact(const std::vector<double>& contour_vals,
                           const std::vector<double>& g_vals) {
  LevelSteps steps = build_steps(contour_vals, g_vals);
  if (steps.q.empty()) return 0.0;
  for (double g : steps.gmax) {
    if (std::isinf(g) && g > 0.0) return kInf;
  }
  double total = 0.0;
  size_t m = steps.q.size();
  for (size_t k = 0; k < m; ++k) {
    double next = (k + 1 < m) ? steps.q[k + 1] : 0.0;
    total += (steps.q[k] - next) * steps.gmax[k];
  }
  return total;
}

double choquet_upper_exact(const Contour& c, const std::function<double(double)>& g) {
  std::vector<double> qv = contour_values(c);
  std::vector<double> gv(qv.size());
  for (int i = 0; i < c.grid.nodes; ++i) gv[static_cast<size_t>(i)] = g(c.grid.point(i));
  return choquet_upper_exact(qv, gv);
}

double choquet_upper_expectation(const Contour& c, const std::function<double(double)>& g,
                                 int s_nodes) {
  if (s_nodes < 1) throw std::invalid_argument("s_nodes must be >= 1");
  std::vector<double> qv = contour_values(c);
  std::vector<double> gv(qv.size());
  for (int i = 0; i < c.grid.nodes; ++i) gv[static_cast<size_t>(i)] = g(c.grid.point(i));
  LevelSteps steps = build_steps(qv, gv);
  if (steps.q.empty()) return 0.0;
  double total = 0.0;
  for (int j = 0; j < s_nodes; ++j) {
    double s = (j + 0.5) / s_nodes;
    // First index with q <= s; the level set {q > s} is the prefix before it.
    auto it = std::lower_bound(steps.q.begin(), steps.q.end(), s,
                               [](double qk, double sv) { return qk > sv; });
    size_t count = static_cast<size_t>(it - steps.q.begin());
    if (count == 0) continue;
    double sup = steps.gmax[count - 1];
    if (std::isinf(sup) && sup > 0.0) return kInf;
    total += sup;
  }
  return total / s_nodes;
}

MembershipReport credal_membership(const Contour& c, const PriorSampler& candidate,
                                   int alpha_nodes, int reps, std::uint64_t seed) {
  if (reps < 1000) throw std::invalid_argument("credal_membership needs reps >= 1000");
  if (alpha_nodes < 1) throw std::invalid_argument("alpha_nodes must be >= 1");
  c.grid.validate();
  Rng rng(seed);
  // Contour evaluators are total (closed forms everywhere, interpolated
  // contours clamp at the grid edges), so draws beyond the grid are scored
  // rather than rejected.
  std::vector<double> u(static_cast<size_t>(reps));
  for (int r = 0; r < reps; ++r) {
    u[static_cast<size_t>(r)] = c.q(candidate.draw(rng));
  }
  std::sort(u.begin(), u.end());
  MembershipReport rep;
  rep.margin = -kInf;
  bool violated = false;
  for (int j = 0; j < alpha_nodes; ++j) {
    double alpha = (j + 0.5) / alpha_nodes;
    auto it = std::upper_bound(u.begin(), u.end(), alpha);
    double rate = static_cast<double>(it - u.begin()) / reps;
    double se = std::sqrt(rate * (1.0 - rate) / reps);
    double margin = rate - (alpha + 3.0 * se);
    if (margin > rep.margin) {
      rep.margin = margin;
      rep.worst_alpha = alpha;
      rep.worst_rate = rate;
    }
    if (margin > 0.0) violated = true;
  }
  rep.verdict = violated ? Membership::non_member : Membership::member;
  return rep;
}

namespace {

Contour normalized_from_values(const Grid1D& grid, std::vector<double> psi, const std::string& name) {
  double mx = *std::max_element(psi.begin(), psi.end());
  if (!(mx > 0.0)) throw std::invalid_argument("degenerate (all-zero) contour");
  for (double& v : psi) v /= mx;
  return contour_from_values(grid, std::move(psi), name);
}

}  // namespace

Contour prob_to_possibility(const std::function<double(double)>& density,
                            const PriorSampler& sampler, int reps, std::uint64_t seed,
                            const Grid1D& grid) {
  grid.validate();
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  std::vector<double> node_density(static_cast<size_t>(grid.nodes));
  double dmax = 0.0;
  for (int i = 0; i < grid.nodes; ++i) {
    double d = density(grid.point(i));
    if (d < 0.0) throw std::invalid_argument("negative density");
    node_density[static_cast<size_t>(i)] = d;
    dmax = std::max(dmax, d);
  }
  if (dmax <= 0.0) throw std::invalid_argument("all-zero density on grid");
  Rng rng(seed);
  std::vector<double> sampled(static_cast<size_t>(reps));
  for (int r = 0; r < reps; ++r) sampled[static_cast<size_t>(r)] = density(sampler.draw(rng));
  std::sort(sampled.begin(), sampled.end());
  std::vector<double> psi(static_cast<size_t>(grid.nodes));
  for (int i = 0; i < grid.nodes; ++i) {
    auto it = std::upper_bound(sampled.begin(), sampled.end(), node_density[static_cast<size_t>(i)]);
    psi[static_cast<size_t>(i)] = static_cast<double>(it - sampled.begin()) / reps;
  }
  return normalized_from_values(grid, std::move(psi), "prob_to_possibility(" + sampler.name + ")");
}

Contour prob_to_possibility_exact(const std::function<double(double)>& density,
                                  const std::function<double(double)>& density_level_cdf,
                                  const Grid1D& grid) {
  grid.validate();
  std::vector<double> psi(static_cast<size_t>(grid.nodes));
  double dmax = 0.0;
  for (int i = 0; i < grid.nodes; ++i) {
    double d = density(grid.point(i));
    if (d < 0.0) throw std::invalid_argument("negative density");
    dmax = std::max(dmax, d);
    psi[static_cast<size_t>(i)] = density_level_cdf(d);
  }
  if (dmax <= 0.0) throw std::invalid_argument("all-zero density on grid");
  return normalized_from_values(grid, std::move(psi), "prob_to_possibility_exact");
}

MarginalResult extension_marginal(const Contour2D& c2, const Grid1D& delta_grid) {
  c2.grid.validate();
  delta_grid.validate();
  double h = delta_grid.spacing();
  std::vector<double> phi(static_cast<size_t>(delta_grid.nodes), -1.0);
  for (int ia = 0; ia < c2.grid.a.nodes; ++ia) {
    double tc = c2.grid.a.point(ia);
    for (int ib = 0; ib < c2.grid.b.nodes; ++ib) {
      double te = c2.grid.b.point(ib);
      double delta = te - tc;
      int j = static_cast<int>(std::lround((delta - delta_grid.lo) / h));
      if (j < 0 || j >= delta_grid.nodes) continue;
      if (std::abs(delta - delta_grid.point(j)) > h / 2.0 + 1e-12) continue;
      double v = c2.q(tc, te);
      phi[static_cast<size_t>(j)] = std::max(phi[static_cast<size_t>(j)], v);
    }
  }
  MarginalResult out;
  for (int j = 0; j < delta_grid.nodes; ++j) {
    if (phi[static_cast<size_t>(j)] < 0.0) {
      out.excluded.push_back(j);
      phi[static_cast<size_t>(j)] = 0.0;
    }
  }
  out.phi = normalized_from_values(delta_grid, std::move(phi), c2.name + " marginal");
  return out;
}

PriorKind prior_kind_from_string(const std::string& s) {
  if (s == "gaussian_surprise") return PriorKind::gaussian_surprise;
  if (s == "mean_bound") return PriorKind::mean_bound;
  if (s == "event_bound") return PriorKind::event_bound;
  if (s == "median_prior") return PriorKind::median_prior;
  if (s == "vacuous") return PriorKind::vacuous;
  throw std::invalid_argument("unknown prior kind: " + s);
}

std::string prior_kind_to_string(PriorKind k) {
  switch (k) {
    case PriorKind::gaussian_surprise: return "gaussian_surprise";
    case PriorKind::mean_bound: return "mean_bound";
    case PriorKind::event_bound: return "event_bound";
    case PriorKind::median_prior: return "median_prior";
    case PriorKind::vacuous: return "vacuous";
  }
  throw std::invalid_argument("unknown prior kind");
}

Contour make_prior(PriorKind kind, double K, const Grid1D& grid) {
  grid.validate();
  if (kind != PriorKind::vacuous && K <= 0.0) {
    throw std::invalid_argument("prior parameter K must be > 0");
  }
  Contour c;
  c.grid = grid;
  switch (kind) {
    case PriorKind::gaussian_surprise:
      c.q = [K](double t) { return 1.0 - chi_squared_1_cdf(t * t / K); };
      break;
    case PriorKind::mean_bound:
      c.q = [K](double t) { return std::min(1.0, K / std::abs(t)); };
      break;
    case PriorKind::event_bound:
      c.q = [K](double t) { return std::abs(t) <= 2.0 * K ? 1.0 : K / 5.0; };
      break;
    case PriorKind::median_prior:
      c.q = [](double t) { return (t < 0.0 ? 0.05 : 1.0) / (1.0 + std::abs(t)); };
      break;
    case PriorKind::vacuous:
      c.q = [](double) { return 1.0; };
      break;
  }
  c.name = prior_kind_to_string(kind);
  if (kind != PriorKind::vacuous && kind != PriorKind::median_prior) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "(K=%g)", K);
    c.name += buf;
  }
  return c;
}

Contour2D make_ware_joint_prior(const Grid2D& grid) {
  grid.validate();
  Contour2D c;
  c.grid = grid;
  c.q = [](double t_cmt, double t_ecmo) {
    double q_c = t_cmt <= 0.3 ? 1.0 : 0.5;
    double q_e = t_ecmo >= 0.8 ? 1.0 : 0.1;
    return q_c * q_e;
  };
  c.name = "ware_joint";
  return c;
}

}  // namespace epim
