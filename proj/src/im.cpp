#include "epim/im.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace epim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pi_from_log_ereg(double lv) { return std::exp(-std::max(0.0, lv)); }

int nearest_node(const Grid1D& grid, double t) {
  double h = grid.spacing();
  int i = static_cast<int>(std::lround((t - grid.lo) / h));
  return std::clamp(i, 0, grid.nodes - 1);
}

std::vector<double> node_pi(const IMContour& c) {
  std::vector<double> pv(static_cast<size_t>(c.grid.nodes));
  for (int i = 0; i < c.grid.nodes; ++i) pv[static_cast<size_t>(i)] = c.pi(c.grid.point(i));
  return pv;
}

}  // namespace

IMContour im_contour(const RegularizedEProcess& ereg, const Dataset& data, int n,
                     const Grid1D& grid) {
  grid.validate();
  IMContour c;
  c.grid = grid;
  auto values = std::make_shared<std::vector<double>>(static_cast<size_t>(grid.nodes));
  double sup = 0.0;
  for (int i = 0; i < grid.nodes; ++i) {
    double lv = ereg.log_value(data, n, grid.point(i));
    (*values)[static_cast<size_t>(i)] = pi_from_log_ereg(lv);
    sup = std::max(sup, (*values)[static_cast<size_t>(i)]);
  }
  c.grid_sup = sup;
  c.sup_normalized = sup >= 1.0 - 1e-12;
  c.pi = [grid, values](double t) {
    // clamped linear interpolation between grid nodes
    if (t <= grid.lo) return values->front();
    if (t >= grid.hi) return values->back();
    double x = (t - grid.lo) / grid.spacing();
    size_t i = static_cast<size_t>(x);
    if (i + 1 >= values->size()) return values->back();
    double w = x - static_cast<double>(i);
    return (1.0 - w) * (*values)[i] + w * (*values)[i + 1];
  };
  c.log_ereg = [ereg, data, n](double t) { return ereg.log_value(data, n, t); };
  return c;
}

IMContour im_contour2(const RegularizedEProcess& ereg, const Dataset& data,
                      const Grid2D& grid) {
  grid.a.validate();
  grid.b.validate();
  IMContour c;
  c.is2d = true;
  c.grid2 = grid;
  double sup = 0.0;
  for (int ia = 0; ia < grid.a.nodes; ++ia) {
    for (int ib = 0; ib < grid.b.nodes; ++ib) {
      double lv = ereg.log_value2(data, grid.a.point(ia), grid.b.point(ib));
      sup = std::max(sup, pi_from_log_ereg(lv));
    }
  }
  c.grid_sup = sup;
  c.sup_normalized = sup >= 1.0 - 1e-12;
  c.pi2 = [ereg, data](double ta, double tb) {
    return pi_from_log_ereg(ereg.log_value2(data, ta, tb));
  };
  return c;
}

std::pair<double, double> im_upper_lower(const IMContour& c, const std::vector<char>& hypothesis) {
  if (c.is2d) {
    if (hypothesis.size() != c.grid2.size()) {
      throw std::invalid_argument("hypothesis mask size does not match the grid");
    }
  } else if (static_cast<int>(hypothesis.size()) != c.grid.nodes) {
    throw std::invalid_argument("hypothesis mask size does not match the grid");
  }
  double in_max = -1.0, out_max = -1.0;
  if (c.is2d) {
    for (int ia = 0; ia < c.grid2.a.nodes; ++ia) {
      for (int ib = 0; ib < c.grid2.b.nodes; ++ib) {
        double p = c.pi2(c.grid2.a.point(ia), c.grid2.b.point(ib));
        if (hypothesis[static_cast<size_t>(c.grid2.index(ia, ib))]) {
          in_max = std::max(in_max, p);
        } else {
          out_max = std::max(out_max, p);
        }
      }
    }
  } else {
    for (int i = 0; i < c.grid.nodes; ++i) {
      double p = c.pi(c.grid.point(i));
      if (hypothesis[static_cast<size_t>(i)]) {
        in_max = std::max(in_max, p);
      } else {
        out_max = std::max(out_max, p);
      }
    }
  }
  if (in_max < 0.0) throw std::invalid_argument("empty hypothesis on grid");
  double lower = out_max < 0.0 ? 1.0 : 1.0 - out_max;
  return {in_max, lower};
}

LossFunction squared_error_loss(const std::vector<double>& actions) {
  if (actions.empty()) throw std::invalid_argument("empty action grid");
  LossFunction l;
  l.loss = [](double a, double theta) {
    double d = theta - a;
    return d * d;
  };
  l.actions = actions;
  l.name = "squared_error";
  return l;
}

double upper_expected_loss(const IMContour& c, const LossFunction& loss, double a) {
  if (c.is2d) throw std::invalid_argument("expected loss is 1D only");
  std::vector<double> pv = node_pi(c);
  std::vector<double> lv(pv.size());
  for (int i = 0; i < c.grid.nodes; ++i) {
    lv[static_cast<size_t>(i)] = loss.loss(a, c.grid.point(i));
  }
  return choquet_upper_exact(pv, lv);
}

double lower_expected_loss(const IMContour& c, const LossFunction& loss, double a) {
  if (c.is2d) throw std::invalid_argument("expected loss is 1D only");
  std::vector<double> pv = node_pi(c);
  std::vector<double> lv(pv.size());
  double bound = 0.0;
  for (int i = 0; i < c.grid.nodes; ++i) {
    lv[static_cast<size_t>(i)] = loss.loss(a, c.grid.point(i));
    if (std::isinf(lv[static_cast<size_t>(i)])) {
      throw std::invalid_argument("lower expected loss needs a bounded loss on the grid");
    }
    bound = std::max(bound, lv[static_cast<size_t>(i)]);
  }
  // conjugacy: lower(l) = B - upper(B - l) for any grid bound B
  for (double& x : lv) x = bound - x;
  return bound - choquet_upper_exact(pv, lv);
}

std::vector<double> risk_curve(const IMContour& c, const LossFunction& loss) {
  if (c.is2d) throw std::invalid_argument("expected loss is 1D only");
  std::vector<double> pv = node_pi(c);

  // One descending contour sort shared across actions; each action is a
  // prefix-max scan over the sorted nodes.
  std::vector<int> order(pv.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&pv](int x, int y) { return pv[static_cast<size_t>(x)] > pv[static_cast<size_t>(y)]; });

  std::vector<double> risks(loss.actions.size(), 0.0);
  for (size_t ai = 0; ai < loss.actions.size(); ++ai) {
    double a = loss.actions[ai];
    double acc = 0.0, gmax = -kInf;
    for (size_t k = 0; k < order.size(); ++k) {
      double q = pv[static_cast<size_t>(order[k])];
      if (q <= 0.0) break;
      gmax = std::max(gmax, loss.loss(a, c.grid.point(order[k])));
      double q_next = (k + 1 < order.size()) ? std::max(pv[static_cast<size_t>(order[k + 1])], 0.0) : 0.0;
      if (q > q_next) acc += (q - q_next) * gmax;
      if (std::isinf(gmax)) {
        acc = kInf;
        break;
      }
    }
    risks[ai] = acc;
  }
  return risks;
}

double optimal_action(const IMContour& c, const LossFunction& loss) {
  std::vector<double> risks = risk_curve(c, loss);
  double best = kInf, best_a = 0.0;
  bool found = false;
  for (size_t i = 0; i < risks.size(); ++i) {
    if (risks[i] < best) {
      best = risks[i];
      best_a = loss.actions[i];
      found = true;
    }
  }
  if (!found) throw std::runtime_error("every action has infinite upper expected loss");
  return best_a;
}

std::pair<double, double> marginal_expectation_interval(const Contour2D& c2,
                                                        const Grid1D& delta_grid) {
  MarginalResult m = extension_marginal(c2, delta_grid);
  return marginal_expectation_interval(m.phi);
}

std::pair<double, double> marginal_expectation_interval(const Contour& phi) {
  phi.grid.validate();
  if (phi.grid.lo < -1.0 - 1e-9 || phi.grid.hi > 1.0 + 1e-9) {
    throw std::invalid_argument("delta grid must lie within [-1, 1]");
  }
  std::vector<double> qv = contour_values(phi);
  std::vector<double> up(qv.size()), down(qv.size());
  for (int i = 0; i < phi.grid.nodes; ++i) {
    double d = phi.grid.point(i);
    up[static_cast<size_t>(i)] = d + 1.0;   // delta shifted to [0, 2]
    down[static_cast<size_t>(i)] = 1.0 - d;  // -delta shifted to [0, 2]
  }
  double upper = choquet_upper_exact(qv, up) - 1.0;
  double lower = 1.0 - choquet_upper_exact(qv, down);
  return {lower, upper};
}

bool decision_bound_check(const IMContour& c, const LossFunction& loss, double theta) {
  if (c.is2d) throw std::invalid_argument("decision certificate is 1D only");
  double t = c.grid.point(nearest_node(c.grid, theta));
  std::vector<double> risks = risk_curve(c, loss);
  double ratio = 0.0;
  for (size_t i = 0; i < risks.size(); ++i) {
    double num = loss.loss(loss.actions[i], t);
    if (num == 0.0) continue;
    ratio = std::max(ratio, num / risks[i]);
  }
  double bound = std::max(1.0, std::exp(c.log_ereg(t)));
  return ratio <= bound * (1.0 + 1e-9);
}

}  // namespace epim
