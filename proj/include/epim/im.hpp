#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "epim/eprocess.hpp"
#include "epim/possibility.hpp"

namespace epim {

// Possibility contour of the inferential model: pi(theta) = min(1, 1/e^reg).
// Usually sup pi = 1 on the grid; a sub-normalized contour (every e^reg > 1)
// is flagged, not rejected, and all operations proceed unchanged.
struct IMContour {
  std::function<double(double)> pi;
  std::function<double(double)> log_ereg;  // the underlying log e^reg
  Grid1D grid;
  std::function<double(double, double)> pi2;
  Grid2D grid2;
  bool is2d = false;
  bool sup_normalized = true;
  double grid_sup = 0.0;
};

IMContour im_contour(const RegularizedEProcess& ereg, const Dataset& data, int n,
                     const Grid1D& grid);
IMContour im_contour2(const RegularizedEProcess& ereg, const Dataset& data,
                      const Grid2D& grid);

// Upper = max pi over the hypothesis nodes, lower = 1 - max pi over the
// complement (empty complement gives lower = 1). Errors on an empty
// hypothesis.
std::pair<double, double> im_upper_lower(const IMContour& c, const std::vector<char>& hypothesis);

struct LossFunction {
  std::function<double(double, double)> loss;  // (action, theta) -> loss >= 0
  std::vector<double> actions;
  std::string name;
};

LossFunction squared_error_loss(const std::vector<double>& actions);

// Choquet upper/lower expected loss of action a against the IM contour
// (exact step evaluation over the grid). Infinite loss anywhere the contour
// is positive gives +infinity.
double upper_expected_loss(const IMContour& c, const LossFunction& loss, double a);
double lower_expected_loss(const IMContour& c, const LossFunction& loss, double a);

// Minimizer of the upper expected loss over the action grid, ties broken
// toward the smallest action. Errors when every risk is infinite.
double optimal_action(const IMContour& c, const LossFunction& loss);

// Risk curve over the action grid (upper expected loss per action).
std::vector<double> risk_curve(const IMContour& c, const LossFunction& loss);

// Interval of expected values of delta = theta_ecmo - theta_cmt over the
// credal set: marginalize the 2D contour onto the delta grid, then take
// Choquet upper expectations of +-delta (shifted by the known bound 1, as
// delta lives in [-1, 1]).
std::pair<double, double> marginal_expectation_interval(const Contour2D& c2,
                                                        const Grid1D& delta_grid);
std::pair<double, double> marginal_expectation_interval(const Contour& phi);

// Pointwise decision certificate. theta snaps to its nearest grid node t;
// at a node, the level-set truncation of the Choquet integral gives
// upper_expected_loss(a) >= pi(t) * loss_a(t) exactly, so
//   max over actions of loss_a(t) / upper_expected_loss(a)
//     <= 1 / pi(t) = max(1, e^reg(z^n, t)),
// checked with multiplicative slack 1 + 1e-9. Note e^reg alone is not a
// bound: a constant loss has ratio 1 wherever the contour is normalized,
// which exceeds e^reg whenever e^reg < 1.
bool decision_bound_check(const IMContour& c, const LossFunction& loss, double theta);

}  // namespace epim
