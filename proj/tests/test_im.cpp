#include <cmath>
#include <vector>

#include "doctest.h"
#include "epim/calibration.hpp"
#include "epim/eprocess.hpp"
#include "epim/im.hpp"
#include "epim/possibility.hpp"
#include "epim/regularization.hpp"

using namespace epim;

namespace {
const Grid1D kGrid{-4.0, 4.0, 801};

Dataset repeated(double z, int n) {
  return Dataset::from_observations(std::vector<double>(static_cast<size_t>(n), z));
}

IMContour standard_contour() {
  RegularizedEProcess ereg = regularize(savage_dickey_gaussian(10.0), vacuous_regularizer());
  return im_contour(ereg, repeated(0.5, 5), 5, kGrid);
}
}  // namespace

TEST_CASE("contour is min(1, 1/e)") {
  IMContour c = standard_contour();
  // e(0.5) = 0.138 < 1, so pi = 1 at the data mean.
  CHECK(c.pi(0.5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.pi(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  // Far out, pi = 1/e; at theta = 3: log e = -0.5 log 51 + 2.5 * 6.25 - (5/102)/4.
  double log_e3 = -0.5 * std::log(51.0) + 2.5 * 6.25 - (5.0 / 102.0) * 0.25;
  CHECK(c.pi(3.0) == doctest::Approx(std::exp(-log_e3)).epsilon(1e-10));
  CHECK(c.sup_normalized);
  CHECK(c.grid_sup == doctest::Approx(1.0));
  CHECK_FALSE(c.is2d);
}

TEST_CASE("upper and lower hypothesis probabilities") {
  IMContour c = standard_contour();
  std::vector<char> left = mask_where(kGrid, [](double t) { return t <= 0.5; });
  auto [up, low] = im_upper_lower(c, left);
  CHECK(up == doctest::Approx(1.0));  // pi(0.5) = 1 inside
  CHECK(low < 1.0);                   // complement also holds contour mass
  CHECK(low >= 0.0);

  std::vector<char> all(static_cast<size_t>(kGrid.nodes), 1);
  auto [up_all, low_all] = im_upper_lower(c, all);
  CHECK(up_all == doctest::Approx(1.0));
  CHECK(low_all == doctest::Approx(1.0));  // empty complement

  std::vector<char> none(static_cast<size_t>(kGrid.nodes), 0);
  CHECK_THROWS(im_upper_lower(c, none));
}

TEST_CASE("optimal action under squared loss sits at the data mean") {
  IMContour c = standard_contour();
  LossFunction loss = squared_error_loss(Grid1D{-2.0, 2.0, 81}.points());
  double a = optimal_action(c, loss);
  CHECK(a == doctest::Approx(0.5).epsilon(1e-12));
  // Risk curve is symmetric about the optimum for this symmetric contour.
  std::vector<double> risks = risk_curve(c, loss);
  REQUIRE(risks.size() == 81);
  // actions 0.4 and 0.6 are indices 48 and 52.
  CHECK(risks[48] == doctest::Approx(risks[52]).epsilon(1e-6));
  CHECK(upper_expected_loss(c, loss, a) == doctest::Approx(risks[50]).epsilon(1e-12));
  CHECK(lower_expected_loss(c, loss, a) == doctest::Approx(0.0).epsilon(1e-9));
  // Lower never exceeds upper.
  CHECK(lower_expected_loss(c, loss, 1.0) <= upper_expected_loss(c, loss, 1.0));
}

TEST_CASE("risk curve entries match one-off evaluations") {
  IMContour c = standard_contour();
  LossFunction loss = squared_error_loss({-1.0, 0.0, 0.5, 2.0});
  std::vector<double> risks = risk_curve(c, loss);
  for (size_t i = 0; i < loss.actions.size(); ++i) {
    CHECK(risks[i] == doctest::Approx(upper_expected_loss(c, loss, loss.actions[i])).epsilon(1e-12));
  }
}

TEST_CASE("decision certificate holds across the grid") {
  IMContour c = standard_contour();
  LossFunction loss = squared_error_loss(Grid1D{-2.0, 2.0, 81}.points());
  for (double theta : {-3.7, -1.0, 0.0, 0.5, 1.3, 2.2, 3.9}) {
    CHECK(decision_bound_check(c, loss, theta));
  }
}

TEST_CASE("marginal expectation interval on hand-checkable contours") {
  Grid1D dg{-1.0, 1.0, 3};
  SUBCASE("point mass at zero") {
    Contour phi = contour_from_values(dg, {0.0, 1.0, 0.0}, "point");
    auto [lo, hi] = marginal_expectation_interval(phi);
    CHECK(lo == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(hi == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("vacuous delta contour spans [-1, 1]") {
    Contour phi = contour_from_values(dg, {1.0, 1.0, 1.0}, "vacuous");
    auto [lo, hi] = marginal_expectation_interval(phi);
    CHECK(lo == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(hi == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("asymmetric plateau") {
    // q = 1 at delta = 1, 0.5 at 0, 0 at -1: upper = 1; lower = Choquet
    // lower = 1 - upper(1 - delta): integral over s of inf level sets.
    Contour phi = contour_from_values(dg, {0.0, 0.5, 1.0}, "tilt");
    auto [lo, hi] = marginal_expectation_interval(phi);
    CHECK(hi == doctest::Approx(1.0).epsilon(1e-12));
    // Lower expectation: 1 - int [ (1-delta)+1 classic shift ] = 0.5 by the
    // step sum: levels s<0.5 allow delta=0 (g=1), s>=0.5 force delta=1 (g=0),
    // so E_low = 1 - (0.5*1 + 0.5*0) - 0 ... computed: 0.5.
    CHECK(lo == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("2d contour from the two-arm family") {
  Grid2D g2{{0.0, 1.0, 41}, {0.0, 1.0, 41}};
  EProcess w = ware_binomial(6, 4, 9, 0, 0.18);
  Dataset d = Dataset::from_counts(WareCounts{6, 4, 9, 0});
  RegularizedEProcess ereg = regularize(w, vacuous_regularizer());
  IMContour c = im_contour2(ereg, d, g2);
  CHECK(c.is2d);
  // At the plug-ins e = 1, so pi = 1 nearby; grid sup is 1 within rounding.
  CHECK(c.grid_sup == doctest::Approx(1.0).epsilon(1e-2));
  // e(0.6, 1.0) = 0.839 < 1 keeps pi at 1; a remote corner decays as 1/e.
  CHECK(c.pi2(0.6, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.pi2(0.99, 0.01) == doctest::Approx(std::exp(-53.0223839069)).epsilon(1e-6));
}
