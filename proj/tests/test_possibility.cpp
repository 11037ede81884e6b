#include <cmath>
#include <vector>

#include "doctest.h"
#include "epim/possibility.hpp"
#include "epim/special.hpp"

using namespace epim;

namespace {
const Grid1D kGrid{-4.0, 4.0, 801};
}

TEST_CASE("gaussian surprise contour reference values") {
  auto near = [](double v) { return doctest::Approx(v).epsilon(1e-10); };
  CHECK(make_prior(PriorKind::gaussian_surprise, 0.1, kGrid).q(0.7) == near(0.0268566955075));
  CHECK(make_prior(PriorKind::gaussian_surprise, 0.2, kGrid).q(0.7) == near(0.117524868097));
  CHECK(make_prior(PriorKind::gaussian_surprise, 0.4, kGrid).q(0.7) == near(0.268381627293));
  CHECK(make_prior(PriorKind::gaussian_surprise, 0.8, kGrid).q(0.7) == near(0.433848065766));
  CHECK(make_prior(PriorKind::gaussian_surprise, 1.0, kGrid).q(1.96) == near(0.0499957902964));
  CHECK(make_prior(PriorKind::gaussian_surprise, 1.0, kGrid).q(1.0) == near(0.317310507863));
  CHECK(make_prior(PriorKind::gaussian_surprise, 0.1, kGrid).q(0.0) == 1.0);
}

TEST_CASE("prior contour shapes") {
  Contour mb = make_prior(PriorKind::mean_bound, 0.5, kGrid);
  CHECK(mb.q(0.0) == 1.0);
  CHECK(mb.q(0.25) == 1.0);
  CHECK(mb.q(1.0) == doctest::Approx(0.5));
  CHECK(mb.q(2.0) == doctest::Approx(0.25));

  Contour eb = make_prior(PriorKind::event_bound, 0.5, kGrid);
  CHECK(eb.q(0.9) == 1.0);
  CHECK(eb.q(1.1) == doctest::Approx(0.1));

  Contour med = make_prior(PriorKind::median_prior, 1.0, kGrid);
  CHECK(med.q(0.0) == 1.0);
  CHECK(med.q(1.0) == doctest::Approx(0.5));
  CHECK(med.q(-1.0) == doctest::Approx(0.025));

  CHECK(make_prior(PriorKind::vacuous, 1.0, kGrid).q(3.7) == 1.0);
  CHECK_THROWS(make_prior(PriorKind::gaussian_surprise, 0.0, kGrid));
}

TEST_CASE("contour_from_values interpolates and clamps") {
  Grid1D g{0.0, 2.0, 3};
  Contour c = contour_from_values(g, {0.2, 1.0, 0.4}, "toy");
  CHECK(c.q(0.0) == doctest::Approx(0.2));
  CHECK(c.q(0.5) == doctest::Approx(0.6));
  CHECK(c.q(1.5) == doctest::Approx(0.7));
  CHECK(c.q(-3.0) == doctest::Approx(0.2));  // clamped at the edges
  CHECK(c.q(9.0) == doctest::Approx(0.4));
}

TEST_CASE("upper probability is the hypothesis max") {
  Grid1D g{0.0, 2.0, 3};
  Contour c = contour_from_values(g, {0.2, 1.0, 0.4}, "toy");
  std::vector<char> h = {1, 0, 1};
  CHECK(upper_probability(c, h) == doctest::Approx(0.4));
  std::vector<char> all = {1, 1, 1};
  CHECK(upper_probability(c, all) == doctest::Approx(1.0));
}

TEST_CASE("choquet upper expectation, exact step sum") {
  SUBCASE("step contour: upper probability of a low plateau") {
    // q = 0.05 left of 7, 1 at 7+; indicator of the low region integrates
    // to the plateau height.
    Grid1D g{0.0, 10.0, 101};
    Contour c;
    c.grid = g;
    c.q = [](double t) { return t < 7.0 ? 0.05 : 1.0; };
    c.name = "step";
    double val = choquet_upper_exact(c, [](double t) { return t < 7.0 ? 1.0 : 0.0; });
    CHECK(val == doctest::Approx(0.05).epsilon(1e-12));
  }
  SUBCASE("tent contour with squared loss") {
    // q = max(0, 1-|t|), g = t^2: integral over s of (1-s)^2 = 1/3.
    Grid1D g{-1.0, 1.0, 20001};
    Contour c;
    c.grid = g;
    c.q = [](double t) { return std::max(0.0, 1.0 - std::abs(t)); };
    c.name = "tent";
    double exact = choquet_upper_exact(c, [](double t) { return t * t; });
    CHECK(exact == doctest::Approx(1.0 / 3.0).epsilon(5e-4));
    double quad = choquet_upper_expectation(c, [](double t) { return t * t; }, 20001);
    CHECK(quad == doctest::Approx(1.0 / 3.0).epsilon(5e-4));
  }
  SUBCASE("infinite loss on a supported node propagates") {
    Grid1D g{0.0, 1.0, 2};
    Contour c;
    c.grid = g;
    c.q = [](double) { return 1.0; };
    c.name = "flat";
    double val = choquet_upper_exact(c, [](double t) { return t > 0.5 ? 1e308 * 10 : 0.0; });
    CHECK(std::isinf(val));
  }
}

TEST_CASE("credal membership verdicts") {
  Contour c = make_prior(PriorKind::gaussian_surprise, 0.1, kGrid);
  PriorSampler matched{[](Rng& rng) { return std::sqrt(0.1) * rng.normal(); }, "N(0,0.1)"};
  CHECK(credal_membership(c, matched, 20, 4000, 99).verdict == Membership::member);

  // Twice the claimed variance: mass escapes every contour level set.
  PriorSampler inflated{[](Rng& rng) { return std::sqrt(0.2) * rng.normal(); }, "N(0,0.2)"};
  MembershipReport bad = credal_membership(c, inflated, 20, 4000, 99);
  CHECK(bad.verdict == Membership::non_member);
  CHECK(bad.margin > 0.0);
}

TEST_CASE("probability-to-possibility transform") {
  Grid1D g{-4.0, 4.0, 201};
  PriorSampler std_normal{[](Rng& rng) { return rng.normal(); }, "std normal"};
  Contour mc = prob_to_possibility([](double y) { return normal_pdf(y); }, std_normal, 200000,
                                   5150, g);
  Contour exact = make_prior(PriorKind::gaussian_surprise, 1.0, g);
  double worst = 0.0;
  for (int i = 0; i < g.nodes; ++i) {
    worst = std::max(worst, std::abs(mc.q(g.point(i)) - exact.q(g.point(i))));
  }
  CHECK(worst < 8e-3);  // 2e5 draws: KS fluctuation ~3.6e-3 at 99.9%
  CHECK(mc.q(0.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("exact transform matches the closed form") {
  // 801 nodes so the probe points below land exactly on grid nodes; the
  // check is about the transform, not about interpolation error.
  Grid1D g{-4.0, 4.0, 801};
  // density level sets of N(0,1) are |y| >= t, so P{pdf <= pdf(t)} =
  // 2(1 - Phi(|t|)) = the K=1 surprise contour.
  Contour exact = prob_to_possibility_exact(
      [](double y) { return normal_pdf(y); },
      [](double d) {
        const double sqrt_2pi = 2.5066282746310002;
        double t = std::sqrt(std::max(0.0, -2.0 * std::log(d * sqrt_2pi)));
        return 2.0 * (1.0 - normal_cdf(t));
      },
      g);
  Contour ref = make_prior(PriorKind::gaussian_surprise, 1.0, g);
  for (double t : {0.0, 0.5, 1.3, 3.9}) {
    CHECK(exact.q(t) == doctest::Approx(ref.q(t)).epsilon(1e-8));
  }
}

TEST_CASE("extension marginal of a tent joint contour") {
  Grid2D g2{{0.0, 1.0, 3}, {0.0, 1.0, 3}};
  Contour2D c2;
  c2.grid = g2;
  c2.q = [](double a, double b) { return std::max(0.0, 1.0 - std::abs(b - a)); };
  c2.name = "tent2";
  Grid1D dg{-1.0, 1.0, 5};
  MarginalResult m = extension_marginal(c2, dg);
  CHECK(m.excluded.empty());
  CHECK(m.phi.q(0.0) == doctest::Approx(1.0));
  CHECK(m.phi.q(0.5) == doctest::Approx(0.5));
  CHECK(m.phi.q(-0.5) == doctest::Approx(0.5));
  CHECK(m.phi.q(1.0) == doctest::Approx(0.0));
}

TEST_CASE("ware joint prior levels") {
  Grid2D g2{{0.0, 1.0, 11}, {0.0, 1.0, 11}};
  Contour2D c = make_ware_joint_prior(g2);
  CHECK(c.q(0.2, 0.9) == doctest::Approx(1.0));    // both arms in the favored zone
  CHECK(c.q(0.5, 0.9) == doctest::Approx(0.5));    // cmt above its bound
  CHECK(c.q(0.2, 0.5) == doctest::Approx(0.1));    // ecmo below its bound
  CHECK(c.q(0.5, 0.5) == doctest::Approx(0.05));
}

TEST_CASE("mask_where") {
  Grid1D g{0.0, 4.0, 5};
  std::vector<char> m = mask_where(g, [](double t) { return t >= 1.0 && t <= 3.0; });
  CHECK(m == std::vector<char>{0, 1, 1, 1, 0});
}
