#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "epim/calibration.hpp"
#include "epim/possibility.hpp"
#include "epim/regularization.hpp"

using namespace epim;

namespace {
const Grid1D kGrid{-4.0, 4.0, 801};
}

TEST_CASE("regularizer values are 1/gamma(q) at kappa = 1") {
  // rho(0.7) for the chi-squared surprise priors, reference values.
  auto near = [](double v) { return doctest::Approx(v).epsilon(1e-10); };
  Calibrator cal = beta_mixture_calibrator(1.0);
  auto rho_at = [&](double k) {
    Regularizer r = regularizer_from_contour(make_prior(PriorKind::gaussian_surprise, k, kGrid), cal);
    return std::exp(r.log_rho(0.7));
  };
  CHECK(rho_at(0.1) == near(2.49284320045));
  CHECK(rho_at(0.2) == near(1.17088642847));
  CHECK(rho_at(0.4) == near(0.815366142434));
  CHECK(rho_at(0.8) == near(0.673849873427));
}

TEST_CASE("vacuous regularizer is identically one") {
  Regularizer v = vacuous_regularizer();
  CHECK(v.log_rho(0.0) == 0.0);
  CHECK(v.log_rho(-3.7) == 0.0);
  CHECK(v.log_rho2(0.5, 0.5) == 0.0);
  CHECK(v.provenance == "vacuous");
}

TEST_CASE("regularizer provenance records prior and calibrator") {
  Regularizer r = regularizer_from_contour(make_prior(PriorKind::gaussian_surprise, 0.1, kGrid),
                                           beta_mixture_calibrator(1.0));
  CHECK(r.provenance == "gaussian_surprise(K=0.1) / beta_mixture(kappa=1)");
}

TEST_CASE("sup-normalization gate") {
  // A contour with sup 0.5 on the grid is not a possibility contour.
  Contour bad;
  bad.grid = kGrid;
  bad.q = [](double) { return 0.5; };
  bad.name = "subnormal";
  CHECK_THROWS_AS(regularizer_from_contour(bad, beta_mixture_calibrator(1.0)),
                  std::invalid_argument);
}

TEST_CASE("choquet upper expectation of rho is at most one") {
  Calibrator cal = beta_mixture_calibrator(1.0);
  for (double k : {0.1, 0.5, 1.0}) {
    Contour prior = make_prior(PriorKind::gaussian_surprise, k, kGrid);
    Regularizer r = regularizer_from_contour(prior, cal);
    PriorModel model;
    model.kind = PriorModelKind::possibilistic;
    model.contour = prior;
    CHECK(upper_expectation_under(model, r, kGrid) <= 1.0 + 1e-3);
  }
}

TEST_CASE("2d regularizer from the two-arm joint prior") {
  Grid2D g2{{0.0, 1.0, 41}, {0.0, 1.0, 41}};
  Regularizer r = regularizer_from_contour(make_ware_joint_prior(g2), beta_mixture_calibrator(1.0));
  CHECK(r.is2d);
  // q = 1 in the favored corner: rho = 1/gamma(1) = kappa/(1+kappa) = 1/2.
  CHECK(std::exp(r.log_rho2(0.2, 0.9)) == doctest::Approx(0.5).epsilon(1e-12));
  // q = 0.05 in the opposite corner: rho = 1/gamma_1(0.05), reference value.
  CHECK(std::exp(r.log_rho2(0.5, 0.5)) == doctest::Approx(1.78332218148).epsilon(1e-10));
}

namespace {
// Two-atom center: rho takes values 0.5 and 2.0 with probability 1/2 each.
struct AtomSetup {
  Regularizer rho;
  CenterDistribution center;
  AtomSetup() {
    rho.log_rho = [](double t) { return t < 0.0 ? std::log(0.5) : std::log(2.0); };
    rho.provenance = "two-valued";
    center.atoms = {-1.0, 1.0};
    center.weights = {0.5, 0.5};
  }
};
}  // namespace

TEST_CASE("contamination model upper expectation") {
  AtomSetup s;
  PriorModel model;
  model.kind = PriorModelKind::contamination;
  model.center = s.center;
  model.eps = 0.3;
  // (1-eps) * mean + eps * sup = 0.7 * 1.25 + 0.3 * 2 = 1.475.
  CHECK(upper_expectation_under(model, s.rho, kGrid) == doctest::Approx(1.475).epsilon(1e-9));
}

TEST_CASE("constant odds model upper expectation") {
  AtomSetup s;
  PriorModel model;
  model.kind = PriorModelKind::constant_odds;
  model.center = s.center;
  model.tau = 0.5;
  // Root of 0.5 E(rho - x)+ = 0.5 (x - E rho): x = 1.5 by hand.
  CHECK(upper_expectation_under(model, s.rho, kGrid) == doctest::Approx(1.5).epsilon(1e-6));
}

TEST_CASE("finite prior model and finite-support regularizer") {
  std::vector<double> eta = {0.5, 0.5};
  std::vector<double> mass = {0.5, 1.0};
  std::vector<double> rho = finite_support_regularizer(eta, mass);
  REQUIRE(rho.size() == 2);
  CHECK(rho[0] == doctest::Approx(1.0));
  CHECK(rho[1] == doctest::Approx(0.5));

  // Upper expectation under the finite model: sum rho_i * mass_i = 1.
  PriorModel model;
  model.kind = PriorModelKind::finite;
  model.atoms = {-1.0, 1.0};
  model.upper_masses = mass;
  Regularizer r;
  r.log_rho = [rho](double t) { return std::log(t < 0.0 ? rho[0] : rho[1]); };
  r.provenance = "finite";
  CHECK(upper_expectation_under(model, r, kGrid) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS(finite_support_regularizer({0.7, 0.7}, {1.0, 1.0}));  // eta sums past 1
  CHECK_THROWS(finite_support_regularizer({0.5, 0.5}, {0.5, 0.0}));  // mass 0 on support
}

TEST_CASE("unbounded rho makes contamination infinite") {
  const double inf = std::numeric_limits<double>::infinity();
  Regularizer spike;
  spike.log_rho = [inf](double t) { return t > 3.9 ? inf : 0.0; };
  spike.provenance = "spike";
  PriorModel model;
  model.kind = PriorModelKind::contamination;
  model.center.atoms = {0.0};
  model.center.weights = {1.0};
  model.eps = 0.1;
  CHECK(std::isinf(upper_expectation_under(model, spike, kGrid)));
}

TEST_CASE("sampled center matches atom center") {
  // Sampler that alternates deterministically between the two atoms has the
  // same empirical measure as the explicit atom list.
  AtomSetup s;
  PriorModel atoms;
  atoms.kind = PriorModelKind::contamination;
  atoms.center = s.center;
  atoms.eps = 0.3;

  PriorModel sampled = atoms;
  sampled.center.atoms.clear();
  sampled.center.weights.clear();
  sampled.center.sampler = [](Rng& rng) { return rng.uniform() < 0.5 ? -1.0 : 1.0; };
  sampled.center.mc_reps = 200000;
  sampled.center.seed = 31;

  double a = upper_expectation_under(atoms, s.rho, kGrid);
  double b = upper_expectation_under(sampled, s.rho, kGrid);
  CHECK(b == doctest::Approx(a).epsilon(0.01));
}
