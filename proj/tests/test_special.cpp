#include <cmath>

#include "doctest.h"
#include "epim/special.hpp"

using namespace epim;

// Reference values computed independently (scipy/mpmath), 12 significant
// digits.

TEST_CASE("lower incomplete gamma against reference values") {
  auto near = [](double v) { return doctest::Approx(v).epsilon(1e-11); };
  CHECK(lower_incomplete_gamma(1.5, 0.5) == near(0.176135867175));
  CHECK(lower_incomplete_gamma(2.0, 1.0) == near(0.264241117657));
  CHECK(lower_incomplete_gamma(0.7, 2.6) == near(1.24687538861));
  CHECK(lower_incomplete_gamma(3.0, 8.0) == near(1.97249206451));
  CHECK(lower_incomplete_gamma(1.5, 40.0) == near(0.886226925453));
  CHECK(lower_incomplete_gamma(2.0, 0.001) == near(4.99666791633e-07));
  CHECK(lower_incomplete_gamma(7.5, 12.0) == near(1749.44783909));
  CHECK(lower_incomplete_gamma(2.0, 3.617354) == near(0.876007250424));
}

TEST_CASE("lower incomplete gamma basic behavior") {
  CHECK(lower_incomplete_gamma(2.0, 0.0) == 0.0);
  // Monotone in z.
  CHECK(lower_incomplete_gamma(2.0, 2.0) > lower_incomplete_gamma(2.0, 1.0));
  // gamma(1, z) = 1 - exp(-z) exactly.
  CHECK(lower_incomplete_gamma(1.0, 2.0) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-12));
  CHECK_THROWS(lower_incomplete_gamma(0.0, 1.0));
  CHECK_THROWS(lower_incomplete_gamma(1.0, -1.0));
}

TEST_CASE("regularized gamma P") {
  // P(2, 1) = ig(2,1) / Gamma(2), Gamma(2) = 1.
  CHECK(regularized_gamma_p(2.0, 1.0) == doctest::Approx(0.264241117657).epsilon(1e-11));
  CHECK(regularized_gamma_p(1.5, 200.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("normal cdf and pdf") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(normal_cdf(1.96) == doctest::Approx(0.975002104852).epsilon(1e-11));
  CHECK(normal_cdf(-1.96) == doctest::Approx(1.0 - 0.975002104852).epsilon(1e-9));
  CHECK(normal_pdf(0.0) == doctest::Approx(0.398942280401).epsilon(1e-11));
  CHECK(log_normal_pdf(1.3, 0.3, 4.0) ==
        doctest::Approx(std::log(normal_pdf((1.3 - 0.3) / 2.0) / 2.0)).epsilon(1e-12));
}

TEST_CASE("chi squared 1 cdf") {
  // F(x) = 2 Phi(sqrt(x)) - 1; reference tail values from the surprise
  // contour: 1 - F(0.49/K).
  CHECK(1.0 - chi_squared_1_cdf(0.49 / 0.1) == doctest::Approx(0.0268566955075).epsilon(1e-10));
  CHECK(1.0 - chi_squared_1_cdf(0.49 / 0.2) == doctest::Approx(0.117524868097).epsilon(1e-10));
  CHECK(1.0 - chi_squared_1_cdf(1.96 * 1.96) == doctest::Approx(0.0499957902964).epsilon(1e-10));
  CHECK(chi_squared_1_cdf(0.0) == 0.0);
}
