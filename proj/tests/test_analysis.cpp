#include "doctest.h"

#include "dispersive/analysis.hpp"
#include "dispersive/quadrature.hpp"
#include "dispersive/random.hpp"

#include <cmath>
#include <numbers>

using namespace dispersive;
constexpr double pi = std::numbers::pi;

TEST_CASE("exact power laws are recovered") {
  const auto t = log_spaced(1.0, 100.0, 20);
  std::vector<double> y;
  for (double s : t) y.push_back(std::pow(s, -0.25));
  auto fit = fit_power_law(t, y);
  CHECK(std::abs(fit.exponent + 0.25) <= 1e-12);
  CHECK(fit.prefactor == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.fit_residual <= 1e-12);
  CHECK(fit.n_samples == 20);
  CHECK(fit.t_min == 1.0);
  CHECK(fit.t_max == doctest::Approx(100.0));

  std::vector<double> flat(t.size(), 3.0);
  CHECK(std::abs(fit_power_law(t, flat).exponent) <= 1e-14);
}

TEST_CASE("noisy power law") {
  PortableRng rng(11);
  const auto t = log_spaced(2.0, 500.0, 40);
  std::vector<double> y;
  for (double s : t) y.push_back(7 * std::pow(s, -1.5) * (1 + 0.01 * rng.uniform(-1, 1)));
  CHECK(std::abs(fit_power_law(t, y).exponent + 1.5) <= 0.01);
}

TEST_CASE("fit is equivariant under rescaling of values and time") {
  const auto t = log_spaced(3.0, 300.0, 15);
  std::vector<double> y, ys, yt;
  for (double s : t) y.push_back(std::pow(s, -0.7) * (1 + 0.2 / s));
  for (double v : y) ys.push_back(5 * v);
  const double base = fit_power_law(t, y).exponent;
  CHECK(std::abs(fit_power_law(t, ys).exponent - base) <= 1e-14);
  // scaling t by c multiplies every t_k alike, so the slope is unchanged
  std::vector<double> ts;
  for (double s : t) ts.push_back(4 * s);
  CHECK(std::abs(fit_power_law(ts, y).exponent - base) <= 1e-13);
}

TEST_CASE("fit window validation") {
  const auto t = log_spaced(1.0, 100.0, 20);
  std::vector<double> y(t.size(), 1.0);
  CHECK_THROWS_AS(fit_power_law(t, y, 10.0, 30.0), std::invalid_argument);  // span < 4
  CHECK_THROWS_AS(fit_power_law(t, y, 1.0, 3.0), std::invalid_argument);    // too few samples
  auto bad = y;
  bad[4] = 0.0;
  CHECK_THROWS_AS(fit_power_law(t, bad), std::invalid_argument);
  bad[4] = -1.0;
  CHECK_THROWS_AS(fit_power_law(t, bad), std::invalid_argument);
  auto windowed = fit_power_law(t, y, 10.0, 100.0);
  CHECK(windowed.t_min >= 10.0);
}

TEST_CASE("log spacing") {
  auto t = log_spaced(1.0, 1000.0, 4);
  REQUIRE(t.size() == 4);
  CHECK(t[1] == doctest::Approx(10.0));
  CHECK(t[3] == 1000.0);
}

TEST_CASE("Gauss-Kronrod quadrature") {
  auto r = integrate<double>([](double x) { return std::sin(x); }, 0.0, pi);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(r.converged);
  auto s = integrate<double>([](double x) { return 1 / std::sqrt(x); }, 0.0, 1.0, 1e-10);
  CHECK(s.value == doctest::Approx(2.0).epsilon(1e-8));
  auto k = integrate<double>([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, 1e-12, 0.0, {0.3});
  CHECK(k.value == doctest::Approx(0.045 + 0.245).epsilon(1e-13));
  CHECK(integrate<double>([](double) { return 1.0; }, 2.0, 2.0).value == 0.0);
}

TEST_CASE("convolution inequality classification") {
  CHECK(classify_inequality(2.0, 3.0) == InequalityClass::decay_product);
  CHECK(classify_inequality(-0.5, -0.2) == InequalityClass::sub_critical);
  CHECK(classify_inequality(-0.5, -2.0) == InequalityClass::super_critical);
  CHECK(classify_inequality(-0.5, -1.0) == InequalityClass::logarithmic);
  CHECK_THROWS_AS(classify_inequality(0.5, 0.8), std::invalid_argument);
  CHECK_THROWS_AS(classify_inequality(-1.5, -0.5), std::invalid_argument);
  CHECK(to_string(InequalityClass::logarithmic) == "logarithmic");
}

TEST_CASE("convolution inequality values") {
  // closed form for a = b = 0 in the growth branch: int_0^t ds = t
  CHECK(inequality_lhs(InequalityClass::sub_critical, 0.0, 0.0, 5.0) == doctest::Approx(5.0).epsilon(1e-12));
  // a = 0, b = -1: log(1 + t)
  CHECK(inequality_lhs(InequalityClass::logarithmic, 0.0, -1.0, 9.0) == doctest::Approx(std::log(10.0)).epsilon(1e-10));
  CHECK(inequality_lhs(InequalityClass::decay_product, 2.0, 3.0, 0.0) == 0.0);
  CHECK_THROWS_AS(inequality_lhs(InequalityClass::decay_product, 2.0, 3.0, -1.0), std::invalid_argument);

  const auto t = log_spaced(1.0, 1.0e4, 30);
  for (auto [a, b] : {std::pair{2.0, 3.0}, std::pair{-0.5, -1.0}, std::pair{-0.3, -0.6}, std::pair{-0.2, -2.5}}) {
    auto rep = check_convolution_inequality(a, b, t);
    CHECK(rep.all_finite());
    CHECK(rep.max_ratio() < 1e3);
    CHECK(rep.increments_shrinking());
  }
  auto rep = check_convolution_inequality(2.0, 3.0, t);
  CHECK(rep.kind == InequalityClass::decay_product);
  // (1+t)^{-min} bounds the integral up to a constant; the ratio settles towards int (1+s)^{-3} ds = 1/2.
  CHECK(rep.ratio.back() == doctest::Approx(0.5).epsilon(0.01));
}
