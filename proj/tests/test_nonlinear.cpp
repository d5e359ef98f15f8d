#include "doctest.h"

#include "dispersive/analysis.hpp"
#include "dispersive/data.hpp"
#include "dispersive/nonlinear.hpp"
#include "dispersive/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>

using namespace dispersive;
using Grid = SpectralGrid<double>;
using F = Field<double>;
using Problem = NonlinearProblem<double>;
constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();

namespace {

F bump(const Grid& g, double a, double c = 0.5, double w = 1.0) {
  return F::sample(g, [&](double x) { return a * std::exp(-(x - c) * (x - c) / (2 * w * w)); });
}

std::vector<double> every(double step, double T) {
  std::vector<double> t;
  for (int k = 1; k * step <= T * (1 + 1e-12); ++k) t.push_back(k * step);
  return t;
}

Problem problem(const F& v0, double m, double q, double T, double dt, double sample_step) {
  Problem p(v0);
  p.m = m;
  p.q = q;
  p.T_final = T;
  p.dt = dt;
  p.sample_times = every(sample_step, T);
  return p;
}

}  // namespace

TEST_CASE("power nonlinearities") {
  CHECK(power_value(-2.0, 3.0, PowerVariant::signed_power) == -8.0);
  CHECK(power_value(-2.0, 3.0, PowerVariant::abs_power) == 8.0);
  CHECK(power_value(-2.0, 4.0, PowerVariant::signed_power) == -16.0);
  CHECK(power_value(2.0, 2.5, PowerVariant::signed_power) == doctest::Approx(std::pow(2.0, 2.5)));
  CHECK(power_value(-2.0, 2.5, PowerVariant::signed_power) == doctest::Approx(-std::pow(2.0, 2.5)));
  CHECK(power_value(0.0, 3.5, PowerVariant::abs_power) == 0.0);
  Vector<double> v(3);
  v << 1, -1, 0.5;
  CHECK(nonlinearity(v, 2.0, PowerVariant::abs_power)[1] == 1.0);
  CHECK_THROWS_AS(nonlinearity(v, 1.0, PowerVariant::abs_power), std::invalid_argument);
  CHECK(parse_power_variant("abs") == PowerVariant::abs_power);
  CHECK_THROWS_AS(parse_power_variant("cube"), std::invalid_argument);
}

TEST_CASE("problem validation") {
  Grid g(256, 32.0);
  auto p = problem(bump(g, 0.1), 3.0, 4.0, 1.0, 0.01, 0.1);
  CHECK_NOTHROW(p.validate());
  CHECK(p.step_count() == 100);
  auto bad = p;
  bad.q = 2.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.m = 2.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.q = 4.5;
  bad.variant = PowerVariant::abs_power;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.sample_times = {0.125};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.coefficient = 200;  // max |c xi / (1 + |xi|^3)| is about 106, so dt = 0.01 is too large
  CHECK_THROWS_AS(direct_solve(bad), std::invalid_argument);
}

TEST_CASE("zero data stays zero") {
  Grid g(256, 32.0);
  auto traj = direct_solve(problem(F::zeros(g), 3.0, 4.0, 1.0, 0.01, 0.25));
  REQUIRE(traj.size() == 5);
  for (std::size_t k = 0; k < traj.size(); ++k) CHECK(lp_norm(traj.field(k), inf) == 0.0);
}

TEST_CASE("vanishing coefficient reproduces the linear flow") {
  Grid g(512, 32.0);
  auto p = problem(bump(g, 0.5), 3.0, 4.0, 2.0, 0.01, 0.5);
  p.coefficient = 0;
  auto traj = direct_solve(p);
  for (std::size_t k = 0; k < traj.size(); ++k)
    CHECK(lp_norm(traj.field(k) - apply_semigroup(p.phase(), traj.time(k), p.v0), 2.0) <= 1e-9);
}

TEST_CASE("mass is conserved") {
  Grid g(512, 32.0);
  for (PowerVariant v : {PowerVariant::signed_power, PowerVariant::abs_power}) {
    auto p = problem(bump(g, 0.8), 3.0, 4.0, 4.0, 0.01, 0.5);
    p.variant = v;
    auto traj = direct_solve(p);
    const double M0 = integral(p.v0);
    for (std::size_t k = 0; k < traj.size(); ++k) CHECK(std::abs(traj.norms()[k].mass - M0) <= 1e-8);
  }
}

TEST_CASE("RK4 converges at fourth order") {
  Grid g(256, 32.0);
  auto base = problem(bump(g, 1.0), 3.0, 4.0, 1.0, 0.1, 1.0);
  auto fine = base;
  fine.dt = 0.00625;
  const auto ref = direct_solve(fine).field(1);
  double e[2];
  int i = 0;
  for (double dt : {0.1, 0.05}) {
    auto p = base;
    p.dt = dt;
    e[i++] = lp_norm(direct_solve(p).field(1) - ref, 2.0);
  }
  CHECK(std::log2(e[0] / e[1]) > 3.5);
}

TEST_CASE("Picard iteration agrees with the direct solver") {
  Grid g(256, 32.0);
  auto p = problem(bump(g, 0.3), 3.0, 4.0, 2.0, 0.01, 0.5);
  auto direct = direct_solve(p);
  auto pic = picard_solve(p, 200, 30, 1e-12);
  REQUIRE(pic.trajectory.size() == direct.size());
  for (std::size_t k = 0; k < direct.size(); ++k) CHECK(lp_norm(pic.trajectory.field(k) - direct.field(k), 2.0) <= 1e-4);
  CHECK(pic.final_weighted_norm <= 2 * pic.initial_weighted_norm);
  CHECK_THROWS_AS(picard_solve(p, 0, 10, 1e-10), std::invalid_argument);
}

TEST_CASE("tiny data: Picard contracts quickly") {
  Grid g(256, 32.0);
  auto p = problem(bump(g, 1e-3), 3.0, 4.0, 2.0, 0.01, 0.5);
  auto pic = picard_solve(p, 200, 10, 1e-14);
  REQUIRE_FALSE(pic.contraction_factors.empty());
  for (double f : pic.contraction_factors) CHECK(f < 0.01);
  CHECK(pic.iterations <= 4);
}

TEST_CASE("Picard divergence is reported") {
  Grid g(256, 32.0);
  auto p = problem(bump(g, 3.0), 3.0, 4.0, 2.0, 0.01, 1.0);
  CHECK_THROWS_AS(picard_solve(p, 200, 3, 1e-14), PicardDivergence);
}

TEST_CASE("small solutions decay like the linear flow") {
  Grid g(1024, 64.0);
  DataDescriptor<double> d;
  d.family = DataFamily::shifted_gaussian;
  d.center = 1.25;
  d.width = 0.25;
  d.smallness = 0.1;
  auto v0 = make_initial_data(d, g, 3.0);
  CHECK(w21_proxy(v0) == doctest::Approx(0.1).epsilon(1e-12));
  auto traj = direct_solve(problem(v0, 3.0, 4.0, 32.0, 0.01, 0.5));
  auto fits = decay_check(traj, 8.0, 32.0);
  CHECK(fits.l2.exponent == doctest::Approx(-1.0 / 6).epsilon(0.1));
  CHECK(fits.linf.exponent == doctest::Approx(-1.0 / 3).epsilon(0.1));
  CHECK(fits.dx_l2.exponent == doctest::Approx(-0.5).epsilon(0.1));
  CHECK_THROWS_AS(decay_check(traj, 30.0, 32.0), std::invalid_argument);
}

TEST_CASE("second-term case classification") {
  CHECK(classify_second_term(3.0, 3.5) == SecondTermCase::subcritical);
  CHECK(classify_second_term(3.0, 4.0) == SecondTermCase::critical);
  CHECK(classify_second_term(3.0, 5.0) == SecondTermCase::supercritical);
  CHECK_THROWS_AS(classify_second_term(3.0, 3.0), std::invalid_argument);
  CHECK(parse_second_term_case("ii") == SecondTermCase::critical);
}

TEST_CASE("critical constant of the Gaussian kernel") {
  // int G_2(x,1)^3 dx = (4 pi)^{-3/2} sqrt(4 pi / 3)
  for (double M : {1.0, 0.4, -0.7}) {
    const double expected = M * M * M / (4 * pi * std::sqrt(3.0));
    CHECK(critical_constant(2.0, 3.0, PowerVariant::signed_power, M) == doctest::Approx(expected).epsilon(1e-6));
  }
  CHECK(critical_constant(2.0, 3.0, PowerVariant::abs_power, -0.7) > 0);
}

TEST_CASE("subcritical profile against direct quadrature") {
  // m = 2, q = 2.5: w(M G_2(s))^(xi) = M^q q^{-1/2} (4 pi s)^{(1-q)/2} e^{-s xi^2 / q} in closed form.
  const double m = 2.0, q = 2.5, M = 0.8, t = 3.0;
  Grid g(256, 40.0);
  auto prof = subcritical_profile_spectrum(m, q, PowerVariant::signed_power, M, t, g);
  const double c = std::pow(M, q) / std::sqrt(q) * std::pow(4 * pi, (1 - q) / 2);
  for (Index i : {Index(1), Index(3), Index(8), Index(20)}) {
    const double xi = g.frequency(i);
    // s = sigma^4 removes the s^{-3/4} endpoint singularity
    auto f = [&](double sigma) {
      const double s = std::pow(sigma, 4);
      return 4 * sigma * sigma * sigma * std::exp(-(t - s) * xi * xi) * std::pow(s, (1 - q) / 2) * std::exp(-s * xi * xi / q);
    };
    const double ref = xi * c * integrate<double>(f, 0.0, std::pow(t, 0.25), 1e-12).value;
    const auto got = prof.coeffs[i];
    CHECK(std::abs(got.real()) <= 1e-12);
    CHECK(got.imag() == doctest::Approx(ref).epsilon(1e-5));
  }
  CHECK_THROWS_AS(subcritical_profile_spectrum(m, 3.5, PowerVariant::signed_power, M, t, g), std::invalid_argument);
}

TEST_CASE("subcritical profile is self-similar") {
  const double m = 3.0, q = 3.5;
  Grid g(4096, 400.0);
  const auto times = log_spaced(4.0, 64.0, 9);
  std::vector<double> n2;
  for (double t : times) n2.push_back(lp_norm(inverse(subcritical_profile_spectrum(m, q, PowerVariant::signed_power, 1.0, t, g)), 2.0));
  const double expected = 1 - q / m - 1 / (2 * m);
  CHECK(fit_power_law(times, n2).exponent == doctest::Approx(expected).epsilon(0.01));

  auto zero = subcritical_profile_spectrum(m, q, PowerVariant::signed_power, 0.0, 2.0, g);
  CHECK(zero.coeffs.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("mass-free data have zero critical profile") {
  Grid g(512, 32.0);
  auto v0 = derivative(bump(g, 1.0, 0.0, 1.0));
  auto p = problem(v0, 3.0, 4.0, 1.0, 0.01, 0.5);
  auto prof = second_term_profile(p, SecondTermCase::critical, 2.0);
  CHECK(lp_norm(prof, inf) <= 1e-14);
  CHECK_THROWS_AS(second_term_profile(p, SecondTermCase::subcritical, 2.0), std::invalid_argument);
}

TEST_CASE("supercritical coefficient is stable in the horizon") {
  Grid g(512, 64.0);
  double c[2];
  int i = 0;
  for (double T : {32.0, 64.0}) {
    auto traj = direct_solve(problem(bump(g, 0.6), 3.0, 5.0, T, 0.02, 0.1));
    auto coef = supercritical_coefficient(traj, 5.0, PowerVariant::signed_power);
    CHECK(coef.tail_exponent < -1);
    c[i++] = coef.value;
  }
  CHECK(std::abs(c[0] - c[1]) <= 0.02 * std::abs(c[1]));
}
