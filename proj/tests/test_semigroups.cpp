#include "doctest.h"

#include "dispersive/analysis.hpp"
#include "dispersive/expansion.hpp"
#include "dispersive/random.hpp"
#include "dispersive/semigroups.hpp"

#include <cmath>
#include <limits>
#include <numbers>

using namespace dispersive;
using Grid = SpectralGrid<double>;
using F = Field<double>;
using Phase = PhaseFunction<double>;
constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();

namespace {

F gaussian(const Grid& g, double c = 0, double w = 1) {
  return F::sample(g, [&](double x) { return std::exp(-(x - c) * (x - c) / (2 * w * w)); });
}

F random_bumps(const Grid& g, PortableRng& rng) {
  const double c = rng.uniform(-3, 3), w = rng.uniform(0.5, 2), a = rng.uniform(-1, 1), s = rng.uniform(-1, 1);
  return F::sample(g, [&](double x) { return a * std::exp(-(x - c) * (x - c) / (2 * w * w)) * (1 + s * (x - c)); });
}

}  // namespace

TEST_CASE("phase symbols") {
  for (double m : {2.0, 2.5, 3.0}) {
    for (PhaseKind k : {PhaseKind::heat, PhaseKind::bbm, PhaseKind::kdv}) {
      Phase ph{k, m};
      CHECK(ph(0.0) == std::complex<double>(0, 0));
      for (double xi : {-3.0, -0.4, 0.2, 1.0, 7.5}) CHECK(ph(xi).real() >= 0);
    }
    const double xi = 1.3, am = std::pow(xi, m);
    CHECK(std::abs(Phase{PhaseKind::bbm, m}(xi) - std::complex<double>(am, -xi * am) / (1 + am)) < 1e-15);
    CHECK(std::abs(Phase{PhaseKind::kdv, m}(xi) - std::complex<double>(am, -xi * am)) < 1e-15);
  }
  CHECK(parse_phase_kind("kdv") == PhaseKind::kdv);
  CHECK_THROWS_AS(parse_phase_kind("wave"), std::invalid_argument);
}

TEST_CASE("identity at t = 0 and rejection of negative time") {
  Grid g(256, 20.0);
  auto v0 = gaussian(g, 1.0);
  for (PhaseKind k : {PhaseKind::heat, PhaseKind::bbm, PhaseKind::kdv}) {
    CHECK(lp_norm(apply_semigroup(Phase{k, 3.0}, 0.0, v0) - v0, inf) == 0.0);
    CHECK_THROWS_AS(apply_semigroup(Phase{k, 3.0}, -0.1, v0), std::invalid_argument);
  }
}

TEST_CASE("single Fourier mode under the bbm semigroup") {
  Grid g(64, pi);
  const double m = 3.0;
  for (int k : {1, 2}) {
    auto v0 = F::sample(g, [k](double x) { return std::sin(k * x); });
    for (double t : {0.5, 2.0}) {
      const double km = std::pow(k, m);
      const double amp = std::exp(-t * km / (1 + km));
      const double shift = t * k * km / (1 + km);
      auto v = apply_semigroup(Phase{PhaseKind::bbm, m}, t, v0);
      auto exact = F::sample(g, [&](double x) { return amp * std::sin(k * x + shift); });
      CHECK(lp_norm(v - exact, inf) <= 1e-10);
    }
  }
}

TEST_CASE("mass conservation and semigroup law on random data") {
  PortableRng rng(99);
  Grid g(512, 40.0);
  for (int trial = 0; trial < 30; ++trial) {
    auto v0 = random_bumps(g, rng);
    for (PhaseKind k : {PhaseKind::heat, PhaseKind::bbm, PhaseKind::kdv}) {
      Phase ph{k, rng.uniform(2, 4)};
      const double t = rng.uniform(0.1, 5);
      auto v = apply_semigroup(ph, t, v0);
      CHECK(std::abs(integral(v) - integral(v0)) <= 1e-10 * lp_norm(v0, 1.0));
      CHECK(semigroup_property_check(ph, rng.uniform(0, 3), t, v0) <= 1e-10 * lp_norm(v0, 2.0));
    }
  }
}

TEST_CASE("semigroup law examples") {
  Grid g(512, 40.0);
  auto v0 = gaussian(g);
  CHECK(semigroup_property_check(Phase{PhaseKind::heat, 2.0}, 0.0, 1.0, v0) <= 1e-12 * lp_norm(v0, 2.0));
  CHECK(semigroup_property_check(Phase{PhaseKind::heat, 2.0}, 1.0, 1.0, v0) <= 1e-10);
  PortableRng rng(3);
  auto r = random_bumps(g, rng);
  CHECK(semigroup_property_check(Phase{PhaseKind::bbm, 2.5}, 0.3, 1.7, r) <= 1e-10 * lp_norm(r, 2.0));
}

TEST_CASE("traveling frame") {
  Grid g(256, 20.0);
  auto u0 = gaussian(g, -1.0, 1.5);
  Trajectory<double> u(g);
  u.push_back(0.0, u0);
  u.push_back(g.dx(), u0);
  u.push_back(0.37, u0);
  auto v = traveling_frame(u, +1);
  CHECK(lp_norm(v.field(0) - u0, inf) == 0.0);
  // one grid cell: v(x_i) = u(x_i + dx) = u_{i+1}
  double err = 0;
  for (Index i = 0; i < g.size(); ++i) err = std::max(err, std::abs(v.field(1).values[i] - u0.values[(i + 1) % g.size()]));
  CHECK(err <= 1e-14);
  auto back = traveling_frame(v, -1);
  for (std::size_t k = 0; k < u.size(); ++k) CHECK(lp_norm(back.field(k) - u.field(k), 2.0) <= 1e-12);
  CHECK_THROWS_AS(traveling_frame(u, 0), std::invalid_argument);
}

TEST_CASE("frame change maps the convective linear flow onto the bbm semigroup") {
  // The linear part of u_t + M u_t + M u + u_x = 0 has the symbol (|xi|^m + i xi)/(1 + |xi|^m).
  Grid g(1024, 60.0);
  const double m = 3.0;
  auto u0 = gaussian(g, 0.5, 0.8);
  Trajectory<double> u(g);
  for (double t : {0.0, 0.5, 2.0, 6.0}) {
    auto ut = inverse(apply_multiplier(forward(u0), [&](double xi) {
      const double am = std::pow(std::abs(xi), m);
      return std::exp(-t * std::complex<double>(am, xi) / (1 + am));
    }));
    u.push_back(t, ut);
  }
  auto v = traveling_frame(u, +1);
  for (std::size_t k = 0; k < v.size(); ++k)
    CHECK(lp_norm(v.field(k) - apply_semigroup(Phase{PhaseKind::bbm, m}, v.time(k), u0), 2.0) <= 1e-12);
}

TEST_CASE("linear decay rates on Gaussian and kernel data") {
  Grid g(4096, 400.0);
  const auto times = log_spaced(64.0, 256.0, 10);
  for (double m : {2.5, 3.0, 4.0}) {
    for (bool kernel_data : {false, true}) {
      auto v0 = kernel_data ? bessel_kernel(m, 1, g) : gaussian(g);
      std::vector<double> l2, dx, li;
      for (double t : times) {
        auto v = apply_semigroup(Phase{PhaseKind::bbm, m}, t, v0);
        l2.push_back(lp_norm(v, 2.0));
        dx.push_back(lp_norm(derivative(v), 2.0));
        li.push_back(lp_norm(v, inf));
      }
      const double e1 = -1 / (2 * m), e2 = -1 / (2 * m) - 1 / m, e3 = -1 / m;
      CHECK(std::abs(fit_power_law(times, l2).exponent - e1) <= 0.05 * std::abs(e1));
      CHECK(std::abs(fit_power_law(times, dx).exponent - e2) <= 0.05 * std::abs(e2));
      CHECK(std::abs(fit_power_law(times, li).exponent - e3) <= 0.05 * std::abs(e3));
    }
  }
}

TEST_CASE("first-term convergence of the linear flow") {
  Grid g(4096, 400.0);
  const double m = 3.0;
  auto v0 = gaussian(g, 1.0, 0.7);
  const double M0 = integral(v0);
  for (double p : {2.0, inf}) {
    double prev = inf;
    for (double t : log_spaced(1.0, 256.0, 12)) {
      auto diff = apply_semigroup(Phase{PhaseKind::bbm, m}, t, v0) - M0 * heat_kernel(m, t, g);
      const double scaled = std::pow(t, (1 / m) * (1 - (std::isinf(p) ? 0 : 1 / p))) * lp_norm(diff, p);
      CHECK(scaled < prev);
      prev = scaled;
    }
  }
}

TEST_CASE("S(t) K_m approaches G_m(t)") {
  // The next-order term is only t^{-2/3} smaller for m = 3, so the window starts late.
  Grid g(16384, 1600.0);
  const double m = 3.0;
  auto K = bessel_kernel(m, 1, g);
  const auto times = log_spaced(256.0, 1024.0, 10);
  for (double p : {1.0, 2.0, inf}) {
    std::vector<double> r;
    for (double t : times) r.push_back(lp_norm(apply_semigroup(Phase{PhaseKind::bbm, m}, t, K) - heat_kernel(m, t, g), p));
    const double bound = kernel_decay_exponent(m, 0, p) - 1 / m;
    CHECK(fit_power_law(times, r).exponent <= bound + 0.02 * std::abs(bound));
  }
}
