#include "doctest.h"

#include "dispersive/fourier.hpp"
#include "dispersive/random.hpp"

#include <cmath>
#include <complex>
#include <numbers>

using namespace dispersive;
using Grid = SpectralGrid<double>;
using F = Field<double>;
constexpr double pi = std::numbers::pi;

namespace {

// Smooth random field: a few Gaussian bumps with random sign, width and position.
F random_field(const Grid& g, PortableRng& rng) {
  double c[4], w[4], a[4];
  for (int k = 0; k < 4; ++k) {
    c[k] = rng.uniform(-0.3, 0.3) * g.half_width();
    w[k] = rng.uniform(0.5, 3.0);
    a[k] = rng.uniform(-1.0, 1.0);
  }
  return F::sample(g, [&](double x) {
    double s = 0;
    for (int k = 0; k < 4; ++k) s += a[k] * std::exp(-(x - c[k]) * (x - c[k]) / (2 * w[k] * w[k]));
    return s;
  });
}

// O(n^2) reference for the scaled transform, coefficient ordering as in the grid.
std::complex<double> direct_coefficient(const F& f, Index i) {
  std::complex<double> s = 0;
  const double xi = f.grid.frequency(i);
  for (Index j = 0; j < f.size(); ++j) s += f.values[j] * std::polar(1.0, -f.grid.node(j) * xi);
  return s * f.grid.dx();
}

}  // namespace

TEST_CASE("grid construction") {
  Grid g(16, 8.0);
  CHECK(g.dx() == 1.0);
  CHECK(g.node(0) == -8.0);
  CHECK(g.dx() * double(g.size()) == 2 * g.half_width());
  CHECK(g.frequency(3) == doctest::Approx(3 * pi / 8));
  CHECK(g.frequency(g.nyquist_index()) == doctest::Approx(-pi));

  Grid u = make_grid<double>(16, pi);
  CHECK(u.dx() == doctest::Approx(pi / 8));
  for (Index i = 0; i < 16; ++i) CHECK(u.frequency(i) == doctest::Approx(double(u.wavenumber(i))));

  CHECK_THROWS_AS(Grid(15, 8.0), std::invalid_argument);
  CHECK_THROWS_AS(Grid(8, 8.0), std::invalid_argument);
  CHECK_THROWS_AS(Grid(16, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Grid(16, -1.0), std::invalid_argument);
}

TEST_CASE("field invariants") {
  Grid g(16, 1.0);
  CHECK_THROWS_AS(F(g, Vector<double>::Zero(15)), std::invalid_argument);
  Vector<double> bad = Vector<double>::Zero(16);
  bad[3] = std::nan("");
  CHECK_THROWS_AS(F(g, bad), NumericalFailure);
}

TEST_CASE("zero field has zero spectrum") {
  Grid g(64, 5.0);
  auto s = forward(F::zeros(g));
  CHECK(s.coeffs.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("cosine against direct summation") {
  Grid g(64, 4 * pi);  // xi = 1 is wavenumber 4
  auto f = F::sample(g, [](double x) { return std::cos(x); });
  auto s = forward(f);
  double err = 0;
  for (Index i = 0; i < g.size(); ++i) err = std::max(err, std::abs(s.coeffs[i] - direct_coefficient(f, i)));
  CHECK(err < 1e-12);
  CHECK(s.coeffs[4].real() == doctest::Approx(g.half_width()).epsilon(1e-12));
  CHECK(s.coeffs[g.size() - 4].real() == doctest::Approx(g.half_width()).epsilon(1e-12));
  double rest = 0;
  for (Index i = 0; i < g.size(); ++i)
    if (std::abs(g.wavenumber(i)) != 4) rest = std::max(rest, std::abs(s.coeffs[i]));
  CHECK(rest < 1e-12);
}

TEST_CASE("Gaussian transform matches closed form") {
  Grid g(512, 20.0);
  auto s = forward(F::sample(g, [](double x) { return std::exp(-x * x / 2); }));
  double err = 0;
  for (Index i = 0; i < g.size(); ++i) {
    const double xi = g.frequency(i);
    err = std::max(err, std::abs(s.coeffs[i] - std::sqrt(2 * pi) * std::exp(-xi * xi / 2)));
  }
  CHECK(err <= 1e-10);
}

TEST_CASE("round trip and Plancherel on random fields") {
  PortableRng rng(20240917);
  Grid g(256, 20.0);
  for (int trial = 0; trial < 100; ++trial) {
    auto f = random_field(g, rng);
    auto s = forward(f);
    auto back = inverse(s);
    const double n2 = lp_norm(f, 2.0);
    CHECK(lp_norm(back - f, 2.0) <= 1e-12 * n2);
    CHECK(std::abs(n2 * n2 - std::pow(spectral_l2_norm(s), 2)) <= 1e-10 * n2 * n2);
    // Hermitian symmetry of a real field's spectrum.
    double herm = 0;
    for (Index i = 1; i < g.size(); ++i) herm = std::max(herm, std::abs(s.coeffs[i] - std::conj(s.coeffs[g.size() - i])));
    CHECK(herm <= 1e-12 * s.coeffs.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("multiplier identities and linearity") {
  PortableRng rng(7);
  Grid g(128, 10.0);
  auto f1 = random_field(g, rng), f2 = random_field(g, rng);
  auto s1 = forward(f1), s2 = forward(f2);
  auto one = apply_multiplier(s1, [](double) { return std::complex<double>(1); });
  CHECK((one.coeffs - s1.coeffs).cwiseAbs().maxCoeff() == 0.0);
  auto zero = apply_multiplier(s1, [](double) { return std::complex<double>(0); });
  CHECK(zero.coeffs.cwiseAbs().maxCoeff() == 0.0);

  auto sym = [](double xi) { return std::complex<double>(std::abs(xi), -xi); };
  Spectrum<double> sum(g, s1.coeffs + s2.coeffs);
  auto lhs = apply_multiplier(sum, sym);
  auto rhs1 = apply_multiplier(s1, sym), rhs2 = apply_multiplier(s2, sym);
  CHECK((lhs.coeffs - (rhs1.coeffs + rhs2.coeffs)).cwiseAbs().maxCoeff() <= 1e-15 * lhs.coeffs.cwiseAbs().maxCoeff());

  CHECK_THROWS_AS(apply_multiplier(s1, [](double xi) { return std::complex<double>(1.0 / (xi - xi)); }),
                  NumericalFailure);
}

TEST_CASE("i xi differentiates on-grid sines") {
  Grid g(128, pi);
  for (int k : {1, 3, 7}) {
    auto f = F::sample(g, [k](double x) { return std::sin(k * x); });
    auto d = inverse(apply_multiplier(forward(f), [](double xi) { return std::complex<double>(0, xi); }));
    double err = 0;
    for (Index i = 0; i < g.size(); ++i) err = std::max(err, std::abs(d.values[i] - k * std::cos(k * g.node(i))));
    CHECK(err <= 1e-10);
  }
}

TEST_CASE("Nyquist handling keeps real output") {
  Grid g(16, pi);
  auto f = F::sample(g, [](double x) { return std::cos(8 * x); });  // pure Nyquist mode
  auto mult = multiplier_values(g, [](double xi) { return std::complex<double>(0, xi); });
  CHECK(mult[g.nyquist_index()] == std::complex<double>(0, 0));
  auto raw = multiplier_values(g, [](double xi) { return std::complex<double>(0, xi); }, false);
  CHECK(raw[g.nyquist_index()].imag() == doctest::Approx(-8.0));
  CHECK(lp_norm(derivative(f), double(INFINITY)) < 1e-12);
}

TEST_CASE("L^p norms") {
  Grid g(1024, 30.0);
  auto z = F::zeros(g);
  for (double p : {1.0, 2.0, 3.5, double(INFINITY)}) CHECK(lp_norm(z, p) == 0.0);
  CHECK_THROWS_AS(lp_norm(z, 0.5), std::invalid_argument);

  auto plateau = F::sample(g, [](double x) { return (x >= -1 && x < 1) ? 1.0 : 0.0; });
  CHECK(std::abs(lp_norm(plateau, 1.0) - 2) <= g.dx());

  auto heat = F::sample(g, [](double x) { return std::exp(-x * x / 4) / std::sqrt(4 * pi); });
  CHECK(std::abs(lp_norm(heat, 1.0) - 1) <= 1e-10);
  CHECK(lp_norm(heat, double(INFINITY)) == doctest::Approx(1 / std::sqrt(4 * pi)).epsilon(1e-14));
  // closed form of the L^3 norm: (4 pi)^{-1/2} (4 pi / 3)^{1/6}
  CHECK(lp_norm(heat, 3.0) == doctest::Approx(std::pow(4 * pi, -0.5) * std::pow(4 * pi / 3, 1.0 / 6)).epsilon(1e-10));
}

TEST_CASE("tail mass diagnostic") {
  Grid g(1024, 30.0);
  auto narrow = F::sample(g, [](double x) { return std::exp(-x * x); });
  CHECK(tail_is_negligible(narrow));
  auto wide = F::sample(g, [](double x) { return 1 / (1 + x * x); });
  CHECK(tail_mass(wide) > 1e-3);
  CHECK_FALSE(tail_is_negligible(wide));
}

TEST_CASE("dealiasing zeroes the top third") {
  Grid g(64, 5.0);
  Spectrum<double> s(g, ComplexVector<double>::Ones(64));
  dealias(s);
  for (Index i = 0; i < 64; ++i) {
    const Index k = std::abs(g.wavenumber(i));
    CHECK(std::abs(s.coeffs[i]) == (3 * k >= 64 ? 0.0 : 1.0));
  }
}
