#pragma once

#include "dispersive/fourier.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace dispersive {

template <typename Scalar>
void require_order(Scalar m) {
  if (!(m >= 1) || !std::isfinite(m)) throw std::invalid_argument("operator order m must be >= 1");
}

// Symbol of (d_x M)^r M^{2j} d_x^alpha G_m(t):
//   (i xi |xi|^m)^r |xi|^{2mj} (i xi)^alpha e^{-t|xi|^m}.
template <typename Scalar>
struct KernelSpec {
  Scalar m = 2;
  Scalar t = 1;
  int r = 0;
  int j = 0;
  int alpha = 0;

  void validate() const {
    require_order(m);
    if (r < 0 || j < 0 || alpha < 0) throw std::invalid_argument("kernel indices r, j, alpha must be non-negative");
    if (!(t > 0) || !std::isfinite(t)) throw std::invalid_argument("kernel time t must be positive");
  }

  std::complex<Scalar> operator()(Scalar xi) const {
    const Scalar a = std::abs(xi);
    const Scalar am = std::pow(a, m);
    const std::complex<Scalar> I(0, 1);
    std::complex<Scalar> s = std::exp(-t * am) * int_pow(am, 2 * j);
    if (r > 0) s *= int_pow(I * xi * am, r);
    if (alpha > 0) s *= int_pow(I * xi, alpha);
    return s;
  }

  bool operator==(const KernelSpec&) const = default;
};

template <typename Scalar>
auto heat_symbol(Scalar m, Scalar t) {
  return [m, t](Scalar xi) { return std::complex<Scalar>(std::exp(-t * std::pow(std::abs(xi), m))); };
}

// (1 + |xi|^m)^{-j}: the symbol of K_m^{*j}.
template <typename Scalar>
auto bessel_symbol(Scalar m, int j) {
  return [m, j](Scalar xi) {
    return std::complex<Scalar>(std::pow(Scalar(1) + std::pow(std::abs(xi), m), -Scalar(j)));
  };
}

template <typename Scalar>
Field<Scalar> derivative_kernel(const KernelSpec<Scalar>& spec, const SpectralGrid<Scalar>& grid) {
  spec.validate();
  return inverse(Spectrum<Scalar>(grid, multiplier_values(grid, spec)));
}

template <typename Scalar>
Field<Scalar> heat_kernel(Scalar m, Scalar t, const SpectralGrid<Scalar>& grid) {
  return derivative_kernel(KernelSpec<Scalar>{m, t, 0, 0, 0}, grid);
}

template <typename Scalar>
Field<Scalar> bessel_kernel(Scalar m, int j, const SpectralGrid<Scalar>& grid) {
  if (!(m > 1) || !std::isfinite(m)) throw std::invalid_argument("Bessel kernel needs m > 1");
  if (j < 1) throw std::invalid_argument("Bessel kernel power must be >= 1");
  return inverse(Spectrum<Scalar>(grid, multiplier_values(grid, bessel_symbol(m, j))));
}

// Exact L^2 norm of d_x^j G_m(t) from Plancherel:
//   ||d^j G(t)||_2^2 = (1/2pi) * 2 Gamma((2j+1)/m) / (m (2t)^{(2j+1)/m}).
template <typename Scalar>
Scalar kernel_l2_closed_form(Scalar m, int j, Scalar t) {
  require_order(m);
  if (j < 0) throw std::invalid_argument("derivative order must be non-negative");
  if (!(t > 0)) throw std::invalid_argument("kernel time t must be positive");
  const Scalar s = Scalar(2 * j + 1) / m;
  const Scalar sq = std::tgamma(s) / (std::numbers::pi_v<Scalar> * m * std::pow(Scalar(2) * t, s));
  return std::sqrt(sq);
}

// Decay exponent of ||d^j G_m(t)||_p: -(1/m)(1 - 1/p) - j/m.
template <typename Scalar>
Scalar kernel_decay_exponent(Scalar m, int j, Scalar p) {
  const Scalar inv_p = std::isinf(p) ? Scalar(0) : Scalar(1) / p;
  return -(Scalar(1) - inv_p) / m - Scalar(j) / m;
}

}  // namespace dispersive
