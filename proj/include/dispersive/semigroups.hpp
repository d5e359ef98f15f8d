#pragma once

#include "dispersive/fourier.hpp"
#include "dispersive/kernels.hpp"
#include "dispersive/trajectory.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace dispersive {

enum class PhaseKind { heat, bbm, kdv };

inline std::string to_string(PhaseKind k) {
  switch (k) {
    case PhaseKind::heat: return "heat";
    case PhaseKind::bbm: return "bbm";
    case PhaseKind::kdv: return "kdv";
  }
  return "?";
}

inline PhaseKind parse_phase_kind(const std::string& s) {
  if (s == "heat") return PhaseKind::heat;
  if (s == "bbm") return PhaseKind::bbm;
  if (s == "kdv") return PhaseKind::kdv;
  throw std::invalid_argument("unknown phase kind '" + s + "' (expected heat, bbm or kdv)");
}

// Solutions evolve as e^{-t symbol(xi)}.
//   heat: |xi|^m
//   bbm:  (|xi|^m - i xi |xi|^m) / (1 + |xi|^m)   (linearised equation in the moving frame)
//   kdv:  |xi|^m - i xi |xi|^m
template <typename Scalar>
struct PhaseFunction {
  PhaseKind kind = PhaseKind::bbm;
  Scalar m = 2;

  std::complex<Scalar> operator()(Scalar xi) const {
    const Scalar am = std::pow(std::abs(xi), m);
    const std::complex<Scalar> disp(0, -xi * am);
    switch (kind) {
      case PhaseKind::heat: return am;
      case PhaseKind::bbm: return (am + disp) / (Scalar(1) + am);
      case PhaseKind::kdv: return am + disp;
    }
    return 0;
  }

  bool operator==(const PhaseFunction&) const = default;
};

template <typename Scalar>
ComplexVector<Scalar> propagator(const PhaseFunction<Scalar>& phase, Scalar t, const SpectralGrid<Scalar>& grid) {
  if (!(t >= 0)) throw std::invalid_argument("semigroup time must be non-negative");
  return multiplier_values(grid, [&](Scalar xi) { return std::exp(-t * phase(xi)); });
}

template <typename Scalar>
Field<Scalar> apply_semigroup(const PhaseFunction<Scalar>& phase, Scalar t, const Field<Scalar>& v0) {
  require_order(phase.m);
  if (!(t >= 0)) throw std::invalid_argument("semigroup time must be non-negative");
  if (t == 0) return v0;
  return inverse(apply_multiplier(forward(v0), propagator(phase, t, v0.grid)));
}

template <typename Scalar>
Scalar semigroup_property_check(const PhaseFunction<Scalar>& phase, Scalar s, Scalar t, const Field<Scalar>& v0) {
  const auto once = apply_semigroup(phase, s + t, v0);
  const auto twice = apply_semigroup(phase, s, apply_semigroup(phase, t, v0));
  return lp_norm(once - twice, Scalar(2));
}

// Exact spectral translation f(x) -> f(x + shift).
template <typename Scalar>
Field<Scalar> translate(const Field<Scalar>& f, Scalar shift) {
  if (shift == 0) return f;
  return inverse(apply_multiplier(forward(f), [shift](Scalar xi) {
    return std::polar(Scalar(1), shift * xi);
  }));
}

// direction +1 maps u(x,t) to v(x,t) = u(x+t,t), the frame that removes the
// convective term; direction -1 maps back.
template <typename Scalar>
Trajectory<Scalar> traveling_frame(const Trajectory<Scalar>& u, int direction) {
  if (direction != 1 && direction != -1) throw std::invalid_argument("frame direction must be +1 or -1");
  Trajectory<Scalar> v(u.grid());
  for (std::size_t k = 0; k < u.size(); ++k) v.push_back(u.time(k), translate(u.field(k), Scalar(direction) * u.time(k)));
  return v;
}

}  // namespace dispersive
