#pragma once

#include "dispersive/fourier.hpp"
#include "dispersive/kernels.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dispersive {

constexpr int max_expansion_order = 20;

inline std::uint64_t factorial(int k) {
  if (k < 0 || k > max_expansion_order) throw std::invalid_argument("factorial argument out of range: " + std::to_string(k));
  std::uint64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= std::uint64_t(i);
  return f;
}

inline void require_expansion_order(int N) {
  if (N < 0 || N > max_expansion_order)
    throw std::invalid_argument("expansion order N must lie in [0, " + std::to_string(max_expansion_order) + "]");
}

// Integral of x^alpha f over the periodic cell.  The unpaired node x = -L is
// split evenly between both ends so that odd moments of even fields vanish.
template <typename Scalar>
Scalar moment_integral(const Field<Scalar>& f, int alpha) {
  const auto& g = f.grid;
  const Scalar L = g.half_width();
  Scalar sum = 0;
  for (Index i = 1; i < f.size(); ++i) sum += int_pow(g.node(i), alpha) * f.values[i];
  sum += f.values[0] * (int_pow(-L, alpha) + int_pow(L, alpha)) / 2;
  return sum * g.dx();
}

class UntrustedMoment : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

template <typename Scalar>
struct MomentVector {
  int N = 0;
  std::vector<Scalar> values;
  std::vector<Scalar> tail_estimate;
  Scalar threshold = Scalar(1e-10);

  bool trusted(int alpha) const { return tail_estimate.at(alpha) <= threshold; }
  bool all_trusted() const {
    for (int a = 0; a <= N; ++a)
      if (!trusted(a)) return false;
    return true;
  }
  Scalar operator[](int alpha) const { return values.at(alpha); }
};

// M_alpha = ((-1)^alpha / alpha!) * integral of x^alpha v0.  The tail estimate is the
// share of the weighted mass |x|^alpha |v0| outside [-L/2, L/2]; moments above the
// threshold raise UntrustedMoment unless allow_untrusted is set.
template <typename Scalar>
MomentVector<Scalar> moments(const Field<Scalar>& v0, int N, Scalar threshold = Scalar(1e-10),
                             bool allow_untrusted = false) {
  require_expansion_order(N);
  MomentVector<Scalar> mv;
  mv.N = N;
  mv.threshold = threshold;
  const auto& g = v0.grid;
  const Scalar half = g.half_width() / 2;
  for (int a = 0; a <= N; ++a) {
    const Scalar sign = (a % 2 == 0) ? Scalar(1) : Scalar(-1);
    mv.values.push_back(sign * moment_integral(v0, a) / Scalar(factorial(a)));
    Scalar tail = 0, total = 0;
    for (Index i = 0; i < v0.size(); ++i) {
      const Scalar x = g.node(i);
      const Scalar w = int_pow(std::abs(x), a) * std::abs(v0.values[i]);
      total += w;
      if (std::abs(x) > half) tail += w;
    }
    mv.tail_estimate.push_back(total > 0 ? tail / total : Scalar(0));
  }
  if (!allow_untrusted) {
    for (int a = 0; a <= N; ++a)
      if (!mv.trusted(a))
        throw UntrustedMoment("moment M_" + std::to_string(a) + " is untrusted: tail share " +
                              std::to_string(double(mv.tail_estimate[a])) + " exceeds " +
                              std::to_string(double(threshold)) + "; enlarge the domain");
  }
  return mv;
}

// One summand  coefficient * K_m^{bessel_power} * (d_x M)^r M^{2j} d_x^alpha G_m(t).
template <typename Scalar>
struct ExpansionTerm {
  Scalar coefficient = 0;
  KernelSpec<Scalar> spec;
  int bessel_power = 0;

  bool operator==(const ExpansionTerm&) const = default;
};

template <typename Scalar>
using TermList = std::vector<ExpansionTerm<Scalar>>;

namespace detail {

inline void require_integer_order(double m) {
  if (m < 2 || m != std::floor(m)) throw std::invalid_argument("this expansion needs an integer m >= 2");
}

template <typename Scalar>
Scalar time_weight(Scalar t, int k) {
  return int_pow(t, k) / Scalar(factorial(k));
}

}  // namespace detail

template <typename Scalar>
TermList<Scalar> heat_terms(const MomentVector<Scalar>& mv, int N, Scalar m, Scalar t) {
  require_expansion_order(N);
  if (N > mv.N) throw std::invalid_argument("moment vector shorter than expansion order");
  TermList<Scalar> terms;
  for (int a = 0; a <= N; ++a) terms.push_back({mv[a], KernelSpec<Scalar>{m, t, 0, 0, a}, 0});
  return terms;
}

// Full double sum over (r, j, alpha) with 0 <= alpha <= N - r - m j and j <= [N/2].
// with_bessel keeps the K_m^{r+j} factors of the unreplaced expansion.
template <typename Scalar>
TermList<Scalar> bbm_integer_terms(const MomentVector<Scalar>& mv, int N, Scalar m, Scalar t, bool with_bessel = false) {
  require_expansion_order(N);
  detail::require_integer_order(double(m));
  if (N > mv.N) throw std::invalid_argument("moment vector shorter than expansion order");
  const int mi = int(m);
  TermList<Scalar> terms;
  for (int r = 0; r <= N; ++r) {
    for (int j = 0; j <= N / 2; ++j) {
      const int top = N - r - mi * j;
      if (top < 0) continue;
      const Scalar w = detail::time_weight(t, r) * detail::time_weight(t, j);
      for (int a = 0; a <= top; ++a)
        terms.push_back({w * mv[a], KernelSpec<Scalar>{m, t, r, j, a}, with_bessel ? r + j : 0});
    }
  }
  return terms;
}

// Two-term expansion for non-integer m: M0 G + M1 dG + t M0 (d_x M) G.
template <typename Scalar>
TermList<Scalar> bbm_fractional_terms(const MomentVector<Scalar>& mv, Scalar m, Scalar t) {
  if (!(m > 2) || m == std::floor(m)) throw std::invalid_argument("fractional expansion needs a non-integer m > 2");
  if (mv.N < 1) throw std::invalid_argument("fractional expansion needs moments up to order 1");
  return {{mv[0], KernelSpec<Scalar>{m, t, 0, 0, 0}, 0},
          {mv[1], KernelSpec<Scalar>{m, t, 0, 0, 1}, 0},
          {t * mv[0], KernelSpec<Scalar>{m, t, 1, 0, 0}, 0}};
}

// sum_j (t^j/j!) (d_x M)^j sum_{alpha <= N-j} M_alpha d_x^alpha G_m(t).
template <typename Scalar>
TermList<Scalar> kdv_terms(const MomentVector<Scalar>& mv, int N, Scalar m, Scalar t) {
  require_expansion_order(N);
  detail::require_integer_order(double(m));
  if (N > mv.N) throw std::invalid_argument("moment vector shorter than expansion order");
  TermList<Scalar> terms;
  for (int j = 0; j <= N; ++j)
    for (int a = 0; a <= N - j; ++a)
      terms.push_back({detail::time_weight(t, j) * mv[a], KernelSpec<Scalar>{m, t, j, 0, a}, 0});
  return terms;
}

template <typename Scalar>
ComplexVector<Scalar> term_symbol_values(const TermList<Scalar>& terms, const SpectralGrid<Scalar>& grid) {
  ComplexVector<Scalar> total = ComplexVector<Scalar>::Zero(grid.size());
  for (const auto& term : terms) {
    term.spec.validate();
    const auto bessel = bessel_symbol(term.spec.m, term.bessel_power);
    total += multiplier_values(grid, [&](Scalar xi) {
      std::complex<Scalar> s = term.coefficient * term.spec(xi);
      if (term.bessel_power > 0) s *= bessel(xi);
      return s;
    });
  }
  return total;
}

template <typename Scalar>
Field<Scalar> evaluate(const TermList<Scalar>& terms, const SpectralGrid<Scalar>& grid) {
  return inverse(Spectrum<Scalar>(grid, term_symbol_values(terms, grid)));
}

template <typename Scalar>
struct ExpansionResult {
  Field<Scalar> field;
  TermList<Scalar> terms;
};

template <typename Scalar>
Field<Scalar> heat_expansion(const Field<Scalar>& v0, int N, Scalar m, Scalar t) {
  return evaluate(heat_terms(moments(v0, N), N, m, t), v0.grid);
}

template <typename Scalar>
ExpansionResult<Scalar> linear_expansion_integer_m(const Field<Scalar>& v0, int N, Scalar m, Scalar t) {
  auto terms = bbm_integer_terms(moments(v0, N), N, m, t);
  return {evaluate(terms, v0.grid), std::move(terms)};
}

template <typename Scalar>
ExpansionResult<Scalar> linear_expansion_fractional_m(const Field<Scalar>& v0, Scalar m, Scalar t) {
  auto terms = bbm_fractional_terms(moments(v0, 1), m, t);
  return {evaluate(terms, v0.grid), std::move(terms)};
}

template <typename Scalar>
ExpansionResult<Scalar> kdv_expansion(const Field<Scalar>& u0, int N, Scalar m, Scalar t) {
  auto terms = kdv_terms(moments(u0, N), N, m, t);
  return {evaluate(terms, u0.grid), std::move(terms)};
}

template <typename Scalar>
ExpansionResult<Scalar> preliminary_expansion_with_K(const Field<Scalar>& v0, int N, Scalar m, Scalar t) {
  auto terms = bbm_integer_terms(moments(v0, N), N, m, t, true);
  return {evaluate(terms, v0.grid), std::move(terms)};
}

template <typename Scalar>
Scalar residual_norm(const Field<Scalar>& exact, const Field<Scalar>& partial_sum, Scalar p) {
  return lp_norm(exact - partial_sum, p);
}

// For even integer m = 2n every term is a signed plain derivative:
// (d_x M)^r M^{2j} d_x^alpha = (-1)^{n r} d_x^{(m+1) r + 2 m j + alpha}.
// Returns derivative order -> summed coefficient (Bessel factors not allowed).
template <typename Scalar>
std::map<int, Scalar> collapse_to_derivatives(const TermList<Scalar>& terms) {
  std::map<int, Scalar> out;
  for (const auto& term : terms) {
    const Scalar m = term.spec.m;
    if (m != std::floor(m) || int(m) % 2 != 0)
      throw std::invalid_argument("derivative collapse needs an even integer m");
    if (term.bessel_power != 0) throw std::invalid_argument("derivative collapse cannot absorb Bessel factors");
    const int mi = int(m);
    const int order = (mi + 1) * term.spec.r + 2 * mi * term.spec.j + term.spec.alpha;
    const Scalar sign = ((mi / 2) * term.spec.r) % 2 == 0 ? Scalar(1) : Scalar(-1);
    out[order] += sign * term.coefficient;
  }
  return out;
}

}  // namespace dispersive
