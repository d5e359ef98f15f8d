#pragma once

#include "dispersive/analysis.hpp"
#include "dispersive/fourier.hpp"
#include "dispersive/kernels.hpp"
#include "dispersive/semigroups.hpp"
#include "dispersive/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace dispersive {

enum class PowerVariant { abs_power, signed_power };

inline std::string to_string(PowerVariant v) { return v == PowerVariant::abs_power ? "abs" : "signed"; }

inline PowerVariant parse_power_variant(const std::string& s) {
  if (s == "abs" || s == "abs_power") return PowerVariant::abs_power;
  if (s == "signed" || s == "signed_power") return PowerVariant::signed_power;
  throw std::invalid_argument("unknown power variant '" + s + "' (expected abs or signed)");
}

template <typename Scalar>
bool is_integer_value(Scalar x) {
  return x == std::floor(x);
}

// |v|^q or |v|^{q-1} v at one point.
template <typename Scalar>
Scalar power_value(Scalar v, Scalar q, PowerVariant variant) {
  const Scalar a = std::abs(v);
  if (is_integer_value(q) && q <= 64) {
    const int k = int(q);
    return variant == PowerVariant::abs_power ? int_pow(a, k) : int_pow(a, k - 1) * v;
  }
  const Scalar p = std::pow(a, q);
  return variant == PowerVariant::abs_power ? p : std::copysign(p, v);
}

template <typename Scalar>
void require_power(Scalar q) {
  if (!(q > 1) || !std::isfinite(q)) throw std::invalid_argument("power q must exceed 1");
}

template <typename Scalar>
Vector<Scalar> nonlinearity(const Vector<Scalar>& v, Scalar q, PowerVariant variant) {
  require_power(q);
  return v.unaryExpr([q, variant](Scalar x) { return power_value(x, q, variant); });
}

template <typename Scalar>
Field<Scalar> nonlinearity(const Field<Scalar>& v, Scalar q, PowerVariant variant) {
  return Field<Scalar>(v.grid, nonlinearity(v.values, q, variant));
}

// v_t + M v_t + M v - M v_x + c (v^q)_x = 0 in Fourier variables:
//   v^_t = -Phi v^ - c (i xi / (1 + |xi|^m)) (v^q)^.
template <typename Scalar>
struct NonlinearProblem {
  Scalar m = 3;
  Scalar q = 4;
  PowerVariant variant = PowerVariant::signed_power;
  Field<Scalar> v0;
  Scalar T_final = 1;
  Scalar dt = Scalar(0.01);
  Scalar coefficient = 1;
  // Output times; each must sit on the step grid.  Time 0 is always recorded.
  std::vector<Scalar> sample_times;

  explicit NonlinearProblem(Field<Scalar> initial) : v0(std::move(initial)) {}

  void validate() const {
    if (!(m > 2) || !std::isfinite(m)) throw std::invalid_argument("nonlinear problem needs m > 2");
    if (!(q > m) || !std::isfinite(q)) throw std::invalid_argument("nonlinear problem needs q > m");
    if (!is_integer_value(q) && variant == PowerVariant::abs_power)
      throw std::invalid_argument("non-integer q requires the signed power variant");
    if (!(T_final > 0) || !std::isfinite(T_final)) throw std::invalid_argument("T_final must be positive");
    if (!(dt > 0) || dt > T_final) throw std::invalid_argument("dt must lie in (0, T_final]");
    if (!std::isfinite(coefficient)) throw std::invalid_argument("nonlinear coefficient must be finite");
    step_count();
    for (Scalar t : sample_times) step_index(t);
  }

  Index step_count() const { return step_index(T_final); }

  Index step_index(Scalar t) const {
    const Scalar k = t / dt;
    const Scalar r = std::round(k);
    if (t < 0 || t > T_final * (1 + Scalar(1e-12)) || std::abs(k - r) > Scalar(1e-7) * std::max(Scalar(1), r))
      throw std::invalid_argument("time " + std::to_string(double(t)) + " is not a multiple of dt within [0, T_final]");
    return Index(r);
  }

  PhaseFunction<Scalar> phase() const { return {PhaseKind::bbm, m}; }
};

// Step indices at which a solver records output, always starting with 0.
template <typename Scalar>
std::vector<Index> sample_steps(const NonlinearProblem<Scalar>& prob) {
  std::vector<Index> steps{0};
  for (Scalar t : prob.sample_times) steps.push_back(prob.step_index(t));
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  return steps;
}

// Spectral right-hand side of the nonlinear term, dealiased by the 2/3 rule.
template <typename Scalar>
class NonlinearTerm {
 public:
  NonlinearTerm(const SpectralGrid<Scalar>& grid, Scalar m, Scalar q, PowerVariant variant, Scalar coefficient)
      : grid_(grid), q_(q), variant_(variant) {
    factor_ = multiplier_values(grid, [&](Scalar xi) {
      const Scalar am = std::pow(std::abs(xi), m);
      return std::complex<Scalar>(0, -coefficient * xi / (Scalar(1) + am));
    });
    Spectrum<Scalar> mask(grid, ComplexVector<Scalar>::Ones(grid.size()));
    dealias(mask);
    factor_ = factor_.cwiseProduct(mask.coeffs);
    zero_ = coefficient == 0;
  }

  bool is_zero() const { return zero_; }

  ComplexVector<Scalar> operator()(const ComplexVector<Scalar>& vhat, Scalar at_time = 0) const {
    if (zero_) return ComplexVector<Scalar>::Zero(vhat.size());
    const auto v = inverse_checked(vhat, at_time);
    return of_field(v);
  }

  ComplexVector<Scalar> of_field(const Vector<Scalar>& v) const {
    if (zero_) return ComplexVector<Scalar>::Zero(v.size());
    Field<Scalar> w(grid_, nonlinearity(v, q_, variant_));
    return forward(w).coeffs.cwiseProduct(factor_);
  }

  Vector<Scalar> inverse_checked(const ComplexVector<Scalar>& vhat, Scalar at_time) const {
    for (Index i = 0; i < vhat.size(); ++i)
      if (!std::isfinite(vhat[i].real()) || !std::isfinite(vhat[i].imag()))
        throw NumericalFailure("solution blew up (non-finite spectrum) at t = " + std::to_string(double(at_time)),
                               double(at_time));
    return inverse(Spectrum<Scalar>(grid_, vhat)).values;
  }

  Scalar max_factor() const { return factor_.cwiseAbs().maxCoeff(); }

 private:
  SpectralGrid<Scalar> grid_;
  Scalar q_;
  PowerVariant variant_;
  ComplexVector<Scalar> factor_;
  bool zero_ = false;
};

// Integrating-factor RK4: the linear part is propagated exactly by e^{-Phi dt},
// the nonlinear part by classical RK4 in the transformed variable.
template <typename Scalar>
Trajectory<Scalar> direct_solve(const NonlinearProblem<Scalar>& prob) {
  prob.validate();
  const auto& grid = prob.v0.grid;
  const NonlinearTerm<Scalar> nl(grid, prob.m, prob.q, prob.variant, prob.coefficient);
  if (prob.dt * nl.max_factor() > Scalar(0.5))
    throw std::invalid_argument("dt exceeds the stability bound 0.5 / max|c xi / (1 + |xi|^m)|");
  const auto phase = prob.phase();
  const ComplexVector<Scalar> E = propagator(phase, prob.dt, grid);
  const ComplexVector<Scalar> E2 = propagator(phase, prob.dt / 2, grid);
  const Scalar dt = prob.dt;
  const auto steps = sample_steps(prob);
  const Index n_steps = prob.step_count();

  Trajectory<Scalar> traj(grid);
  ComplexVector<Scalar> vhat = forward(prob.v0).coeffs;
  traj.push_back(0, prob.v0);
  std::size_t next = 1;
  for (Index s = 1; s <= n_steps && next < steps.size(); ++s) {
    const Scalar t0 = dt * Scalar(s - 1);
    if (nl.is_zero()) {
      vhat = E.cwiseProduct(vhat);
    } else {
      const ComplexVector<Scalar> k1 = nl(vhat, t0);
      const ComplexVector<Scalar> k2 = nl(E2.cwiseProduct(vhat + (dt / 2) * k1), t0);
      const ComplexVector<Scalar> k3 = nl(E2.cwiseProduct(vhat) + (dt / 2) * k2, t0);
      const ComplexVector<Scalar> k4 = nl(E.cwiseProduct(vhat) + dt * E2.cwiseProduct(k3), t0);
      vhat = E.cwiseProduct(vhat) +
             (dt / 6) * (E.cwiseProduct(k1) + Scalar(2) * E2.cwiseProduct(k2 + k3) + k4);
    }
    if (s == steps[next]) {
      const Scalar t = dt * Scalar(s);
      traj.push_back(t, Field<Scalar>(grid, nl.inverse_checked(vhat, t)));
      ++next;
    }
  }
  return traj;
}

// sup over samples of (1+t)^{1/2m}|v|_2 + (1+t)^{1/m}|v|_inf + (1+t)^{1/2m+1/m}|v_x|_2.
template <typename Scalar>
Scalar weighted_norm(const Trajectory<Scalar>& traj, Scalar m) {
  Scalar best = 0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Scalar s = 1 + traj.time(k);
    const auto& n = traj.norms()[k];
    const Scalar w = std::pow(s, 1 / (2 * m)) * n.l2 + std::pow(s, 1 / m) * n.linf + std::pow(s, 3 / (2 * m)) * n.dx_l2;
    best = std::max(best, w);
  }
  return best;
}

class PicardDivergence : public NumericalFailure {
 public:
  PicardDivergence(const std::string& what, std::vector<double> factors)
      : NumericalFailure(what), factors_(std::move(factors)) {}
  const std::vector<double>& factors() const { return factors_; }

 private:
  std::vector<double> factors_;
};

template <typename Scalar>
struct PicardResult {
  Trajectory<Scalar> trajectory;
  int iterations = 0;
  // sup over the tau grid of |v_{k+1} - v_k|_2, one entry per iteration.
  std::vector<Scalar> increments;
  // Weighted-norm increments M(v_{k+1} - v_k) and their successive ratios.
  std::vector<Scalar> weighted_increments;
  std::vector<Scalar> contraction_factors;
  Scalar initial_weighted_norm = 0;
  Scalar final_weighted_norm = 0;
};

// Fixed-point iteration of
//   v(t) = S(t) v0 + int_0^t S(t - s) N(v(s)) ds,
// starting from the linear solution.  The Duhamel integral uses the composite
// trapezoid rule on the uniform grid s_k = k h, h = T_final / n_steps, and all
// output times are evaluated together through the recurrence
//   B_k = E B_{k-1} + N_k,  I_k = h (B_k - E^k N_0 / 2 - N_k / 2),  E = e^{-h Phi}.
template <typename Scalar>
PicardResult<Scalar> picard_solve(const NonlinearProblem<Scalar>& prob_in, Index n_steps, int max_iter, Scalar tol) {
  if (n_steps < 1) throw std::invalid_argument("Picard quadrature needs at least one panel");
  if (max_iter < 1) throw std::invalid_argument("Picard needs max_iter >= 1");
  if (!(tol > 0)) throw std::invalid_argument("Picard tolerance must be positive");
  NonlinearProblem<Scalar> prob = prob_in;
  prob.dt = prob.T_final / Scalar(n_steps);
  prob.validate();

  const auto& grid = prob.v0.grid;
  const Index n = grid.size();
  const Scalar h = prob.dt;
  const auto phase = prob.phase();
  const NonlinearTerm<Scalar> nl(grid, prob.m, prob.q, prob.variant, prob.coefficient);
  const ComplexVector<Scalar> E = propagator(phase, h, grid);
  const ComplexVector<Scalar> v0hat = forward(prob.v0).coeffs;
  const Vector<Scalar> xi = grid.frequencies();

  std::vector<ComplexVector<Scalar>> linear(n_steps + 1);
  for (Index k = 0; k <= n_steps; ++k)
    linear[k] = propagator(phase, h * Scalar(k), grid).cwiseProduct(v0hat);

  std::vector<ComplexVector<Scalar>> current = linear;
  std::vector<Vector<Scalar>> fields(n_steps + 1);
  for (Index k = 0; k <= n_steps; ++k) fields[k] = nl.inverse_checked(current[k], h * Scalar(k));

  auto sample_traj = [&](const std::vector<Vector<Scalar>>& f) {
    Trajectory<Scalar> traj(grid);
    for (Index s : sample_steps(prob)) traj.push_back(h * Scalar(s), Field<Scalar>(grid, f[s]));
    return traj;
  };

  PicardResult<Scalar> res{sample_traj(fields), 0, {}, {}, {}, 0, 0};
  res.initial_weighted_norm = weighted_norm(res.trajectory, prob.m);
  const Scalar dxi = grid.dxi();
  const Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;

  for (int it = 1; it <= max_iter; ++it) {
    ComplexVector<Scalar> B(n), C(n);
    Scalar sup_l2 = 0, sup_w = 0;
    std::vector<ComplexVector<Scalar>> next(n_steps + 1);
    std::vector<Vector<Scalar>> next_fields(n_steps + 1);
    for (Index k = 0; k <= n_steps; ++k) {
      const Scalar t = h * Scalar(k);
      const ComplexVector<Scalar> Nk = nl.of_field(fields[k]);
      if (k == 0) {
        B = Nk;
        C = Nk;
        next[0] = linear[0];
      } else {
        B = E.cwiseProduct(B) + Nk;
        C = E.cwiseProduct(C);
        next[k] = linear[k] + h * (B - Scalar(0.5) * C - Scalar(0.5) * Nk);
      }
      next_fields[k] = nl.inverse_checked(next[k], t);

      const ComplexVector<Scalar> d = next[k] - current[k];
      const Scalar l2 = std::sqrt(d.squaredNorm() * dxi / two_pi);
      const Scalar dx_l2 = std::sqrt(d.cwiseProduct(xi.template cast<std::complex<Scalar>>()).squaredNorm() * dxi / two_pi);
      const Scalar linf = (next_fields[k] - fields[k]).cwiseAbs().maxCoeff();
      const Scalar s = 1 + t;
      sup_l2 = std::max(sup_l2, l2);
      sup_w = std::max(sup_w, std::pow(s, 1 / (2 * prob.m)) * l2 + std::pow(s, 1 / prob.m) * linf +
                                  std::pow(s, 3 / (2 * prob.m)) * dx_l2);
    }
    current = std::move(next);
    fields = std::move(next_fields);
    res.iterations = it;
    res.increments.push_back(sup_l2);
    if (!res.weighted_increments.empty() && res.weighted_increments.back() > 0)
      res.contraction_factors.push_back(sup_w / res.weighted_increments.back());
    res.weighted_increments.push_back(sup_w);
    if (!std::isfinite(sup_l2)) throw NumericalFailure("Picard iterate became non-finite");
    if (sup_l2 <= tol) {
      res.trajectory = sample_traj(fields);
      res.final_weighted_norm = weighted_norm(res.trajectory, prob.m);
      return res;
    }
  }
  std::vector<double> hist(res.contraction_factors.begin(), res.contraction_factors.end());
  std::string msg = "Picard iteration did not converge in " + std::to_string(max_iter) +
                    " iterations; last increment " + std::to_string(double(res.increments.back())) + "; factors:";
  for (double f : hist) msg += " " + std::to_string(f);
  throw PicardDivergence(msg, hist);
}

template <typename Scalar>
struct DecayFits {
  RateFit<Scalar> l2, dx_l2, linf;
};

template <typename Scalar>
DecayFits<Scalar> decay_check(const Trajectory<Scalar>& traj, Scalar t_lo, Scalar t_hi) {
  const auto& t = traj.times();
  return {fit_power_law(t, traj.l2_series(), t_lo, t_hi), fit_power_law(t, traj.dx_l2_series(), t_lo, t_hi),
          fit_power_law(t, traj.linf_series(), t_lo, t_hi)};
}

template <typename Scalar>
DecayFits<Scalar> decay_check(const Trajectory<Scalar>& traj) {
  if (traj.empty()) throw std::invalid_argument("empty trajectory");
  const Scalar T = traj.times().back();
  return decay_check(traj, T / 4, T);
}

// ---------------------------------------------------------------------------
// Second-term profiles.  Each profile P satisfies v(t) - S(t) v0 + P(t) -> 0
// faster than P itself.

enum class SecondTermCase { subcritical, critical, supercritical };

inline std::string to_string(SecondTermCase c) {
  switch (c) {
    case SecondTermCase::subcritical: return "subcritical";
    case SecondTermCase::critical: return "critical";
    case SecondTermCase::supercritical: return "supercritical";
  }
  return "?";
}

inline SecondTermCase parse_second_term_case(const std::string& s) {
  if (s == "subcritical" || s == "i") return SecondTermCase::subcritical;
  if (s == "critical" || s == "ii") return SecondTermCase::critical;
  if (s == "supercritical" || s == "iii") return SecondTermCase::supercritical;
  throw std::invalid_argument("unknown second-term case '" + s + "'");
}

template <typename Scalar>
SecondTermCase classify_second_term(Scalar m, Scalar q) {
  if (q > m && q < m + 1) return SecondTermCase::subcritical;
  if (q == m + 1) return SecondTermCase::critical;
  if (q > m + 1) return SecondTermCase::supercritical;
  throw std::invalid_argument("second-term profiles need q > m");
}

namespace detail {

// Transform of w(G_m(., 1)) where w is the chosen power, tabulated on a uniform
// frequency grid and interpolated by 4-point Lagrange.  The function is even and
// real, so only eta >= 0 is stored.
template <typename Scalar>
class UnitPowerTransform {
 public:
  UnitPowerTransform(Scalar m, Scalar q, PowerVariant variant, Index n = Index(1) << 15, Scalar L = 256)
      : grid_(n, L) {
    const auto g = heat_kernel(m, Scalar(1), grid_);
    const auto s = forward(Field<Scalar>(grid_, nonlinearity(g.values, q, variant)));
    table_.resize(n / 2);
    for (Index i = 0; i < n / 2; ++i) table_[i] = s.coeffs[i].real();
    mass_ = table_[0];
    step_ = grid_.dxi();
  }

  Scalar mass() const { return mass_; }

  Scalar operator()(Scalar eta) const {
    const Scalar x = std::abs(eta) / step_;
    const Index size = Index(table_.size());
    if (x >= Scalar(size - 3)) return 0;
    Index i = Index(std::floor(x));
    const Scalar u = x - Scalar(i);
    // Even extension supplies the left neighbour at i = 0.
    auto at = [&](Index k) { return table_[k < 0 ? -k : k]; };
    return -u * (u - 1) * (u - 2) / 6 * at(i - 1) + (u + 1) * (u - 1) * (u - 2) / 2 * at(i) -
           (u + 1) * u * (u - 2) / 2 * at(i + 1) + (u + 1) * u * (u - 1) / 6 * at(i + 2);
  }

 private:
  SpectralGrid<Scalar> grid_;
  std::vector<Scalar> table_;
  Scalar mass_ = 0;
  Scalar step_ = 0;
};

}  // namespace detail

// Integral of w(M G_m(x, 1)) dx, the constant of the critical profile.
template <typename Scalar>
Scalar critical_constant(Scalar m, Scalar q, PowerVariant variant, Scalar mass) {
  const detail::UnitPowerTransform<Scalar> H(m, q, variant);
  return power_value(mass, q, variant) * H.mass();
}

template <typename Scalar>
struct SupercriticalCoefficient {
  Scalar value = 0;       // truncated integral plus tail
  Scalar truncated = 0;   // int_0^T int w(v) dy ds by trapezoid over the samples
  Scalar tail = 0;        // extrapolated int_T^inf
  Scalar tail_exponent = 0;
  Scalar relative_tail = 0;
};

// int_0^inf int w(v(y,s)) dy ds from a trajectory: trapezoid over the samples,
// plus a power-law tail fitted on [T/4, T].
template <typename Scalar>
SupercriticalCoefficient<Scalar> supercritical_coefficient(const Trajectory<Scalar>& traj, Scalar q,
                                                           PowerVariant variant) {
  if (traj.size() < 2) throw std::invalid_argument("trajectory too short for the space-time integral");
  std::vector<Scalar> I(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) I[k] = integral(nonlinearity(traj.field(k), q, variant));
  SupercriticalCoefficient<Scalar> c;
  for (std::size_t k = 1; k < traj.size(); ++k) c.truncated += (traj.time(k) - traj.time(k - 1)) * (I[k] + I[k - 1]) / 2;
  const Scalar T = traj.times().back();
  std::vector<Scalar> mag(I.size());
  for (std::size_t k = 0; k < I.size(); ++k) mag[k] = std::abs(I[k]);
  const auto fit = fit_power_law(traj.times(), mag, T / 4, T);
  c.tail_exponent = fit.exponent;
  if (!(fit.exponent < -1))
    throw NumericalFailure("space-time integrand decays too slowly for a finite tail (exponent " +
                           std::to_string(double(fit.exponent)) + ")");
  const Scalar sign = I.back() < 0 ? Scalar(-1) : Scalar(1);
  c.tail = sign * fit.prefactor * std::pow(T, fit.exponent + 1) / (-(fit.exponent + 1));
  c.value = c.truncated + c.tail;
  c.relative_tail = c.value != 0 ? std::abs(c.tail / c.value) : Scalar(0);
  return c;
}

// Subcritical profile in Fourier variables,
//   P^(xi) = i xi w(M) int_0^t e^{-(t-s)|xi|^m} s^{d-1} H(xi s^{1/m}) ds,   d = 1 - (q-1)/m,
// using w(M G_m(s))^ (xi) = w(M) s^{d-1} H(xi s^{1/m}).  The substitution s = t u^{1/d}
// absorbs the endpoint singularity; u is then graded toward both ends and the
// trapezoid rule applied.
template <typename Scalar>
Spectrum<Scalar> subcritical_profile_spectrum(Scalar m, Scalar q, PowerVariant variant, Scalar mass, Scalar t,
                                              const SpectralGrid<Scalar>& grid, int panels = 800) {
  if (!(q > m && q < m + 1)) throw std::invalid_argument("subcritical profile needs m < q < m + 1");
  if (!(t > 0)) throw std::invalid_argument("profile time must be positive");
  const detail::UnitPowerTransform<Scalar> H(m, q, variant);
  const Scalar d = 1 - (q - 1) / m;
  const Scalar wM = power_value(mass, q, variant);
  const Index n = grid.size();
  ComplexVector<Scalar> out = ComplexVector<Scalar>::Zero(n);
  if (wM == 0) return Spectrum<Scalar>(grid, out);

  constexpr Scalar p = 3;
  std::vector<Scalar> u(panels + 1), du(panels + 1);
  for (int k = 0; k <= panels; ++k) {
    const Scalar s = Scalar(k) / Scalar(panels);
    const Scalar a = std::pow(s, p), b = std::pow(1 - s, p);
    u[k] = a / (a + b);
    const Scalar da = p * std::pow(s, p - 1), db = -p * std::pow(1 - s, p - 1);
    du[k] = (da * (a + b) - a * (da + db)) / ((a + b) * (a + b)) / Scalar(panels);
  }
  const Scalar tm = std::pow(t, 1 / m);
  const Scalar pref = wM * std::pow(t, d) / d;
  for (Index i = 0; i < n; ++i) {
    const Scalar xi = grid.frequency(i);
    const Scalar am = std::pow(std::abs(xi), m);
    Scalar acc = 0;
    for (int k = 0; k <= panels; ++k) {
      if (du[k] == 0) continue;
      const Scalar w = (k == 0 || k == panels) ? Scalar(0.5) : Scalar(1);
      const Scalar frac = std::pow(u[k], 1 / d);
      acc += w * du[k] * std::exp(-t * (1 - frac) * am) * H(xi * tm * std::pow(frac, 1 / m));
    }
    out[i] = std::complex<Scalar>(0, xi) * (pref * acc);
  }
  out[grid.nyquist_index()] = 0;
  return Spectrum<Scalar>(grid, out);
}

template <typename Scalar>
Field<Scalar> second_term_profile(const NonlinearProblem<Scalar>& prob, SecondTermCase which, Scalar t,
                                  const Trajectory<Scalar>* trajectory = nullptr) {
  if (classify_second_term(prob.m, prob.q) != which)
    throw std::invalid_argument("case " + to_string(which) + " does not match m = " + std::to_string(double(prob.m)) +
                                ", q = " + std::to_string(double(prob.q)));
  if (!(t > 0)) throw std::invalid_argument("profile time must be positive");
  const auto& grid = prob.v0.grid;
  const Scalar mass = integral(prob.v0);
  const KernelSpec<Scalar> dG{prob.m, t, 0, 0, 1};
  switch (which) {
    case SecondTermCase::subcritical: {
      auto s = subcritical_profile_spectrum(prob.m, prob.q, prob.variant, mass, t, grid);
      s.coeffs *= prob.coefficient;
      return inverse(s);
    }
    case SecondTermCase::critical: {
      const Scalar c = critical_constant(prob.m, prob.q, prob.variant, mass);
      return (prob.coefficient * std::log(t) * c) * derivative_kernel(dG, grid);
    }
    case SecondTermCase::supercritical: {
      if (trajectory == nullptr) throw std::invalid_argument("supercritical profile needs a trajectory");
      const auto c = supercritical_coefficient(*trajectory, prob.q, prob.variant);
      return (prob.coefficient * c.value) * derivative_kernel(dG, grid);
    }
  }
  throw std::logic_error("unhandled case");
}

}  // namespace dispersive
