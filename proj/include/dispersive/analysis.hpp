#pragma once

#include "dispersive/quadrature.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace dispersive {

template <typename Scalar>
struct RateFit {
  Scalar exponent = 0;
  Scalar prefactor = 0;
  Scalar fit_residual = 0;
  Scalar t_min = 0;
  Scalar t_max = 0;
  int n_samples = 0;
};

constexpr int min_fit_samples = 8;

// Least-squares line through (log t, log y) for the samples with t in [t_lo, t_hi].
template <typename Scalar>
RateFit<Scalar> fit_power_law(const std::vector<Scalar>& times, const std::vector<Scalar>& values, Scalar t_lo,
                              Scalar t_hi) {
  if (times.size() != values.size()) throw std::invalid_argument("times and values differ in length");
  std::vector<Scalar> X, Y;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_lo || times[i] > t_hi) continue;
    if (!(times[i] > 0)) throw std::invalid_argument("fit window must lie at positive times");
    if (!(values[i] > 0) || !std::isfinite(values[i]))
      throw std::invalid_argument("power-law fit needs positive finite values, got " + std::to_string(double(values[i])) +
                                  " at t = " + std::to_string(double(times[i])));
    X.push_back(std::log(times[i]));
    Y.push_back(std::log(values[i]));
  }
  if (int(X.size()) < min_fit_samples)
    throw std::invalid_argument("fit window holds " + std::to_string(X.size()) + " samples; at least " +
                                std::to_string(min_fit_samples) + " are needed");
  RateFit<Scalar> fit;
  fit.n_samples = int(X.size());
  fit.t_min = std::numeric_limits<Scalar>::infinity();
  fit.t_max = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_lo || times[i] > t_hi) continue;
    fit.t_min = std::min(fit.t_min, times[i]);
    fit.t_max = std::max(fit.t_max, times[i]);
  }
  if (fit.t_max < 4 * fit.t_min) throw std::invalid_argument("fit window must span a factor of at least 4 in time");

  const Scalar n = Scalar(X.size());
  Scalar mx = 0, my = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    mx += X[i];
    my += Y[i];
  }
  mx /= n;
  my /= n;
  Scalar sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    sxx += (X[i] - mx) * (X[i] - mx);
    sxy += (X[i] - mx) * (Y[i] - my);
  }
  fit.exponent = sxy / sxx;
  const Scalar intercept = my - fit.exponent * mx;
  fit.prefactor = std::exp(intercept);
  Scalar ss = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const Scalar d = Y[i] - (intercept + fit.exponent * X[i]);
    ss += d * d;
  }
  fit.fit_residual = std::sqrt(ss / n);
  return fit;
}

template <typename Scalar>
RateFit<Scalar> fit_power_law(const std::vector<Scalar>& times, const std::vector<Scalar>& values) {
  return fit_power_law(times, values, -std::numeric_limits<Scalar>::infinity(), std::numeric_limits<Scalar>::infinity());
}

// n log-spaced times from t0 to t1 inclusive.
template <typename Scalar>
std::vector<Scalar> log_spaced(Scalar t0, Scalar t1, int n) {
  if (n < 2 || !(t0 > 0) || !(t1 > t0)) throw std::invalid_argument("log_spaced needs 0 < t0 < t1 and n >= 2");
  std::vector<Scalar> t(n);
  const Scalar r = std::log(t1 / t0);
  for (int i = 0; i < n; ++i) t[i] = t0 * std::exp(r * Scalar(i) / Scalar(n - 1));
  t.back() = t1;
  return t;
}

enum class InequalityClass { decay_product, sub_critical, super_critical, logarithmic };

inline std::string to_string(InequalityClass l) {
  switch (l) {
    case InequalityClass::decay_product: return "decay-product";
    case InequalityClass::sub_critical: return "growth-subcritical";
    case InequalityClass::super_critical: return "growth-supercritical";
    case InequalityClass::logarithmic: return "logarithmic";
  }
  return "?";
}

// Picks the applicable bound from the exponent pair:
//   a > 0, b > 0, max(a,b) > 1:  int (1+t-s)^{-a}(1+s)^{-b} ds  <~ (1+t)^{-min(a,b)}
//   a in (-1,0], b in (-1,0]:    int (1+t-s)^{a}(1+s)^{b} ds    <~ (1+t)^{a+b+1}
//   a in (-1,0], b < -1:         same integrand                  <~ (1+t)^{a}
//   a in (-1,0], b = -1:         same integrand                  <~ (1+t)^{a}(1+log(1+t))
inline InequalityClass classify_inequality(double a, double b) {
  if (a > 0 && b > 0) {
    if (std::max(a, b) > 1) return InequalityClass::decay_product;
    throw std::invalid_argument("for positive exponents the larger one must exceed 1");
  }
  if (a > -1 && a <= 0) {
    if (b == -1) return InequalityClass::logarithmic;
    if (b > -1 && b <= 0) return InequalityClass::sub_critical;
    if (b < -1) return InequalityClass::super_critical;
  }
  throw std::invalid_argument("exponents (a=" + std::to_string(a) + ", b=" + std::to_string(b) +
                              ") satisfy none of the convolution inequality hypotheses");
}

template <typename Scalar>
struct InequalityReport {
  InequalityClass kind = InequalityClass::decay_product;
  Scalar a = 0, b = 0;
  std::vector<Scalar> times, lhs, rhs, ratio;

  bool all_finite() const {
    for (Scalar r : ratio)
      if (!std::isfinite(r)) return false;
    return true;
  }

  Scalar max_ratio() const {
    Scalar m = 0;
    for (Scalar r : ratio) m = std::max(m, r);
    return m;
  }

  // Literal monotonicity beyond t0, allowing for quadrature noise at the given relative level.
  bool non_increasing_after(Scalar t0, Scalar rel_slack = Scalar(1e-9)) const {
    for (std::size_t k = 1; k < times.size(); ++k)
      if (times[k - 1] >= t0 && ratio[k] > ratio[k - 1] * (1 + rel_slack)) return false;
    return true;
  }

  // Growth of the ratio over the last decade of t against the decade before it; a
  // bounded ratio has shrinking increments.
  bool increments_shrinking() const;
};

template <typename Scalar>
Scalar interpolate_log(const std::vector<Scalar>& t, const std::vector<Scalar>& y, Scalar at) {
  if (at <= t.front()) return y.front();
  for (std::size_t k = 1; k < t.size(); ++k) {
    if (at <= t[k]) {
      const Scalar w = std::log(at / t[k - 1]) / std::log(t[k] / t[k - 1]);
      return y[k - 1] + w * (y[k] - y[k - 1]);
    }
  }
  return y.back();
}

template <typename Scalar>
bool InequalityReport<Scalar>::increments_shrinking() const {
  if (times.size() < 3 || !(times.back() >= 100)) return true;
  const Scalar T = times.back();
  const Scalar r2 = ratio.back();
  const Scalar r1 = interpolate_log(times, ratio, T / 10);
  const Scalar r0 = interpolate_log(times, ratio, T / 100);
  return (r2 - r1) <= std::max(r1 - r0, Scalar(0)) + Scalar(1e-9) * std::abs(r2);
}

template <typename Scalar>
Scalar inequality_lhs(InequalityClass kind, Scalar a, Scalar b, Scalar t, Scalar rel_tol = Scalar(1e-10)) {
  if (t < 0) throw std::invalid_argument("inequality time must be non-negative");
  if (t == 0) return 0;
  const Scalar ea = kind == InequalityClass::decay_product ? -a : a;
  const Scalar eb = kind == InequalityClass::decay_product ? -b : b;
  auto f = [&](Scalar s) { return std::pow(1 + t - s, ea) * std::pow(1 + s, eb); };
  // Boundary layers sit at both ends; seed panels there.
  std::vector<Scalar> cuts{std::min(Scalar(1), t / 4), t / 2, std::max(t - 1, 3 * t / 4)};
  return integrate<Scalar>(f, Scalar(0), t, rel_tol, Scalar(0), cuts).value;
}

template <typename Scalar>
Scalar inequality_rhs(InequalityClass kind, Scalar a, Scalar b, Scalar t) {
  switch (kind) {
    case InequalityClass::decay_product: return std::pow(1 + t, -std::min(a, b));
    case InequalityClass::sub_critical: return std::pow(1 + t, a + b + 1);
    case InequalityClass::super_critical: return std::pow(1 + t, a);
    case InequalityClass::logarithmic: return std::pow(1 + t, a) * (1 + std::log1p(t));
  }
  return 0;
}

template <typename Scalar>
InequalityReport<Scalar> check_convolution_inequality(Scalar a, Scalar b, const std::vector<Scalar>& t_list) {
  InequalityReport<Scalar> rep;
  rep.kind = classify_inequality(double(a), double(b));
  rep.a = a;
  rep.b = b;
  for (Scalar t : t_list) {
    const Scalar l = inequality_lhs(rep.kind, a, b, t);
    const Scalar r = inequality_rhs(rep.kind, a, b, t);
    rep.times.push_back(t);
    rep.lhs.push_back(l);
    rep.rhs.push_back(r);
    rep.ratio.push_back(l / r);
  }
  return rep;
}

}  // namespace dispersive
