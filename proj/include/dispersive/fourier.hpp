#pragma once

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <type_traits>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dispersive {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

// Thrown when a computation produces NaN/Inf or otherwise leaves the range where
// its output means anything.  The CLI maps it to exit code 2.
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what, double at_time = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(what), time_(at_time) {}
  double time() const { return time_; }

 private:
  double time_;
};

// Integer power by repeated squaring; avoids the log/exp route of std::pow on complex values.
template <typename T>
T int_pow(T base, int e) {
  T result(1);
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

inline bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

// Uniform periodic grid x_i = -L + i*dx on [-L, L).  Frequencies are stored in
// FFT order: wavenumbers 0..n/2-1 followed by -n/2..-1.
template <typename Scalar>
class SpectralGrid {
 public:
  SpectralGrid(Index n, Scalar half_width) : n_(n), L_(half_width) {
    if (!is_power_of_two(n) || n < 16)
      throw std::invalid_argument("grid size must be a power of two >= 16, got " + std::to_string(n));
    if (!(half_width > 0) || !std::isfinite(half_width))
      throw std::invalid_argument("grid half-width must be positive and finite");
  }

  Index size() const { return n_; }
  Scalar half_width() const { return L_; }
  Scalar dx() const { return Scalar(2) * L_ / Scalar(n_); }
  Scalar dxi() const { return std::numbers::pi_v<Scalar> / L_; }
  Scalar node(Index i) const { return -L_ + Scalar(i) * dx(); }
  Index wavenumber(Index i) const { return i < n_ / 2 ? i : i - n_; }
  Scalar frequency(Index i) const { return std::numbers::pi_v<Scalar> * Scalar(wavenumber(i)) / L_; }
  Index nyquist_index() const { return n_ / 2; }

  Vector<Scalar> nodes() const {
    Vector<Scalar> x(n_);
    for (Index i = 0; i < n_; ++i) x[i] = node(i);
    return x;
  }

  Vector<Scalar> frequencies() const {
    Vector<Scalar> xi(n_);
    for (Index i = 0; i < n_; ++i) xi[i] = frequency(i);
    return xi;
  }

  bool operator==(const SpectralGrid&) const = default;

 private:
  Index n_;
  Scalar L_;
};

template <typename Scalar>
SpectralGrid<Scalar> make_grid(Index n, Scalar half_width) {
  return SpectralGrid<Scalar>(n, half_width);
}

template <typename Scalar>
void require_same_grid(const SpectralGrid<Scalar>& a, const SpectralGrid<Scalar>& b) {
  if (!(a == b)) throw std::invalid_argument("operands live on different grids");
}

template <typename Scalar>
struct Field {
  SpectralGrid<Scalar> grid;
  Vector<Scalar> values;

  Field(const SpectralGrid<Scalar>& g, Vector<Scalar> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size())
      throw std::invalid_argument("field has " + std::to_string(values.size()) + " values for a grid of " +
                                  std::to_string(grid.size()));
    if (!values.allFinite()) throw NumericalFailure("field contains non-finite values");
  }

  static Field zeros(const SpectralGrid<Scalar>& g) { return Field(g, Vector<Scalar>::Zero(g.size())); }

  template <typename F>
  static Field sample(const SpectralGrid<Scalar>& g, F&& f) {
    Vector<Scalar> v(g.size());
    for (Index i = 0; i < g.size(); ++i) v[i] = f(g.node(i));
    return Field(g, std::move(v));
  }

  Index size() const { return values.size(); }
};

template <typename Scalar>
Field<Scalar> operator+(const Field<Scalar>& a, const Field<Scalar>& b) {
  require_same_grid(a.grid, b.grid);
  return Field<Scalar>(a.grid, a.values + b.values);
}

template <typename Scalar>
Field<Scalar> operator-(const Field<Scalar>& a, const Field<Scalar>& b) {
  require_same_grid(a.grid, b.grid);
  return Field<Scalar>(a.grid, a.values - b.values);
}

template <typename Scalar>
Field<Scalar> operator*(Scalar c, const Field<Scalar>& a) {
  return Field<Scalar>(a.grid, c * a.values);
}

template <typename Scalar>
struct Spectrum {
  SpectralGrid<Scalar> grid;
  ComplexVector<Scalar> coeffs;

  Spectrum(const SpectralGrid<Scalar>& g, ComplexVector<Scalar> c) : grid(g), coeffs(std::move(c)) {
    if (coeffs.size() != grid.size()) throw std::invalid_argument("spectrum size does not match grid");
  }
};

namespace detail {

template <typename Scalar>
Eigen::FFT<Scalar>& fft_engine() {
  thread_local Eigen::FFT<Scalar> engine;
  return engine;
}

// e^{i L xi_k} = (-1)^k on this grid.
inline int centering_sign(Index k) { return (k % 2 == 0) ? 1 : -1; }

}  // namespace detail

// Continuous-transform approximation: coefficient k approximates
// the integral of e^{-i x xi_k} f(x) over the period.
template <typename Scalar>
Spectrum<Scalar> forward(const Field<Scalar>& f) {
  const auto& g = f.grid;
  const Index n = g.size();
  ComplexVector<Scalar> c(n);
  detail::fft_engine<Scalar>().fwd(c.data(), f.values.data(), n);
  const Scalar dx = g.dx();
  for (Index i = 0; i < n; ++i) c[i] *= dx * Scalar(detail::centering_sign(g.wavenumber(i)));
  return Spectrum<Scalar>(g, std::move(c));
}

// Exact discrete inverse of forward(); returns the real part.
template <typename Scalar>
Field<Scalar> inverse(const Spectrum<Scalar>& s) {
  const auto& g = s.grid;
  const Index n = g.size();
  ComplexVector<Scalar> c(n), out(n);
  const Scalar inv_dx = Scalar(1) / g.dx();
  for (Index i = 0; i < n; ++i) c[i] = s.coeffs[i] * (inv_dx * Scalar(detail::centering_sign(g.wavenumber(i))));
  detail::fft_engine<Scalar>().inv(out.data(), c.data(), n);
  Vector<Scalar> v = out.real();
  if (!v.allFinite()) throw NumericalFailure("inverse transform produced non-finite values");
  return Field<Scalar>(g, std::move(v));
}

// Evaluates a symbol on the grid frequencies.  With real_output the Nyquist
// entry keeps only its real part, so that real fields stay real.
template <typename Scalar, typename Symbol>
  requires std::is_invocable_r_v<std::complex<Scalar>, Symbol, Scalar>
ComplexVector<Scalar> multiplier_values(const SpectralGrid<Scalar>& g, Symbol&& symbol, bool real_output = true) {
  const Index n = g.size();
  ComplexVector<Scalar> mult(n);
  for (Index i = 0; i < n; ++i) {
    std::complex<Scalar> v = symbol(g.frequency(i));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NumericalFailure("multiplier is not finite at xi = " + std::to_string(double(g.frequency(i))));
    mult[i] = v;
  }
  if (real_output) mult[g.nyquist_index()] = mult[g.nyquist_index()].real();
  return mult;
}

template <typename Scalar>
Spectrum<Scalar> apply_multiplier(const Spectrum<Scalar>& s, const ComplexVector<Scalar>& mult) {
  if (mult.size() != s.coeffs.size()) throw std::invalid_argument("multiplier size does not match spectrum");
  return Spectrum<Scalar>(s.grid, s.coeffs.cwiseProduct(mult));
}

template <typename Scalar, typename Symbol>
  requires std::is_invocable_r_v<std::complex<Scalar>, Symbol, Scalar>
Spectrum<Scalar> apply_multiplier(const Spectrum<Scalar>& s, Symbol&& symbol, bool real_output = true) {
  return apply_multiplier(s, multiplier_values(s.grid, std::forward<Symbol>(symbol), real_output));
}

// Spectral derivative of the given order.
template <typename Scalar>
Field<Scalar> derivative(const Field<Scalar>& f, int order = 1) {
  if (order < 0) throw std::invalid_argument("derivative order must be non-negative");
  if (order == 0) return f;
  const std::complex<Scalar> I(0, 1);
  return inverse(apply_multiplier(forward(f), [&](Scalar xi) { return int_pow(I * xi, order); }));
}

// 2/3 rule: zero every mode with |k| >= n/3.
template <typename Scalar>
void dealias(Spectrum<Scalar>& s) {
  const Index n = s.grid.size();
  for (Index i = 0; i < n; ++i) {
    Index k = s.grid.wavenumber(i);
    if (3 * (k < 0 ? -k : k) >= n) s.coeffs[i] = 0;
  }
}

// Rectangle-rule L^p norm; p = infinity gives the grid maximum.
template <typename Scalar>
Scalar lp_norm(const Field<Scalar>& f, Scalar p) {
  if (std::isnan(p) || p < 1) throw std::invalid_argument("L^p norm needs p >= 1");
  if (std::isinf(p)) return f.values.cwiseAbs().maxCoeff();
  const Scalar dx = f.grid.dx();
  if (p == 1) return f.values.cwiseAbs().sum() * dx;
  if (p == 2) return std::sqrt(f.values.squaredNorm() * dx);
  return std::pow(f.values.cwiseAbs().array().pow(p).sum() * dx, Scalar(1) / p);
}

template <typename Scalar>
Scalar integral(const Field<Scalar>& f) {
  return f.values.sum() * f.grid.dx();
}

// L^2 norm computed on the frequency side, (1/2pi) sum |c|^2 dxi.
template <typename Scalar>
Scalar spectral_l2_norm(const Spectrum<Scalar>& s) {
  return std::sqrt(s.coeffs.squaredNorm() * s.grid.dxi() / (Scalar(2) * std::numbers::pi_v<Scalar>));
}

// Fraction of the L^1 mass sitting outside [-L/2, L/2].
template <typename Scalar>
Scalar tail_mass(const Field<Scalar>& f) {
  const Scalar half = f.grid.half_width() / 2;
  Scalar tail = 0, total = 0;
  for (Index i = 0; i < f.size(); ++i) {
    Scalar a = std::abs(f.values[i]);
    total += a;
    if (std::abs(f.grid.node(i)) > half) tail += a;
  }
  return total > 0 ? tail / total : Scalar(0);
}

template <typename Scalar>
bool tail_is_negligible(const Field<Scalar>& f, Scalar threshold = Scalar(1e-10)) {
  return tail_mass(f) <= threshold;
}

}  // namespace dispersive
