#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace dispersive {

template <typename Scalar>
struct QuadratureResult {
  Scalar value = 0;
  Scalar error = 0;
  int evaluations = 0;
  bool converged = false;
};

namespace detail {

// 15-point Kronrod nodes on [-1, 1] (non-negative half) with the embedded 7-point Gauss rule.
inline constexpr std::array<double, 8> gk15_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> gk15_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> g7_weights = {0.129484966168869693270611432679082,
                                                     0.279705391489276667901467771423780,
                                                     0.381830050505118944950369775488975,
                                                     0.417959183673469387755102040816327};

template <typename Scalar>
struct Panel {
  Scalar a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <typename Scalar, typename F>
Panel<Scalar> gk15(F& f, Scalar a, Scalar b) {
  const Scalar c = (a + b) / 2, h = (b - a) / 2;
  const Scalar fc = f(c);
  Scalar kron = fc * Scalar(gk15_weights[7]);
  Scalar gauss = fc * Scalar(g7_weights[3]);
  for (int i = 0; i < 7; ++i) {
    const Scalar dx = h * Scalar(gk15_nodes[i]);
    const Scalar s = f(c - dx) + f(c + dx);
    kron += Scalar(gk15_weights[i]) * s;
    if (i % 2 == 1) gauss += Scalar(g7_weights[i / 2]) * s;
  }
  return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod 7/15: bisects the panel with the largest
// error estimate until the total estimate meets max(abs_tol, rel_tol*|I|).
// Optional interior breakpoints seed the initial partition.
template <typename Scalar, typename F>
QuadratureResult<Scalar> integrate(F f, Scalar a, Scalar b, Scalar rel_tol = Scalar(1e-10), Scalar abs_tol = Scalar(0),
                                   const std::vector<Scalar>& breakpoints = {}, int max_panels = 20000) {
  QuadratureResult<Scalar> res;
  if (a == b) {
    res.converged = true;
    return res;
  }
  if (!(b > a)) throw std::invalid_argument("integration bounds must satisfy a <= b");
  std::vector<Scalar> cuts{a};
  for (Scalar p : breakpoints)
    if (p > a && p < b) cuts.push_back(p);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());

  std::priority_queue<detail::Panel<Scalar>> heap;
  Scalar total = 0, err = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    auto p = detail::gk15(f, cuts[i], cuts[i + 1]);
    res.evaluations += 15;
    total += p.value;
    err += p.error;
    heap.push(p);
  }
  while (err > std::max(abs_tol, rel_tol * std::abs(total)) && int(heap.size()) < max_panels) {
    auto worst = heap.top();
    heap.pop();
    const Scalar mid = (worst.a + worst.b) / 2;
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(worst);
      break;
    }
    auto left = detail::gk15(f, worst.a, mid);
    auto right = detail::gk15(f, mid, worst.b);
    res.evaluations += 30;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum from the panels to shed accumulated cancellation in the running totals.
  total = 0;
  err = 0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  res.value = total;
  res.error = err;
  res.converged = err <= std::max(abs_tol, rel_tol * std::abs(total));
  if (!std::isfinite(total)) throw std::domain_error("quadrature produced a non-finite value");
  return res;
}

}  // namespace dispersive
