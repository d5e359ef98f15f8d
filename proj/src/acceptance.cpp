#include "dispersive/acceptance.hpp"

#include "dispersive/analysis.hpp"
#include "dispersive/csv.hpp"
#include "dispersive/data.hpp"
#include "dispersive/expansion.hpp"
#include "dispersive/kernels.hpp"
#include "dispersive/nonlinear.hpp"
#include "dispersive/random.hpp"
#include "dispersive/semigroups.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace dispersive {

namespace {

using Grid = SpectralGrid<double>;
using F = Field<double>;
using Phase = PhaseFunction<double>;
constexpr double inf = std::numeric_limits<double>::infinity();

const std::vector<std::string> names = {
    "kernel-l2-norms",       "kernel-lp-slopes",     "bessel-kernel-moments", "semigroup-mass-and-law",
    "heat-expansion-rates",  "integer-m-expansion",  "fractional-m-expansion", "kdv-expansion",
    "bessel-replacement",    "picard-vs-direct",     "nonlinear-decay",        "second-term-profiles",
    "convolution-inequalities", "determinism"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string pass_cell(bool ok) { return ok ? "PASS" : "FAIL"; }

CsvWriter open_csv(const AcceptanceContext& ctx, int id, std::vector<std::string> header) {
  char prefix[32];
  std::snprintf(prefix, sizeof prefix, "acceptance_%02d_", id);
  return CsvWriter(ctx.out_dir / (prefix + criterion_name(id) + ".csv"), ctx.provenance, std::move(header));
}

// Gaussian-family data used by the rate criteria; the offset centre keeps the fit
// windows clear of same-parity transients.
F rate_data(const Grid& g) {
  return F::sample(g, [](double x) { return std::exp(-(x - 1.25) * (x - 1.25) / (2 * 0.25 * 0.25)); });
}

double p_exponent(double m, double p) { return -(1 / m) * (1 - (std::isinf(p) ? 0 : 1 / p)); }

// Tracks the worst case of a family of checks for the one-line detail.
struct Worst {
  bool ok = true;
  double value = -inf;
  std::string where;
  int count = 0;
  int failures = 0;

  void add(bool pass, double v, const std::string& label) {
    ++count;
    if (!pass) ++failures;
    ok = ok && pass;
    if (v > value) {
      value = v;
      where = label;
    }
  }
};

CriterionResult finish(int id, bool ok, std::string detail) { return {id, criterion_name(id), ok, std::move(detail)}; }

CriterionResult kernel_l2_norms(const AcceptanceContext& ctx) {
  constexpr double tol = 1e-6;
  Grid g(4096, 200.0);
  auto csv = open_csv(ctx, 1, {"m", "j", "t", "grid_norm", "closed_form", "rel_error", "status"});
  Worst w;
  for (double m : {2.0, 2.5, 3.0, 4.0})
    for (int j : {0, 1, 2})
      for (double t : {0.5, 1.0, 2.0, 8.0}) {
        const double grid_norm = lp_norm(derivative_kernel(KernelSpec<double>{m, t, 0, 0, j}, g), 2.0);
        const double exact = kernel_l2_closed_form(m, j, t);
        const double rel = std::abs(grid_norm - exact) / exact;
        w.add(rel <= tol, rel, "m=" + num(m) + " j=" + std::to_string(j) + " t=" + num(t));
        csv.row({m, long(j), t, grid_norm, exact, rel, pass_cell(rel <= tol)});
      }
  return finish(1, w.ok, "max relative error " + num(w.value) + " at " + w.where + " (tol " + num(tol) + ")");
}

CriterionResult kernel_lp_slopes(const AcceptanceContext& ctx) {
  constexpr double tol = 0.02;
  Grid g(4096, 400.0);
  const auto times = log_spaced(1.0, 64.0, 12);
  auto csv = open_csv(ctx, 2, {"m", "j", "p", "slope", "expected", "rel_error", "status"});
  Worst w;
  for (double m : {2.0, 3.0})
    for (int j : {0, 1})
      for (double p : {1.0, 2.0, inf}) {
        std::vector<double> vals;
        for (double t : times) vals.push_back(lp_norm(derivative_kernel(KernelSpec<double>{m, t, 0, 0, j}, g), p));
        const double slope = fit_power_law(times, vals).exponent;
        const double expected = kernel_decay_exponent(m, j, p);
        // L^1 norm of G_m is constant in t; exponents are measured in units of 1/m there
        const double rel = std::abs(slope - expected) / std::max(std::abs(expected), 1 / m);
        w.add(rel <= tol, rel, "m=" + num(m) + " j=" + std::to_string(j) + " p=" + num(p));
        csv.row({m, long(j), p, slope, expected, rel, pass_cell(rel <= tol)});
      }
  return finish(2, w.ok, "max relative slope error " + num(w.value) + " at " + w.where + " (tol " + num(tol) + ")");
}

CriterionResult bessel_kernel_moments(const AcceptanceContext& ctx) {
  constexpr double moment_tol = 1e-9, pointwise_tol = 1e-6;
  Grid g(4096, 200.0);
  auto csv = open_csv(ctx, 3, {"check", "m", "j", "value", "error", "status"});
  Worst w;
  for (double m : {2.0, 2.5, 3.0, 4.0})
    for (int j : {1, 2, 3}) {
      const auto K = bessel_kernel(m, j, g);
      const double mass = integral(K), first = moment_integral(K, 1);
      const double e0 = std::abs(mass - 1), e1 = std::abs(first);
      w.add(e0 <= moment_tol, e0, "mass m=" + num(m) + " j=" + std::to_string(j));
      w.add(e1 <= moment_tol, e1, "first moment m=" + num(m) + " j=" + std::to_string(j));
      csv.row({std::string("mass"), m, long(j), mass, e0, pass_cell(e0 <= moment_tol)});
      csv.row({std::string("first_moment"), m, long(j), first, e1, pass_cell(e1 <= moment_tol)});
    }
  // K_2 against the periodized e^{-|x|}/2, skipping the cells next to the kink
  Grid fine(Index(1) << 19, 20.0);
  const auto K = bessel_kernel(2.0, 1, fine);
  const double L = fine.half_width();
  double err = 0;
  for (Index i = 0; i < fine.size(); ++i) {
    const double x = fine.node(i);
    if (std::abs(x) <= 1.5 * fine.dx()) continue;
    err = std::max(err, std::abs(K.values[i] - std::cosh(L - std::abs(x)) / (2 * std::sinh(L))));
  }
  const bool point_ok = err <= pointwise_tol;
  csv.row({std::string("k2_pointwise"), 2.0, 1L, err, err, pass_cell(point_ok)});
  const bool ok = w.ok && point_ok;
  return finish(3, ok, "worst moment error " + num(w.value) + " (" + w.where + ", tol " + num(moment_tol) +
                           "); K_2 pointwise error " + num(err) + " (tol " + num(pointwise_tol) + ")");
}

CriterionResult semigroup_mass_and_law(const AcceptanceContext& ctx) {
  constexpr double tol = 1e-10;
  PortableRng rng(ctx.seed);
  Grid g(512, 40.0);
  auto csv = open_csv(ctx, 4, {"trial", "phase", "m", "s", "t", "mass_rel_error", "law_rel_error", "status"});
  Worst w;
  for (int trial = 0; trial < 100; ++trial) {
    double c[3], wd[3], a[3];
    for (int k = 0; k < 3; ++k) {
      c[k] = rng.uniform(-5, 5);
      wd[k] = rng.uniform(0.5, 2.5);
      a[k] = rng.uniform(-1, 1);
    }
    const auto v0 = F::sample(g, [&](double x) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += a[k] * std::exp(-(x - c[k]) * (x - c[k]) / (2 * wd[k] * wd[k]));
      return s;
    });
    const double l1 = lp_norm(v0, 1.0), l2 = lp_norm(v0, 2.0);
    for (PhaseKind kind : {PhaseKind::heat, PhaseKind::bbm, PhaseKind::kdv}) {
      const Phase ph{kind, rng.uniform(2, 4)};
      const double s = rng.uniform(0, 3), t = rng.uniform(0.1, 5);
      const double mass_err = std::abs(integral(apply_semigroup(ph, t, v0)) - integral(v0)) / l1;
      const double law_err = semigroup_property_check(ph, s, t, v0) / l2;
      const bool ok = mass_err <= tol && law_err <= tol;
      w.add(ok, std::max(mass_err, law_err), "trial " + std::to_string(trial) + " " + to_string(kind));
      csv.row({long(trial), to_string(kind), ph.m, s, t, mass_err, law_err, pass_cell(ok)});
    }
  }
  return finish(4, w.ok, std::to_string(w.count) + " cases, worst relative error " + num(w.value) + " (" + w.where +
                             ", tol " + num(tol) + ")");
}

CriterionResult heat_expansion_rates(const AcceptanceContext& ctx) {
  constexpr double tol = 0.05;
  Grid g(4096, 200.0);
  const auto v0 = rate_data(g);
  const auto times = log_spaced(16.0, 256.0, 10);
  auto csv = open_csv(ctx, 5, {"m", "N", "p", "slope", "expected", "rel_error", "status"});
  Worst w;
  for (double m : {2.0, 3.0})
    for (int N : {0, 1, 2})
      for (double p : {2.0, inf}) {
        std::vector<double> r;
        for (double t : times)
          r.push_back(residual_norm(apply_semigroup(Phase{PhaseKind::heat, m}, t, v0), heat_expansion(v0, N, m, t), p));
        const double slope = fit_power_law(times, r).exponent;
        const double expected = p_exponent(m, p) - (N + 1) / m;
        const double rel = std::abs(slope - expected) / std::abs(expected);
        w.add(rel <= tol, rel, "m=" + num(m) + " N=" + std::to_string(N) + " p=" + num(p));
        csv.row({m, long(N), p, slope, expected, rel, pass_cell(rel <= tol)});
      }
  return finish(5, w.ok, "max relative slope error " + num(w.value) + " at " + w.where + " (tol " + num(tol) + ")");
}

// Scaled-residual slope for t^{1/2m + N/m} |S(t)v0 - expansion|_2 over [16, 256].
template <typename Expand>
double scaled_slope(const F& v0, double m, int N, Expand expand) {
  const auto times = log_spaced(16.0, 256.0, 10);
  std::vector<double> r;
  for (double t : times) {
    const auto exact = apply_semigroup(Phase{PhaseKind::bbm, m}, t, v0);
    r.push_back(std::pow(t, 1 / (2 * m) + N / m) * residual_norm(exact, expand(t), 2.0));
  }
  return fit_power_law(times, r).exponent;
}

CriterionResult integer_m_expansion(const AcceptanceContext& ctx) {
  constexpr double slack = 0.02;
  Grid g(4096, 200.0);
  const auto v0 = rate_data(g);
  auto csv = open_csv(ctx, 6, {"check", "m", "N", "value", "bound", "status"});
  bool ok = true;
  std::string detail;
  struct Case {
    double m;
    int N;
  };
  for (Case c : {Case{2, 0}, Case{2, 1}, Case{3, 0}, Case{3, 1}, Case{3, 2}}) {
    const double slope =
        scaled_slope(v0, c.m, c.N, [&](double t) { return linear_expansion_integer_m(v0, c.N, c.m, t).field; });
    const double bound = -(1 / c.m) * (1 - slack);
    const bool pass = slope <= bound;
    ok = ok && pass;
    detail += "m=" + num(c.m) + ",N=" + std::to_string(c.N) + ": " + num(slope) + " ";
    csv.row({std::string("scaled_slope"), c.m, long(c.N), slope, bound, pass_cell(pass)});
  }
  // m = 2, N = 2 term table collapsed to derivative orders
  const auto mv = moments(v0, 2);
  const double t = 3.0;
  const auto d = collapse_to_derivatives(bbm_integer_terms(mv, 2, 2.0, t));
  const std::map<int, double> expected = {{0, mv[0]}, {1, mv[1]},           {2, mv[2]},
                                          {3, -t * mv[0]}, {4, t * (mv[0] - mv[1])}, {6, t * t / 2 * mv[0]}};
  double table_err = d.size() == expected.size() ? 0.0 : inf;
  for (const auto& [order, coeff] : expected) {
    const auto it = d.find(order);
    const double got = it == d.end() ? inf : it->second;
    table_err = std::max(table_err, std::abs(got - coeff) / std::max(1.0, std::abs(coeff)));
  }
  const bool table_ok = table_err <= 1e-13;
  ok = ok && table_ok;
  csv.row({std::string("term_table_m2_N2"), 2.0, 2L, table_err, 1e-13, pass_cell(table_ok)});
  return finish(6, ok, "scaled slopes (bound -(1/m)(1-" + num(slack) + ")): " + detail + "; m=2 N=2 term table error " +
                           num(table_err));
}

CriterionResult fractional_m_expansion(const AcceptanceContext& ctx) {
  constexpr double slack = 0.02;
  const double m = 2.5;
  Grid g(4096, 200.0);
  const auto v0 = rate_data(g);
  const double slope = scaled_slope(v0, m, 1, [&](double t) { return linear_expansion_fractional_m(v0, m, t).field; });
  const double bound = -(1 / m) * (1 - slack);
  auto csv = open_csv(ctx, 7, {"m", "slope", "bound", "status"});
  csv.row({m, slope, bound, pass_cell(slope <= bound)});
  return finish(7, slope <= bound, "scaled slope " + num(slope) + " (bound " + num(bound) + ")");
}

CriterionResult kdv_expansion_rate(const AcceptanceContext& ctx) {
  constexpr double slack = 0.05;
  const double m = 2.0;
  Grid g(16384, 800.0);
  const auto u0 = rate_data(g);
  // The next-order correction is about 10/t relative, so the fit starts late.
  std::vector<double> times;
  for (int k = 0; k <= 24; ++k) times.push_back(16 * std::exp2(k / 4.0));  // window ends land on exact powers of 2
  auto csv = open_csv(ctx, 8, {"t", "residual", "scaled_residual"});
  std::vector<double> scaled;
  for (double t : times) {
    const double r = residual_norm(apply_semigroup(Phase{PhaseKind::kdv, m}, t, u0), kdv_expansion(u0, 2, m, t).field, 2.0);
    scaled.push_back(std::pow(t, 0.25 + 1) * r);
    csv.row({t, r, scaled.back()});
  }
  const double slope = fit_power_law(times, scaled, 256.0, 1024.0).exponent;
  double early = 0, late = 0;
  bool finite = true;
  for (std::size_t k = 0; k < times.size(); ++k) {
    finite = finite && std::isfinite(scaled[k]);
    double& sup = times[k] < 256.0 ? early : late;
    sup = std::max(sup, scaled[k]);
  }
  const double bound = -0.5 * (1 - slack);
  const bool bounded = finite && late <= early;
  const bool ok = bounded && slope <= bound;
  return finish(8, ok, "slope on [256,1024] " + num(slope) + " (bound " + num(bound) + "); sup scaled residual " +
                           num(early) + " on [16,256), " + num(late) + " on [256,1024]");
}

CriterionResult bessel_replacement(const AcceptanceContext& ctx) {
  constexpr double tol = 0.05;
  Grid g(4096, 400.0);
  const auto times = log_spaced(64.0, 256.0, 10);
  auto csv = open_csv(ctx, 9, {"m", "j", "slope", "expected", "rel_error", "status"});
  Worst w;
  for (double m : {2.0, 3.0})
    for (int j : {1, 2, 3}) {
      std::vector<double> r;
      for (double t : times) {
        const auto G = heat_kernel(m, t, g);
        const auto GK = inverse(apply_multiplier(forward(G), bessel_symbol(m, j)));
        r.push_back(lp_norm(GK - G, 2.0));
      }
      const double slope = fit_power_law(times, r).exponent;
      const double expected = -1 / m - 1 / (2 * m);
      const double rel = std::abs(slope - expected) / std::abs(expected);
      w.add(rel <= tol, rel, "m=" + num(m) + " j=" + std::to_string(j) + " slope " + num(slope));
      csv.row({m, long(j), slope, expected, rel, pass_cell(rel <= tol)});
    }
  return finish(9, w.ok, "max relative deviation from -3/(2m): " + num(w.value) + " at " + w.where + " (tol " +
                             num(tol) + ")");
}

NonlinearProblem<double> small_problem(const Grid& g, DataFamily family, double m, double q, double T, double step) {
  DataDescriptor<double> d;
  d.family = family;
  if (family == DataFamily::shifted_gaussian) {
    d.center = 1.25;
    d.width = 0.25;
  }
  d.smallness = 0.1;
  NonlinearProblem<double> p(make_initial_data(d, g, m));
  p.m = m;
  p.q = q;
  p.T_final = T;
  p.dt = 0.01;
  const long n = std::lround(T / step);
  for (long k = 1; k <= n; ++k) p.sample_times.push_back(double(k) * step);
  return p;
}

CriterionResult picard_vs_direct(const AcceptanceContext& ctx) {
  constexpr double diff_tol = 1e-4, factor_tol = 0.5;
  Grid g(1024, 64.0);
  const auto p = small_problem(g, DataFamily::gaussian, 3.0, 4.0, 8.0, 0.1);
  const auto direct = direct_solve(p);
  const auto pic = picard_solve(p, 800, 50, 1e-13);
  auto csv = open_csv(ctx, 10, {"t", "direct_l2", "picard_l2", "l2_difference"});
  double diff = 0;
  for (std::size_t k = 0; k < direct.size(); ++k) {
    const double d = lp_norm(direct.field(k) - pic.trajectory.field(k), 2.0);
    diff = std::max(diff, d);
    csv.row({direct.time(k), direct.norms()[k].l2, pic.trajectory.norms()[k].l2, d});
  }
  double worst_factor = 0;
  for (double f : pic.contraction_factors) worst_factor = std::max(worst_factor, f);
  const bool ok = diff <= diff_tol && worst_factor < factor_tol;
  return finish(10, ok, "sup-t L2 difference " + num(diff) + " (tol " + num(diff_tol) + "); " +
                            std::to_string(pic.iterations) + " Picard iterations, max contraction factor " +
                            num(worst_factor) + " (bound " + num(factor_tol) + ")");
}

CriterionResult nonlinear_decay(const AcceptanceContext& ctx) {
  constexpr double tol = 0.10;
  Grid g(2048, 128.0);
  auto csv = open_csv(ctx, 11, {"m", "q", "norm", "slope", "expected", "rel_error", "status"});
  Worst w;
  for (auto [m, q] : {std::pair{3.0, 4.0}, std::pair{2.5, 4.0}}) {
    const auto traj = direct_solve(small_problem(g, DataFamily::shifted_gaussian, m, q, 128.0, 1.0));
    const auto fits = decay_check(traj, 16.0, 128.0);
    const std::pair<const char*, std::pair<double, double>> rows[] = {
        {"l2", {fits.l2.exponent, -1 / (2 * m)}},
        {"dx_l2", {fits.dx_l2.exponent, -1 / (2 * m) - 1 / m}},
        {"linf", {fits.linf.exponent, -1 / m}}};
    for (const auto& [name, sv] : rows) {
      const double rel = std::abs(sv.first - sv.second) / std::abs(sv.second);
      w.add(rel <= tol, rel, std::string(name) + " m=" + num(m));
      csv.row({m, q, std::string(name), sv.first, sv.second, rel, pass_cell(rel <= tol)});
    }
  }
  return finish(11, w.ok, "max relative slope error " + num(w.value) + " at " + w.where + " (tol " + num(tol) + ")");
}

CriterionResult second_term_profiles(const AcceptanceContext& ctx) {
  constexpr double constant_tol = 1e-6;
  const double m = 3.0, q = 5.0;
  Grid g(2048, 128.0);
  const auto p = small_problem(g, DataFamily::shifted_gaussian, m, q, 128.0, 0.05);
  const auto traj = direct_solve(p);
  const auto coef = supercritical_coefficient(traj, q, p.variant);
  auto csv = open_csv(ctx, 12, {"t", "scaled_without", "scaled_with", "coefficient"});
  const std::vector<double> checkpoints = {16, 24, 32, 48, 64, 96, 128};
  std::vector<double> with, without;
  std::size_t k = 0;
  for (double t : checkpoints) {
    while (std::abs(traj.time(k) - t) > 1e-9) ++k;
    const auto diff = traj.field(k) - apply_semigroup(p.phase(), t, p.v0);
    const auto profile = second_term_profile(p, SecondTermCase::supercritical, t, &traj);
    const double s = std::pow(t, 1 / (2 * m) + 1 / m);
    without.push_back(s * lp_norm(diff, 2.0));
    with.push_back(s * lp_norm(diff + profile, 2.0));
    csv.row({t, without.back(), with.back(), coef.value});
  }
  bool reduces = true, decreasing = true;
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] == 64 || checkpoints[i] == 128) reduces = reduces && with[i] < without[i];
    if (i > 0) decreasing = decreasing && with[i] < with[i - 1];
  }
  const double M = 0.8;
  const double numeric = critical_constant(2.0, 3.0, PowerVariant::signed_power, M);
  const double exact = M * M * M / (4 * std::numbers::pi * std::sqrt(3.0));
  const double rel = std::abs(numeric - exact) / exact;
  const bool constant_ok = rel <= constant_tol;
  const bool ok = reduces && decreasing && constant_ok;
  return finish(12, ok, std::string("correction reduces residual at t=64,128: ") + (reduces ? "yes" : "no") +
                            "; corrected residual decreasing on [16,128]: " + (decreasing ? "yes" : "no") + " (" +
                            num(with.front()) + " -> " + num(with.back()) + ", uncorrected " + num(without.back()) +
                            "); relative tail " + num(coef.relative_tail) + "; critical constant error " + num(rel) +
                            " (tol " + num(constant_tol) + ")");
}

CriterionResult convolution_inequalities(const AcceptanceContext& ctx) {
  PortableRng rng(ctx.seed + 13);
  const auto times = log_spaced(1.0, 1.0e4, 41);
  auto csv = open_csv(ctx, 13, {"class", "draw", "a", "b", "max_ratio", "final_ratio", "non_increasing_after_10",
                                "increments_shrinking"});
  int draws = 0, monotone = 0, shrinking = 0;
  bool finite = true;
  double worst = 0;
  for (InequalityClass kind : {InequalityClass::decay_product, InequalityClass::sub_critical,
                                InequalityClass::super_critical, InequalityClass::logarithmic}) {
    for (int k = 0; k < 20; ++k) {
      double a = 0, b = 0;
      switch (kind) {
        case InequalityClass::decay_product: {
          const double big = rng.uniform(1.2, 3.0), small = rng.uniform(0.1, 3.0);
          const bool swap = rng.uniform() < 0.5;
          a = swap ? small : big;
          b = swap ? big : small;
          break;
        }
        case InequalityClass::sub_critical:
          a = rng.uniform(-0.95, 0.0);
          b = rng.uniform(-0.95, 0.0);
          break;
        case InequalityClass::super_critical:
          a = rng.uniform(-0.95, 0.0);
          b = rng.uniform(-3.0, -1.05);
          break;
        case InequalityClass::logarithmic:
          a = rng.uniform(-0.95, 0.0);
          b = -1.0;
          break;
      }
      const auto rep = check_convolution_inequality(a, b, times);
      const bool mono = rep.non_increasing_after(10.0);
      const bool shrink = rep.increments_shrinking();
      ++draws;
      monotone += mono;
      shrinking += shrink;
      finite = finite && rep.all_finite();
      worst = std::max(worst, rep.max_ratio());
      csv.row({to_string(rep.kind), long(k), a, b, rep.max_ratio(), rep.ratio.back(), pass_cell(mono), pass_cell(shrink)});
    }
  }
  const bool ok = finite && monotone == draws;
  return finish(13, ok, std::string("all ratios finite: ") + (finite ? "yes" : "no") + "; non-increasing beyond t=10 in " +
                            std::to_string(monotone) + "/" + std::to_string(draws) +
                            " draws; bounded (max ratio " + num(worst) + ", increments shrinking in " +
                            std::to_string(shrinking) + "/" + std::to_string(draws) + ")");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

CriterionResult determinism(const AcceptanceContext& ctx) {
  std::vector<int> ids;
  for (int i = 1; i < acceptance_count; ++i) ids.push_back(i);
  const auto base = ctx.out_dir / "determinism";
  std::filesystem::path dirs[2] = {base / "run_a", base / "run_b"};
  for (const auto& d : dirs) {
    std::filesystem::remove_all(d);
    AcceptanceContext sub = ctx;
    sub.out_dir = d;
    write_summary(run_criteria(ids, sub), d / "acceptance_summary.csv", ctx.provenance);
  }
  auto csv = open_csv(ctx, 14, {"file", "bytes", "identical"});
  int files = 0, same = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dirs[0])) {
    const auto name = entry.path().filename();
    const std::string a = slurp(entry.path());
    const bool exists = std::filesystem::exists(dirs[1] / name);
    const bool eq = exists && a == slurp(dirs[1] / name);
    ++files;
    same += eq;
    csv.row({name.string(), long(a.size()), pass_cell(eq)});
  }
  int other = 0;
  for ([[maybe_unused]] const auto& entry : std::filesystem::directory_iterator(dirs[1])) ++other;
  const bool ok = files > 0 && same == files && other == files;
  return finish(14, ok, std::to_string(same) + "/" + std::to_string(files) + " CSV files byte-identical across two runs");
}

}  // namespace

const std::string& criterion_name(int id) {
  if (id < 1 || id > acceptance_count) throw std::invalid_argument("unknown acceptance criterion " + std::to_string(id));
  return names[std::size_t(id - 1)];
}

CriterionResult run_criterion(int id, const AcceptanceContext& ctx) {
  std::filesystem::create_directories(ctx.out_dir);
  switch (id) {
    case 1: return kernel_l2_norms(ctx);
    case 2: return kernel_lp_slopes(ctx);
    case 3: return bessel_kernel_moments(ctx);
    case 4: return semigroup_mass_and_law(ctx);
    case 5: return heat_expansion_rates(ctx);
    case 6: return integer_m_expansion(ctx);
    case 7: return fractional_m_expansion(ctx);
    case 8: return kdv_expansion_rate(ctx);
    case 9: return bessel_replacement(ctx);
    case 10: return picard_vs_direct(ctx);
    case 11: return nonlinear_decay(ctx);
    case 12: return second_term_profiles(ctx);
    case 13: return convolution_inequalities(ctx);
    case 14: return determinism(ctx);
  }
  throw std::invalid_argument("unknown acceptance criterion " + std::to_string(id));
}

std::vector<CriterionResult> run_criteria(const std::vector<int>& ids, const AcceptanceContext& ctx) {
  std::vector<CriterionResult> out;
  for (int id : ids) {
    try {
      out.push_back(run_criterion(id, ctx));
    } catch (const std::exception& e) {
      // A criterion that cannot complete counts as failed; the error is its detail.
      out.push_back({id, criterion_name(id), false, std::string("error: ") + e.what()});
    }
  }
  return out;
}

std::vector<int> parse_criteria(const std::string& spec) {
  std::vector<int> ids;
  if (spec == "all") {
    for (int i = 1; i <= acceptance_count; ++i) ids.push_back(i);
    return ids;
  }
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    int id = 0;
    try {
      id = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || id < 1 || id > acceptance_count)
      throw std::invalid_argument("criteria list entry '" + item + "' is not an id between 1 and " +
                                  std::to_string(acceptance_count));
    ids.push_back(id);
  }
  if (ids.empty()) throw std::invalid_argument("empty criteria list");
  return ids;
}

void write_summary(const std::vector<CriterionResult>& results, const std::filesystem::path& path,
                   const std::string& provenance) {
  CsvWriter csv(path, provenance, {"id", "name", "status", "detail"});
  for (const auto& r : results) {
    std::string detail = r.detail;
    for (char& c : detail)
      if (c == ',') c = ';';
    csv.row({long(r.id), r.name, pass_cell(r.passed), detail});
  }
}

std::string format_result(const CriterionResult& r) {
  return std::string(r.passed ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.name + ": " + r.detail;
}

}  // namespace dispersive
