#include "dispersive/tasks.hpp"

#include "dispersive/acceptance.hpp"
#include "dispersive/analysis.hpp"
#include "dispersive/csv.hpp"
#include "dispersive/data.hpp"
#include "dispersive/expansion.hpp"
#include "dispersive/kernels.hpp"
#include "dispersive/nonlinear.hpp"
#include "dispersive/semigroups.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <memory>
#include <sstream>

namespace dispersive {

namespace {

using Grid = SpectralGrid<double>;
using F = Field<double>;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

Grid grid_of(const RunConfig& cfg) { return Grid(cfg.get_int("grid.n"), cfg.get_real("grid.L")); }

F data_of(const RunConfig& cfg, const Grid& g) {
  DataDescriptor<double> d;
  d.family = parse_data_family(cfg.get_text("data.family"));
  d.amplitude = cfg.get_real("data.amplitude");
  d.width = cfg.get_real("data.width");
  d.center = cfg.get_real("data.center");
  d.skew = cfg.get_real("data.skew");
  d.kernel_power = int(cfg.get_int("data.kernel_power"));
  d.path = cfg.get_text("data.path");
  d.smallness = cfg.get_real("data.smallness");
  return make_initial_data(d, g, cfg.get_real("model.m"));
}

std::string column_label(const std::string& prefix, double t) {
  std::ostringstream s;
  s.precision(17);
  s << prefix << t;
  return s.str();
}

// Writes x followed by one column per field.
std::filesystem::path write_fields(const std::filesystem::path& path, const std::string& prov,
                                   const std::vector<double>& times, const std::vector<F>& fields) {
  std::vector<std::string> header{"x"};
  for (double t : times) header.push_back(column_label("t=", t));
  CsvWriter csv(path, prov, header);
  const Grid& g = fields.front().grid;
  // natural spatial order: FFT storage already runs from -L upward
  for (Index i = 0; i < g.size(); ++i) {
    std::vector<CsvCell> row{g.node(i)};
    for (const auto& f : fields) row.push_back(f.values[i]);
    csv.row(row);
  }
  return path;
}

NonlinearProblem<double> problem_of(const RunConfig& cfg, const Grid& g) {
  NonlinearProblem<double> p(data_of(cfg, g));
  p.m = cfg.get_real("model.m");
  p.q = cfg.get_real("model.q");
  p.variant = parse_power_variant(cfg.get_text("model.variant"));
  p.coefficient = cfg.get_real("model.coefficient");
  p.T_final = cfg.get_real("time.T");
  p.dt = cfg.get_real("time.dt");
  const double step = cfg.get_real("time.sample_step");
  const long n = std::lround(p.T_final / step);
  if (std::abs(double(n) * step - p.T_final) > 1e-9 * p.T_final)
    throw std::invalid_argument("time.T must be a multiple of time.sample_step");
  for (long k = 1; k <= n; ++k) p.sample_times.push_back(double(k) * step);
  p.validate();
  return p;
}

std::size_t sample_index(const Trajectory<double>& traj, double t) {
  for (std::size_t k = 0; k < traj.size(); ++k)
    if (std::abs(traj.time(k) - t) <= 1e-9 * std::max(1.0, t)) return k;
  throw std::invalid_argument("time " + std::to_string(t) + " is not a recorded sample; use multiples of time.sample_step");
}

TaskOutcome kernel_task(const RunConfig& cfg, const std::filesystem::path& dir, std::ostream&) {
  const Grid g = grid_of(cfg);
  const double m = cfg.get_real("model.m");
  const int j = int(cfg.get_int("task.j"));
  const std::string prov = provenance_line(cfg, "kernel");
  TaskOutcome out;
  std::vector<double> times;
  std::vector<F> fields;
  CsvWriter norms(dir / "kernel_norms.csv", prov, {"t", "j", "l1", "l2", "linf", "l2_closed_form", "l2_rel_error"});
  for (double t : cfg.get_real_list("time.t_list")) {
    auto k = derivative_kernel(KernelSpec<double>{m, t, 0, 0, j}, g);
    const double l2 = lp_norm(k, 2.0), exact = kernel_l2_closed_form(m, j, t);
    norms.row({t, long(j), lp_norm(k, 1.0), l2, lp_norm(k, std::numeric_limits<double>::infinity()), exact,
               std::abs(l2 - exact) / exact});
    times.push_back(t);
    fields.push_back(std::move(k));
  }
  out.files.push_back(norms.path());
  out.files.push_back(write_fields(dir / "kernel_samples.csv", prov, times, fields));
  return out;
}

TaskOutcome solve_linear_task(const RunConfig& cfg, const std::filesystem::path& dir, std::ostream&) {
  const Grid g = grid_of(cfg);
  const PhaseFunction<double> phase{parse_phase_kind(cfg.get_text("model.phase")), cfg.get_real("model.m")};
  const F v0 = data_of(cfg, g);
  const std::string prov = provenance_line(cfg, "solve-linear");
  TaskOutcome out;
  CsvWriter csv(dir / "linear_norms.csv", prov, {"t", "l1", "l2", "linf", "dx_l2", "mass"});
  std::vector<double> times;
  std::vector<F> fields;
  for (double t : cfg.get_real_list("time.t_list")) {
    auto v = apply_semigroup(phase, t, v0);
    const auto n = sample_norms(v);
    csv.row({t, lp_norm(v, 1.0), n.l2, n.linf, n.dx_l2, n.mass});
    times.push_back(t);
    fields.push_back(std::move(v));
  }
  out.files.push_back(csv.path());
  if (cfg.get_bool("output.dump_fields")) out.files.push_back(write_fields(dir / "linear_fields.csv", prov, times, fields));
  return out;
}

TaskOutcome expand_task(const RunConfig& cfg, const std::filesystem::path& dir, std::ostream&) {
  const Grid g = grid_of(cfg);
  const double m = cfg.get_real("model.m");
  const int N = int(cfg.get_int("task.N"));
  const std::string which = cfg.get_text("task.expansion");
  const F v0 = data_of(cfg, g);
  const std::string prov = provenance_line(cfg, "expand");

  PhaseKind kind = PhaseKind::bbm;
  if (which == "heat") kind = PhaseKind::heat;
  else if (which == "kdv") kind = PhaseKind::kdv;
  else if (which != "bbm-int" && which != "bbm-frac" && which != "bbm-prelim")
    throw ConfigError("task.expansion must be heat, bbm-int, bbm-frac, kdv or bbm-prelim, got '" + which + "'");
  const PhaseFunction<double> phase{kind, m};

  auto expansion = [&](double t) -> ExpansionResult<double> {
    if (which == "heat") {
      const auto mv = moments(v0, N);
      auto terms = heat_terms(mv, N, m, t);
      auto f = evaluate(terms, g);
      return {std::move(f), std::move(terms)};
    }
    if (which == "bbm-int") return linear_expansion_integer_m(v0, N, m, t);
    if (which == "bbm-frac") return linear_expansion_fractional_m(v0, m, t);
    if (which == "kdv") return kdv_expansion(v0, N, m, t);
    return preliminary_expansion_with_K(v0, N, m, t);
  };
  const bool collapsible = m == std::floor(m) && int(m) % 2 == 0 && which != "bbm-prelim";

  TaskOutcome out;
  CsvWriter res(dir / "expand_residuals.csv", prov, {"t", "p", "residual", "expansion_norm"});
  CsvWriter terms(dir / "expand_terms.csv", prov,
                  {"t", "r", "j", "alpha", "bessel_power", "coefficient", "derivative_order", "sign"});
  std::unique_ptr<CsvWriter> derivs;
  if (collapsible) derivs = std::make_unique<CsvWriter>(dir / "expand_derivatives.csv", prov,
                                                        std::vector<std::string>{"t", "derivative_order", "coefficient"});
  for (double t : cfg.get_real_list("time.t_list")) {
    if (!(t > 0)) throw std::invalid_argument("expansion times must be positive");
    const auto e = expansion(t);
    const auto exact = apply_semigroup(phase, t, v0);
    for (double p : cfg.get_real_list("task.p_list")) res.row({t, p, residual_norm(exact, e.field, p), lp_norm(e.field, p)});
    for (const auto& term : e.terms) {
      std::vector<CsvCell> row{t, long(term.spec.r), long(term.spec.j), long(term.spec.alpha), long(term.bessel_power),
                               term.coefficient};
      if (collapsible) {
        const int mi = int(m);
        row.push_back(long((mi + 1) * term.spec.r + 2 * mi * term.spec.j + term.spec.alpha));
        row.push_back(long(((mi / 2) * term.spec.r) % 2 == 0 ? 1 : -1));
      } else {
        row.push_back(std::string());
        row.push_back(std::string());
      }
      terms.row(row);
    }
    if (derivs)
      for (const auto& [order, coeff] : collapse_to_derivatives(e.terms)) derivs->row({t, long(order), coeff});
  }
  out.files = {res.path(), terms.path()};
  if (derivs) out.files.push_back(derivs->path());
  return out;
}

TaskOutcome solve_nonlinear_task(const RunConfig& cfg, const std::filesystem::path& dir, std::ostream& log) {
  const Grid g = grid_of(cfg);
  const auto prob = problem_of(cfg, g);
  const std::string method = cfg.get_text("task.method");
  if (method != "direct" && method != "picard" && method != "both")
    throw ConfigError("task.method must be direct, picard or both, got '" + method + "'");
  const std::string prov = provenance_line(cfg, "solve-nonlinear");
  TaskOutcome out;

  std::vector<std::pair<std::string, Trajectory<double>>> runs;
  if (method != "picard") runs.emplace_back("direct", direct_solve(prob));
  if (method != "direct") {
    const auto pic = picard_solve(prob, Index(cfg.get_int("task.picard_steps")), int(cfg.get_int("task.picard_max_iter")),
                                  cfg.get_real("task.picard_tol"));
    CsvWriter it(dir / "picard_iterations.csv", prov,
                 {"iteration", "l2_increment", "weighted_increment", "contraction_factor"});
    for (std::size_t k = 0; k < pic.increments.size(); ++k)
      it.row({long(k + 1), pic.increments[k], pic.weighted_increments[k],
              k == 0 ? nan : pic.contraction_factors[k - 1]});
    out.files.push_back(it.path());
    runs.emplace_back("picard", pic.trajectory);
  }

  CsvWriter norms(dir / "nonlinear_norms.csv", prov, {"method", "t", "l2", "linf", "dx_l2", "mass"});
  CsvWriter fits(dir / "nonlinear_decay.csv", prov, {"method", "norm", "exponent", "prefactor", "t_min", "t_max", "n_samples"});
  for (const auto& [name, traj] : runs) {
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const auto& n = traj.norms()[k];
      norms.row({name, traj.time(k), n.l2, n.linf, n.dx_l2, n.mass});
    }
    try {
      const auto d = decay_check(traj);
      for (const auto& [label, f] : {std::pair{"l2", d.l2}, std::pair{"dx_l2", d.dx_l2}, std::pair{"linf", d.linf}})
        fits.row({name, std::string(label), f.exponent, f.prefactor, f.t_min, f.t_max, long(f.n_samples)});
    } catch (const std::invalid_argument& e) {
      log << "note: no decay fit for " << name << ": " << e.what() << "\n";
    }
  }
  out.files.push_back(norms.path());
  out.files.push_back(fits.path());
  if (runs.size() == 2) {
    CsvWriter diff(dir / "nonlinear_difference.csv", prov, {"t", "l2_difference"});
    const auto& a = runs[0].second;
    const auto& b = runs[1].second;
    for (std::size_t k = 0; k < a.size(); ++k) diff.row({a.time(k), lp_norm(a.field(k) - b.field(k), 2.0)});
    out.files.push_back(diff.path());
  }
  if (cfg.get_bool("output.dump_fields"))
    out.files.push_back(write_fields(dir / "nonlinear_fields.csv", prov, runs.front().second.times(), runs.front().second.fields()));
  return out;
}

TaskOutcome second_term_task(const RunConfig& cfg, const std::filesystem::path& dir, std::ostream&) {
  const Grid g = grid_of(cfg);
  const auto prob = problem_of(cfg, g);
  const std::string which = cfg.get_text("task.case");
  const SecondTermCase c = which == "auto" ? classify_second_term(prob.m, prob.q) : parse_second_term_case(which);
  const auto traj = direct_solve(prob);
  const std::string prov = provenance_line(cfg, "second-term");
  CsvWriter csv(dir / "second_term.csv", prov, {"case", "t", "p", "scaled_without", "scaled_with", "profile_norm"});
  for (double t : cfg.get_real_list("time.t_list")) {
    if (!(t > 0)) throw std::invalid_argument("second-term times must be positive");
    const auto k = sample_index(traj, t);
    const auto diff = traj.field(k) - apply_semigroup(prob.phase(), t, prob.v0);
    const auto profile = second_term_profile(prob, c, t, &traj);
    for (double p : cfg.get_real_list("task.p_list")) {
      const double s = std::pow(t, (1 - (std::isinf(p) ? 0 : 1 / p)) / prob.m + 1 / prob.m);
      csv.row({to_string(c), t, p, s * lp_norm(diff, p), s * lp_norm(diff + profile, p), lp_norm(profile, p)});
    }
  }
  return {{csv.path()}, true};
}

TaskOutcome fit_task(const RunConfig& cfg, const std::filesystem::path& dir, std::ostream&) {
  const std::string input = cfg.get_text("task.fit_input");
  if (input.empty()) throw ConfigError("fit needs task.fit_input");
  const auto table = read_csv(input);
  const auto t = table.numeric_column(cfg.get_text("task.fit_time_column"));
  double lo = cfg.get_real("task.fit_t_lo"), hi = cfg.get_real("task.fit_t_hi");
  if (lo == 0) lo = -std::numeric_limits<double>::infinity();
  if (hi == 0) hi = std::numeric_limits<double>::infinity();
  std::vector<std::vector<CsvCell>> rows;
  std::istringstream cols(cfg.get_text("task.fit_columns"));
  std::string col;
  while (std::getline(cols, col, ',')) {
    const auto f = fit_power_law(t, table.numeric_column(col), lo, hi);
    rows.push_back({col, f.exponent, f.prefactor, f.fit_residual, f.t_min, f.t_max, long(f.n_samples)});
  }
  CsvWriter csv(dir / "fit.csv", provenance_line(cfg, "fit"),
                {"column", "exponent", "prefactor", "fit_residual", "t_min", "t_max", "n_samples"});
  for (const auto& r : rows) csv.row(r);
  return {{csv.path()}, true};
}

TaskOutcome check_ineq_task(const RunConfig& cfg, const std::filesystem::path& dir, std::ostream&) {
  const auto rep = check_convolution_inequality(cfg.get_real("task.ineq_a"), cfg.get_real("task.ineq_b"),
                                                cfg.get_real_list("time.t_list"));
  CsvWriter csv(dir / "inequality.csv", provenance_line(cfg, "check-ineq"), {"class", "a", "b", "t", "lhs", "rhs", "ratio"});
  for (std::size_t k = 0; k < rep.times.size(); ++k)
    csv.row({to_string(rep.kind), rep.a, rep.b, rep.times[k], rep.lhs[k], rep.rhs[k], rep.ratio[k]});
  return {{csv.path()}, true};
}

TaskOutcome verify_all_task(const RunConfig& cfg, const std::filesystem::path& dir, std::ostream& log) {
  AcceptanceContext ctx;
  ctx.out_dir = dir;
  ctx.seed = std::uint64_t(cfg.get_int("task.seed"));
  ctx.provenance = provenance_line(cfg, "verify-all");
  TaskOutcome out;
  std::vector<CriterionResult> results;
  for (int id : parse_criteria(cfg.get_text("task.criteria"))) {
    results.push_back(run_criteria({id}, ctx).front());
    log << format_result(results.back()) << std::endl;
    out.all_criteria_passed = out.all_criteria_passed && results.back().passed;
  }
  write_summary(results, dir / "acceptance_summary.csv", ctx.provenance);
  out.files.push_back(dir / "acceptance_summary.csv");
  return out;
}

}  // namespace

const std::vector<std::string>& task_names() {
  static const std::vector<std::string> names = {"kernel", "solve-linear", "solve-nonlinear", "expand",
                                                 "second-term", "fit", "check-ineq", "verify-all"};
  return names;
}

std::filesystem::path output_dir(const RunConfig& cfg) {
  const char* env = std::getenv("DISPERSIVE_OUTPUT_DIR");
  if (env != nullptr && *env != '\0') return env;
  return cfg.get_text("output.dir");
}

TaskOutcome run_task(const std::string& task, const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const auto dir = output_dir(cfg);
  std::filesystem::create_directories(dir);
  TaskOutcome out;
  if (task == "kernel") out = kernel_task(cfg, dir, log);
  else if (task == "solve-linear") out = solve_linear_task(cfg, dir, log);
  else if (task == "solve-nonlinear") out = solve_nonlinear_task(cfg, dir, log);
  else if (task == "expand") out = expand_task(cfg, dir, log);
  else if (task == "second-term") out = second_term_task(cfg, dir, log);
  else if (task == "fit") out = fit_task(cfg, dir, log);
  else if (task == "check-ineq") out = check_ineq_task(cfg, dir, log);
  else if (task == "verify-all") out = verify_all_task(cfg, dir, log);
  else throw ConfigError("unknown task '" + task + "'");
  for (const auto& f : out.files) log << "wrote " << f.string() << "\n";
  return out;
}

}  // namespace dispersive
