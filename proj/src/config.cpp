#include "dispersive/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace dispersive {

const std::vector<KeyDescriptor>& config_keys() {
  using K = KeyKind;
  static const std::vector<KeyDescriptor> keys = {
      {"grid", "n", K::integer, "4096", "number of grid points (power of two, at least 16)"},
      {"grid", "L", K::real, "200", "half-width of the periodic domain [-L, L)"},

      {"model", "m", K::real, "3", "order of the multiplier |xi|^m"},
      {"model", "q", K::real, "4", "power of the nonlinearity"},
      {"model", "variant", K::text, "signed", "abs (|v|^q) or signed (|v|^{q-1} v)"},
      {"model", "phase", K::text, "bbm", "linear flow: heat, bbm or kdv"},
      {"model", "coefficient", K::real, "1", "factor in front of the nonlinear term"},

      {"data", "family", K::text, "gaussian", "gaussian, shifted-gaussian, skew, kernel-K or file"},
      {"data", "amplitude", K::real, "1", "peak amplitude before any smallness rescaling"},
      {"data", "width", K::real, "1", "Gaussian width"},
      {"data", "center", K::real, "0", "bump centre for shifted-gaussian and skew"},
      {"data", "skew", K::real, "0.5", "linear skew factor for the skew family"},
      {"data", "kernel_power", K::integer, "1", "j in K_m^j for the kernel-K family"},
      {"data", "path", K::text, "", "sample file for the file family"},
      {"data", "smallness", K::real, "0", "if positive, rescale so |v|_1 + |v'|_1 + |v''|_1 equals this"},

      {"time", "T", K::real, "8", "final time of nonlinear runs"},
      {"time", "dt", K::real, "0.01", "time step"},
      {"time", "sample_step", K::real, "0.1", "spacing of recorded nonlinear samples"},
      {"time", "t_list", K::real_list, "1,2,4,8,16,32,64", "evaluation times for linear tasks"},

      {"task", "name", K::text, "verify-all", "task run by the 'run' subcommand"},
      {"task", "seed", K::integer, "20240917", "seed for randomized test data"},
      {"task", "expansion", K::text, "bbm-int", "expansion: heat, bbm-int, bbm-frac, kdv or bbm-prelim"},
      {"task", "N", K::integer, "2", "expansion order"},
      {"task", "j", K::integer, "0", "derivative order of kernel samples"},
      {"task", "p_list", K::real_list, "2,inf", "Lebesgue exponents of reported norms"},
      {"task", "method", K::text, "direct", "nonlinear solver: direct, picard or both"},
      {"task", "case", K::text, "auto", "second-term case: auto, subcritical, critical or supercritical"},
      {"task", "picard_steps", K::integer, "800", "Duhamel trapezoid panels over [0, T]"},
      {"task", "picard_max_iter", K::integer, "50", "Picard iteration cap"},
      {"task", "picard_tol", K::real, "1e-12", "Picard stopping tolerance (sup-t L^2 increment)"},
      {"task", "ineq_a", K::real, "2", "first exponent of the convolution inequality"},
      {"task", "ineq_b", K::real, "3", "second exponent of the convolution inequality"},
      {"task", "fit_input", K::text, "", "CSV file read by the fit task"},
      {"task", "fit_time_column", K::text, "t", "time column of the fit input"},
      {"task", "fit_columns", K::text, "l2", "comma-separated value columns to fit"},
      {"task", "fit_t_lo", K::real, "0", "fit window start (0: first sample)"},
      {"task", "fit_t_hi", K::real, "0", "fit window end (0: last sample)"},
      {"task", "criteria", K::text, "all", "acceptance criteria run by verify-all: all or a list such as 1,2,5"},

      {"output", "dir", K::text, "out", "output directory (DISPERSIVE_OUTPUT_DIR overrides)"},
      {"output", "dump_fields", K::boolean, "false", "also write field samples"},
  };
  return keys;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const KeyDescriptor* find_key(const std::string& dotted) {
  for (const auto& k : config_keys())
    if (dotted == std::string(k.section) + "." + k.key) return &k;
  return nullptr;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

long parse_long(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long out = 0;
  try {
    out = std::stol(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (v.empty() || used != v.size()) throw ConfigError("key '" + key + "' expects an integer, got '" + v + "'");
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  if (v == "inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double out = 0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (v.empty() || used != v.size() || !std::isfinite(out))
    throw ConfigError("key '" + key + "' expects a finite real number, got '" + v + "'");
  return out;
}

void check_kind(const std::string& key, KeyKind kind, const std::string& v) {
  switch (kind) {
    case KeyKind::integer: parse_long(key, v); break;
    case KeyKind::real:
      if (std::isinf(parse_double(key, v))) throw ConfigError("key '" + key + "' expects a finite real number");
      break;
    case KeyKind::boolean:
      if (v != "true" && v != "false") throw ConfigError("key '" + key + "' expects true or false, got '" + v + "'");
      break;
    case KeyKind::real_list:
      if (v.empty()) throw ConfigError("key '" + key + "' expects a non-empty list");
      for (const auto& item : split(v, ',')) parse_double(key, item);
      break;
    case KeyKind::text: break;
  }
}

}  // namespace

RunConfig::RunConfig() {
  for (const auto& k : config_keys()) values_[std::string(k.section) + "." + k.key] = k.default_value;
}

void RunConfig::set(const std::string& dotted, const std::string& value) {
  const KeyDescriptor* k = find_key(dotted);
  if (k == nullptr) throw ConfigError("unknown config key '" + dotted + "'");
  const std::string v = trim(value);
  check_kind(dotted, k->kind, v);
  values_[dotted] = v;
}

void RunConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not of the form section.key=value");
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

const std::string& RunConfig::raw(const std::string& dotted) const {
  const auto it = values_.find(dotted);
  if (it == values_.end()) throw ConfigError("unknown config key '" + dotted + "'");
  return it->second;
}

long RunConfig::get_int(const std::string& dotted) const { return parse_long(dotted, raw(dotted)); }
double RunConfig::get_real(const std::string& dotted) const { return parse_double(dotted, raw(dotted)); }
bool RunConfig::get_bool(const std::string& dotted) const { return raw(dotted) == "true"; }

std::vector<double> RunConfig::get_real_list(const std::string& dotted) const {
  std::vector<double> out;
  for (const auto& item : split(raw(dotted), ',')) out.push_back(parse_double(dotted, item));
  return out;
}

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": malformed section header '" + t + "'");
      section = trim(t.substr(1, t.size() - 2));
      bool known = false;
      for (const auto& k : config_keys()) known = known || section == k.section;
      if (!known) throw ConfigError("line " + std::to_string(lineno) + ": unknown section '" + section + "'");
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value', got '" + t + "'");
    if (section.empty()) throw ConfigError("line " + std::to_string(lineno) + ": key outside of any section");
    const std::string key = trim(t.substr(0, eq));
    const std::string dotted = section + "." + key;
    if (find_key(dotted) == nullptr)
      throw ConfigError("line " + std::to_string(lineno) + ": unknown config key '" + key + "' in section [" + section + "]");
    cfg.set(dotted, t.substr(eq + 1));
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string RunConfig::serialize() const {
  std::string out;
  std::string section;
  for (const auto& k : config_keys()) {
    if (section != k.section) {
      if (!section.empty()) out += "\n";
      section = k.section;
      out += "[" + section + "]\n";
    }
    const std::string dotted = section + "." + k.key;
    const std::string& v = values_.at(dotted);
    out += std::string(k.key) + " =" + (v.empty() ? "" : " " + v) + "\n";
  }
  return out;
}

// FNV-1a over the canonical serialization.
std::uint64_t RunConfig::hash() const {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : serialize()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex_hash(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void RunConfig::validate() const {
  const long n = get_int("grid.n");
  if (n < 16 || (n & (n - 1)) != 0) throw ConfigError("grid.n must be a power of two of at least 16, got " + raw("grid.n"));
  if (!(get_real("grid.L") > 0)) throw ConfigError("grid.L must be positive");
  if (!(get_real("model.m") >= 1)) throw ConfigError("model.m must be at least 1");
  const std::string& variant = raw("model.variant");
  if (variant != "abs" && variant != "signed") throw ConfigError("model.variant must be abs or signed, got '" + variant + "'");
  const std::string& phase = raw("model.phase");
  if (phase != "heat" && phase != "bbm" && phase != "kdv")
    throw ConfigError("model.phase must be heat, bbm or kdv, got '" + phase + "'");
  if (!(get_real("data.width") > 0)) throw ConfigError("data.width must be positive");
  if (get_real("data.smallness") < 0) throw ConfigError("data.smallness must be non-negative");
  if (get_int("data.kernel_power") < 1) throw ConfigError("data.kernel_power must be at least 1");
  if (!(get_real("time.T") > 0)) throw ConfigError("time.T must be positive");
  if (!(get_real("time.dt") > 0)) throw ConfigError("time.dt must be positive");
  if (!(get_real("time.sample_step") > 0)) throw ConfigError("time.sample_step must be positive");
  for (double t : get_real_list("time.t_list"))
    if (!(t >= 0) || !std::isfinite(t)) throw ConfigError("time.t_list entries must be finite and non-negative");
  for (double p : get_real_list("task.p_list"))
    if (!(p >= 1)) throw ConfigError("task.p_list entries must be at least 1");
  if (get_int("task.N") < 0 || get_int("task.N") > 20) throw ConfigError("task.N must lie in [0, 20]");
  if (get_int("task.j") < 0) throw ConfigError("task.j must be non-negative");
  if (get_int("task.picard_steps") < 1 || get_int("task.picard_max_iter") < 1)
    throw ConfigError("Picard steps and iteration cap must be positive");
  if (!(get_real("task.picard_tol") > 0)) throw ConfigError("task.picard_tol must be positive");
  if (raw("output.dir").empty()) throw ConfigError("output.dir must not be empty");
}

}  // namespace dispersive
