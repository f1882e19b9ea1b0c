#include "chromsim/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "chromsim/errors.hpp"

namespace chromsim {

DerivedCoefficients derive_coefficients(const ColumnSpec& column) {
  if (!(column.length > 0.0)) throw ValidationError("column.length must be > 0");
  if (!(column.velocity > 0.0)) throw ValidationError("column.velocity must be > 0");

  DerivedCoefficients out;
  if (column.porosity.has_value() == column.phase_ratio.has_value()) {
    throw ValidationError("column: exactly one of porosity and phase_ratio must be given");
  }
  if (column.porosity) {
    const double eps = *column.porosity;
    if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("column.porosity must lie in (0, 1)");
    out.phase_ratio = (1.0 - eps) / eps;
  } else {
    if (!(*column.phase_ratio >= 0.0)) throw ValidationError("column.phase_ratio must be >= 0");
    out.phase_ratio = *column.phase_ratio;
  }

  if (column.plate_count.has_value() == column.diffusion.has_value()) {
    throw ValidationError("column: exactly one of plate_count and diffusion must be given");
  }
  if (column.plate_count) {
    if (!(*column.plate_count > 0.0)) throw ValidationError("column.plate_count must be > 0");
    out.diffusion = column.length * column.velocity / (2.0 * *column.plate_count);
  } else {
    if (!(*column.diffusion >= 0.0)) throw ValidationError("column.diffusion must be >= 0");
    out.diffusion = *column.diffusion;
  }
  return out;
}

double porosity_of_phase_ratio(double phase_ratio) { return 1.0 / (1.0 + phase_ratio); }

double plate_count_of_diffusion(double length, double velocity, double diffusion) {
  return length * velocity / (2.0 * diffusion);
}

void injection_value_into(const InjectionProfile& profile, double t, std::span<double> out) {
  const bool feeding = t > 0.0 && t <= profile.duration;
  for (size_t k = 0; k < profile.feed.size(); ++k) out[k] = feeding ? profile.feed[k] : 0.0;
}

std::vector<double> injection_value(const InjectionProfile& profile, double t) {
  std::vector<double> out(profile.feed.size());
  injection_value_into(profile, t, out);
  return out;
}

namespace {

void validate_isotherm(const IsothermParams& p) {
  if (p.a.empty()) throw ValidationError("isotherm: at least one component required");
  if (p.a.size() != p.b.size())
    throw ValidationError("isotherm: a and b must have the same length");
  for (double ai : p.a)
    if (!(ai > 0.0)) throw ValidationError("isotherm: every a_i must be > 0");
  for (double bi : p.b)
    if (!(bi >= 0.0)) throw ValidationError("isotherm: every b_i must be >= 0");
}

void validate_injection(const InjectionProfile& inj, int m) {
  if (static_cast<int>(inj.feed.size()) != m)
    throw ValidationError("injection.feed length must match the component count");
  if (!(inj.duration > 0.0)) throw ValidationError("injection.t_inj must be > 0");
  for (double f : inj.feed)
    if (!(f >= 0.0)) throw ValidationError("injection.feed must be non-negative");
}

}  // namespace

ScenarioConfig validate_scenario(const ScenarioConfig& raw) {
  ScenarioConfig cfg = raw;

  const DerivedCoefficients coeff = derive_coefficients(cfg.column);
  cfg.diffusion = coeff.diffusion;
  cfg.phase_ratio = coeff.phase_ratio;
  cfg.isotherm.phase_ratio = coeff.phase_ratio;

  validate_isotherm(cfg.isotherm);
  const int m = cfg.components();
  validate_injection(cfg.injection, m);

  if (cfg.grid.cells < 3)
    throw ValidationError("grid.n_x must be >= 3 (quadratic interpolation stencil)");
  if (cfg.grid.steps < 1) throw ValidationError("grid.n_t must be >= 1");
  if (!(cfg.grid.horizon > 0.0)) throw ValidationError("grid.t_max must be > 0");
  cfg.grid.dx = cfg.column.length / cfg.grid.cells;
  cfg.grid.dt = cfg.grid.horizon / cfg.grid.steps;

  if (cfg.solver.relax_cfl < 1) throw ValidationError("solver.relax_cfl must be >= 1");
  cfg.cfl = cfg.column.velocity * cfg.grid.dt / cfg.grid.dx;
  if (!(cfg.cfl < static_cast<double>(cfg.solver.relax_cfl))) {
    std::ostringstream msg;
    msg << "CFL violation: v*dt/dx = " << cfg.cfl << " must be < " << cfg.solver.relax_cfl
        << (cfg.solver.relax_cfl == 1 ? " (raise n_t or set solver.relax_cfl)" : "");
    throw ValidationError(msg.str());
  }

  if (!(cfg.solver.eta > 0.0 && cfg.solver.eta < 1.0))
    throw ValidationError("solver.eta must lie in (0, 1)");
  if (!(cfg.solver.inner_tol > 0.0)) throw ValidationError("solver.inner_tol must be > 0");
  if (cfg.solver.inner_cap < 1) throw ValidationError("solver.inner_cap must be >= 1");
  for (double ts : cfg.solver.snapshot_times)
    if (!(ts >= 0.0 && ts <= cfg.grid.horizon))
      throw ValidationError("solver.snapshot times must lie in [0, t_max]");

  if (!cfg.initial.empty()) {
    const size_t want = static_cast<size_t>(m) * cfg.grid.nodes();
    if (cfg.initial.size() != want)
      throw ValidationError("initial condition must hold m*(n_x+1) values");
    for (double u0 : cfg.initial)
      if (!(u0 >= 0.0)) throw ValidationError("initial condition must be non-negative");
  }

  cfg.validated = true;
  return cfg;
}

// ---------------------------------------------------------------------------
// Scenario file format: [section] headers, key = value lines, '#' comments,
// vectors comma-separated.

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& raw, const std::string& where) {
  try {
    size_t pos = 0;
    double v = std::stod(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("scenario file: cannot parse number '" + raw + "' for " + where);
  }
}

int parse_int(const std::string& raw, const std::string& where) {
  try {
    size_t pos = 0;
    long v = std::stol(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument(raw);
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw ValidationError("scenario file: cannot parse integer '" + raw + "' for " + where);
  }
}

bool parse_bool(const std::string& raw, const std::string& where) {
  std::string v;
  for (char c : raw) v.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "off" || v == "0" || v == "no") return false;
  throw ValidationError("scenario file: cannot parse boolean '" + raw + "' for " + where);
}

std::vector<double> parse_vector(const std::string& raw, const std::string& where) {
  std::vector<double> out;
  std::string item;
  std::istringstream stream(raw);
  while (std::getline(stream, item, ',')) out.push_back(parse_double(trim(item), where));
  if (out.empty()) throw ValidationError("scenario file: empty vector for " + where);
  return out;
}

}  // namespace

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file: " + path);

  ScenarioConfig cfg;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (size_t hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ValidationError("scenario file: malformed section header at line " +
                              std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      if (section != "column" && section != "isotherm" && section != "injection" &&
          section != "grid" && section != "solver")
        throw ValidationError("scenario file: unknown section [" + section + "]");
      continue;
    }

    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("scenario file: expected key = value at line " +
                            std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string where = "[" + section + "] " + key;

    if (section == "column") {
      if (key == "length") cfg.column.length = parse_double(value, where);
      else if (key == "velocity") cfg.column.velocity = parse_double(value, where);
      else if (key == "porosity") cfg.column.porosity = parse_double(value, where);
      else if (key == "phase_ratio") cfg.column.phase_ratio = parse_double(value, where);
      else if (key == "plate_count") cfg.column.plate_count = parse_double(value, where);
      else if (key == "diffusion") cfg.column.diffusion = parse_double(value, where);
      else throw ValidationError("scenario file: unknown key " + where);
    } else if (section == "isotherm") {
      if (key == "a") cfg.isotherm.a = parse_vector(value, where);
      else if (key == "b") cfg.isotherm.b = parse_vector(value, where);
      else if (key == "m") {
        // optional; cross-checked against the vectors
        int m = parse_int(value, where);
        if (!cfg.isotherm.a.empty() && m != cfg.isotherm.components())
          throw ValidationError("scenario file: isotherm m does not match vector length");
      } else throw ValidationError("scenario file: unknown key " + where);
    } else if (section == "injection") {
      if (key == "feed") cfg.injection.feed = parse_vector(value, where);
      else if (key == "t_inj") cfg.injection.duration = parse_double(value, where);
      else if (key == "kind") {
        if (value != "rectangular")
          throw ValidationError("scenario file: only rectangular injection is supported");
      } else throw ValidationError("scenario file: unknown key " + where);
    } else if (section == "grid") {
      if (key == "n_x") cfg.grid.cells = parse_int(value, where);
      else if (key == "n_t") cfg.grid.steps = parse_int(value, where);
      else if (key == "t_max") cfg.grid.horizon = parse_double(value, where);
      else throw ValidationError("scenario file: unknown key " + where);
    } else if (section == "solver") {
      if (key == "eta") cfg.solver.eta = parse_double(value, where);
      else if (key == "inner_tol") cfg.solver.inner_tol = parse_double(value, where);
      else if (key == "inner_cap") cfg.solver.inner_cap = parse_int(value, where);
      else if (key == "mass_adjust") cfg.solver.mass_adjust = parse_bool(value, where);
      else if (key == "relax_cfl") cfg.solver.relax_cfl = parse_int(value, where);
      else if (key == "corrected_310") cfg.solver.corrected_310 = parse_bool(value, where);
      else if (key == "mass_tol_rel") cfg.solver.mass_tol_rel = parse_double(value, where);
      else if (key == "adjust_mode") {
        if (value == "pointwise") cfg.solver.adjust_mode = AdjustMode::Pointwise;
        else if (value == "field") cfg.solver.adjust_mode = AdjustMode::Field;
        else throw ValidationError("scenario file: adjust_mode must be pointwise or field");
      } else if (key == "secant_freeze") {
        if (value == "old") cfg.solver.secant_freeze = SecantFreeze::Old;
        else if (value == "iterate") cfg.solver.secant_freeze = SecantFreeze::Iterate;
        else throw ValidationError("scenario file: secant_freeze must be old or iterate");
      } else throw ValidationError("scenario file: unknown key " + where);
    } else {
      throw ValidationError("scenario file: key outside any section at line " +
                            std::to_string(lineno));
    }
  }
  return cfg;
}

// ---------------------------------------------------------------------------

namespace {

void feed_hash(std::uint64_t& h, const void* data, size_t n) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < n; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ull;  // FNV-1a
  }
}

void feed_double(std::uint64_t& h, double v) {
  char buf[32];
  int n = std::snprintf(buf, sizeof buf, "%a;", v);
  feed_hash(h, buf, static_cast<size_t>(n));
}

void feed_int(std::uint64_t& h, long v) {
  char buf[32];
  int n = std::snprintf(buf, sizeof buf, "%ld;", v);
  feed_hash(h, buf, static_cast<size_t>(n));
}

}  // namespace

ScenarioConfig with_grid(const ScenarioConfig& scenario, int cells, int steps) {
  ScenarioConfig out = scenario;
  if (!scenario.initial.empty()) {
    const int m = scenario.components();
    const int old_nodes = scenario.grid.nodes();
    const int new_nodes = cells + 1;
    std::vector<double> resampled(static_cast<size_t>(m) * new_nodes);
    for (int k = 0; k < m; ++k) {
      const double* src = scenario.initial.data() + static_cast<size_t>(k) * old_nodes;
      for (int i = 0; i < new_nodes; ++i) {
        const double pos = static_cast<double>(i) * (old_nodes - 1) / cells;
        const int j = std::min(static_cast<int>(pos), old_nodes - 2);
        const double w = pos - j;
        resampled[static_cast<size_t>(k) * new_nodes + i] =
            (1.0 - w) * src[j] + w * src[j + 1];
      }
    }
    out.initial = std::move(resampled);
  }
  out.grid.cells = cells;
  out.grid.steps = steps;
  out.validated = false;
  return validate_scenario(out);
}

std::string scenario_fingerprint(const ScenarioConfig& config) {
  const ScenarioConfig cfg = config.validated ? config : validate_scenario(config);
  std::uint64_t h = 0xcbf29ce484222325ull;
  feed_hash(h, "chromsim-0.1.0;", 15);  // solver revision salt: stale caches must miss
  feed_double(h, cfg.column.length);
  feed_double(h, cfg.column.velocity);
  feed_double(h, cfg.phase_ratio);
  feed_double(h, cfg.diffusion);
  feed_int(h, cfg.components());
  for (double v : cfg.isotherm.a) feed_double(h, v);
  for (double v : cfg.isotherm.b) feed_double(h, v);
  for (double v : cfg.injection.feed) feed_double(h, v);
  feed_double(h, cfg.injection.duration);
  feed_int(h, cfg.grid.cells);
  feed_int(h, cfg.grid.steps);
  feed_double(h, cfg.grid.horizon);
  feed_double(h, cfg.solver.eta);
  feed_double(h, cfg.solver.inner_tol);
  feed_int(h, cfg.solver.inner_cap);
  feed_int(h, cfg.solver.mass_adjust ? 1 : 0);
  feed_int(h, cfg.solver.relax_cfl);
  feed_int(h, cfg.solver.corrected_310 ? 1 : 0);
  feed_int(h, cfg.solver.adjust_mode == AdjustMode::Pointwise ? 0 : 1);
  feed_int(h, cfg.solver.secant_freeze == SecantFreeze::Old ? 0 : 1);
  feed_double(h, cfg.solver.mass_tol_rel);
  for (double v : cfg.initial) feed_double(h, v);

  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace chromsim
