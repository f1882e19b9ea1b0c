#include "chromsim/reference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chromsim/errors.hpp"
#include "chromsim/report.hpp"

namespace chromsim {

RetardedTransportParams retarded_params(const ScenarioConfig& scenario) {
  const ScenarioConfig cfg = scenario.validated ? scenario : validate_scenario(scenario);
  if (cfg.components() != 1 || cfg.isotherm.b[0] != 0.0 || !(cfg.diffusion > 0.0))
    throw ValidationError(
        "analytic reference requires the single-component linear isotherm with D > 0");
  RetardedTransportParams p;
  p.retardation = 1.0 + cfg.phase_ratio * cfg.isotherm.a[0];
  p.velocity = cfg.column.velocity;
  p.diffusion = cfg.diffusion;
  p.length = cfg.column.length;
  p.feed = cfg.injection.feed[0];
  p.injection_time = cfg.injection.duration;
  return p;
}

double erfcx_positive(double z) {
  if (z < 25.0) return std::exp(z * z + std::log(std::erfc(z)));
  // Asymptotic expansion; relative error below 1e-12 for z >= 25.
  const double iz2 = 1.0 / (z * z);
  const double series =
      1.0 + iz2 * (-0.5 + iz2 * (0.75 + iz2 * (-1.875 + iz2 * 6.5625)));
  return series / (z * std::sqrt(M_PI));
}

namespace {

// Semi-infinite unit-step response and its spatial derivative.
double halfspace_step(const RetardedTransportParams& p, double x, double t) {
  const double spread = 2.0 * std::sqrt(p.diffusion * p.retardation * t);
  const double arg1 = (p.retardation * x - p.velocity * t) / spread;
  const double arg2 = (p.retardation * x + p.velocity * t) / spread;
  // exp(vx/D) erfc(arg2) written in overflow-free form via
  // vx/D = arg2^2 - arg1^2.
  return 0.5 * std::erfc(arg1) + 0.5 * erfcx_positive(arg2) * std::exp(-arg1 * arg1);
}

double halfspace_step_dx(const RetardedTransportParams& p, double x, double t) {
  const double spread = 2.0 * std::sqrt(p.diffusion * p.retardation * t);
  const double arg1 = (p.retardation * x - p.velocity * t) / spread;
  const double arg2 = (p.retardation * x + p.velocity * t) / spread;
  const double two_over_sqrt_pi = 2.0 / std::sqrt(M_PI);
  return (p.retardation / spread) * std::exp(-arg1 * arg1) *
         ((arg2 - arg1) * erfcx_positive(arg2) - two_over_sqrt_pi);
}

}  // namespace

double linear_step_response(const RetardedTransportParams& p, double x, double t) {
  if (t <= 0.0) return 0.0;
  // Semi-infinite solution plus the outlet boundary layer that enforces the
  // zero-gradient condition at x = L: width D/v, amplitude -(D/v) du/dx|_L.
  // Without the layer the two problems differ by O(D/v * |u_x|) right at the
  // outlet, which is far above the oracle tolerance at moderate plate counts.
  const double layer = std::exp(p.velocity * (x - p.length) / p.diffusion);
  return halfspace_step(p, x, t) -
         (p.diffusion / p.velocity) * halfspace_step_dx(p, p.length, t) * layer;
}

double linear_analytic_value(const RetardedTransportParams& p, double x, double t) {
  double u = linear_step_response(p, x, t);
  if (t > p.injection_time) u -= linear_step_response(p, x, t - p.injection_time);
  return p.feed * u;
}

double linear_analytic_outlet(const RetardedTransportParams& p, double t) {
  return linear_analytic_value(p, p.length, t);
}

ChromatogramRecord to_record(const Trajectory& trajectory) {
  return {trajectory.times, trajectory.outlet};
}

ChromatogramRecord analytic_record(const ScenarioConfig& scenario,
                                   const std::vector<double>& times) {
  const RetardedTransportParams p = retarded_params(scenario);
  ChromatogramRecord rec;
  rec.times = times;
  rec.series.assign(1, std::vector<double>(times.size()));
  for (size_t j = 0; j < times.size(); ++j) rec.series[0][j] = linear_analytic_outlet(p, times[j]);
  return rec;
}

// ---------------------------------------------------------------------------
// Fine-grid reference with on-disk cache.

namespace {

// stod rejects subnormals with out_of_range; strtod returns them.
double parse_cell(const std::string& cell, const std::string& path) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str()) throw IoError("corrupt reference cache file: " + path);
  return v;
}

ChromatogramRecord load_cached(const std::string& path, const std::string& fingerprint) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read reference cache file: " + path);
  std::string line;
  std::getline(in, line);  // banner
  std::getline(in, line);
  if (line.find(fingerprint) == std::string::npos)
    throw IoError("reference cache fingerprint mismatch in " + path);
  int m = 0;
  size_t samples = 0;
  in >> line >> m >> line >> samples;
  std::getline(in, line);
  std::getline(in, line);  // column header

  ChromatogramRecord rec;
  rec.times.resize(samples);
  rec.series.assign(m, std::vector<double>(samples));
  for (size_t j = 0; j < samples; ++j) {
    if (!std::getline(in, line)) throw IoError("truncated reference cache file: " + path);
    std::istringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');
    rec.times[j] = parse_cell(cell, path);
    for (int k = 0; k < m; ++k) {
      std::getline(row, cell, ',');
      rec.series[k][j] = parse_cell(cell, path);
    }
  }
  return rec;
}

void store_cached(const std::string& path, const std::string& fingerprint,
                  const ChromatogramRecord& rec) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::create_directories(target.parent_path());
  const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp);
    if (!out) throw IoError("cannot write reference cache file: " + tmp.string());
    out << "# fine-grid reference chromatogram\n";
    out << "# fingerprint " << fingerprint << "\n";
    out << "components " << rec.components() << " samples " << rec.times.size() << "\n";
    out << "time";
    for (int k = 0; k < rec.components(); ++k) out << ",u" << k + 1;
    out << "\n";
    for (size_t j = 0; j < rec.times.size(); ++j) {
      out << format_double(rec.times[j]);
      for (int k = 0; k < rec.components(); ++k) out << ',' << format_double(rec.series[k][j]);
      out << "\n";
    }
  }
  fs::rename(tmp, target);  // atomic publish for concurrent readers
}

}  // namespace

ChromatogramRecord fine_grid_reference(const ScenarioConfig& scenario, int fine_cells,
                                       int fine_steps, const std::string& cache_dir) {
  ScenarioConfig fine = with_grid(scenario.validated ? scenario : validate_scenario(scenario),
                                  fine_cells, fine_steps);
  const std::string fp = scenario_fingerprint(fine);
  const std::string path =
      (std::filesystem::path(cache_dir) / ("ref_" + fp + ".csv")).string();
  if (!cache_dir.empty() && std::filesystem::exists(path)) return load_cached(path, fp);

  const Trajectory traj = run_mmocaa(fine);
  const ChromatogramRecord rec = to_record(traj);
  if (!cache_dir.empty()) store_cached(path, fp, rec);
  return rec;
}

// ---------------------------------------------------------------------------

std::vector<double> resample_linear(const std::vector<double>& src_times,
                                    const std::vector<double>& src_values,
                                    const std::vector<double>& dst_times) {
  std::vector<double> out(dst_times.size());
  size_t seg = 0;
  for (size_t j = 0; j < dst_times.size(); ++j) {
    const double t = dst_times[j];
    if (t <= src_times.front()) {
      out[j] = src_values.front();
      continue;
    }
    if (t >= src_times.back()) {
      out[j] = src_values.back();
      continue;
    }
    while (src_times[seg + 1] < t) ++seg;
    const double t0 = src_times[seg];
    const double t1 = src_times[seg + 1];
    const double w = (t - t0) / (t1 - t0);
    out[j] = (1.0 - w) * src_values[seg] + w * src_values[seg + 1];
  }
  return out;
}

std::vector<double> l1_error(const ChromatogramRecord& numeric,
                             const ChromatogramRecord& reference) {
  if (numeric.times.empty() || reference.times.empty())
    throw ValidationError("l1_error: empty chromatogram record");
  if (numeric.components() != reference.components())
    throw ValidationError("l1_error: component counts differ");
  const double dt =
      (numeric.times.back() - numeric.times.front()) / (numeric.times.size() - 1);
  std::vector<double> out(numeric.components(), 0.0);
  for (int k = 0; k < numeric.components(); ++k) {
    const std::vector<double> ref =
        resample_linear(reference.times, reference.series[k], numeric.times);
    // Rectangle rule over levels 1..n, matching the outflow quadrature.
    double acc = 0.0;
    for (size_t j = 1; j < numeric.times.size(); ++j)
      acc += std::abs(numeric.series[k][j] - ref[j]);
    out[k] = dt * acc;
  }
  return out;
}

}  // namespace chromsim
