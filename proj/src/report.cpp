#include "chromsim/report.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "chromsim/errors.hpp"

namespace chromsim {

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, ptr);
}

std::ofstream open_output_file(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write output file: " + path);
  return out;
}

void write_chromatogram_csv(const std::string& path, const Trajectory& trajectory) {
  std::ofstream out = open_output_file(path);
  out << "time";
  for (size_t k = 0; k < trajectory.outlet.size(); ++k) out << ",u" << k + 1;
  out << "\n";
  for (size_t j = 0; j < trajectory.times.size(); ++j) {
    out << format_double(trajectory.times[j]);
    for (const auto& series : trajectory.outlet) out << ',' << format_double(series[j]);
    out << "\n";
  }
}

void write_mass_csv(const std::string& path, const MassLedger& ledger) {
  std::ofstream out = open_output_file(path);
  out << "time,component,injected,holdup,outflow,deficit\n";
  const int m = ledger.components;
  for (int n = 0; n < ledger.levels(); ++n) {
    for (int k = 0; k < m; ++k) {
      const size_t idx = static_cast<size_t>(n) * m + k;
      out << format_double(ledger.times[n]) << ',' << k + 1 << ','
          << format_double(ledger.hist_injected[idx]) << ','
          << format_double(ledger.hist_holdup[idx]) << ','
          << format_double(ledger.hist_outflow[idx]) << ','
          << format_double(ledger.hist_deficit[idx]) << "\n";
    }
  }
}

void write_snapshot_csv(const std::string& path, const Snapshot& snapshot, double dx) {
  std::ofstream out = open_output_file(path);
  const int m = snapshot.components;
  const size_t n = snapshot.values.size() / m;
  out << "x";
  for (int k = 0; k < m; ++k) out << ",u" << k + 1;
  out << "\n";
  for (size_t i = 0; i < n; ++i) {
    out << format_double(static_cast<double>(i) * dx);
    for (int k = 0; k < m; ++k) out << ',' << format_double(snapshot.values[k * n + i]);
    out << "\n";
  }
}

namespace {

nlohmann::ordered_json scenario_json(const ScenarioConfig& cfg) {
  nlohmann::ordered_json j;
  j["column"]["length"] = cfg.column.length;
  j["column"]["velocity"] = cfg.column.velocity;
  if (cfg.column.porosity) j["column"]["porosity"] = *cfg.column.porosity;
  if (cfg.column.phase_ratio) j["column"]["phase_ratio"] = *cfg.column.phase_ratio;
  if (cfg.column.plate_count) j["column"]["plate_count"] = *cfg.column.plate_count;
  if (cfg.column.diffusion) j["column"]["diffusion"] = *cfg.column.diffusion;
  j["isotherm"]["a"] = cfg.isotherm.a;
  j["isotherm"]["b"] = cfg.isotherm.b;
  j["isotherm"]["m"] = cfg.components();
  j["injection"]["feed"] = cfg.injection.feed;
  j["injection"]["t_inj"] = cfg.injection.duration;
  j["injection"]["kind"] = "rectangular";
  j["grid"]["n_x"] = cfg.grid.cells;
  j["grid"]["n_t"] = cfg.grid.steps;
  j["grid"]["t_max"] = cfg.grid.horizon;
  j["grid"]["dx"] = cfg.grid.dx;
  j["grid"]["dt"] = cfg.grid.dt;
  j["solver"]["eta"] = cfg.solver.eta;
  j["solver"]["inner_tol"] = cfg.solver.inner_tol;
  j["solver"]["inner_cap"] = cfg.solver.inner_cap;
  j["solver"]["mass_adjust"] = cfg.solver.mass_adjust;
  j["solver"]["relax_cfl"] = cfg.solver.relax_cfl;
  j["solver"]["corrected_310"] = cfg.solver.corrected_310;
  j["solver"]["adjust_mode"] =
      cfg.solver.adjust_mode == AdjustMode::Pointwise ? "pointwise" : "field";
  j["solver"]["secant_freeze"] =
      cfg.solver.secant_freeze == SecantFreeze::Old ? "old" : "iterate";
  j["solver"]["mass_tol_rel"] = cfg.solver.mass_tol_rel;
  j["solver"]["snapshots"] = cfg.solver.snapshot_times;
  j["derived"]["diffusion"] = cfg.diffusion;
  j["derived"]["phase_ratio"] = cfg.phase_ratio;
  j["derived"]["porosity"] = porosity_of_phase_ratio(cfg.phase_ratio);
  if (cfg.diffusion > 0.0)
    j["derived"]["plate_count"] =
        plate_count_of_diffusion(cfg.column.length, cfg.column.velocity, cfg.diffusion);
  j["derived"]["cfl"] = cfg.cfl;
  j["fingerprint"] = scenario_fingerprint(cfg);
  return j;
}

}  // namespace

std::string manifest_json(const RunManifest& manifest) {
  nlohmann::ordered_json j;
  j["tool"] = "chromsim";
  j["version"] = kVersion;
  j["scenario_path"] = manifest.scenario_path;
  j["mode"] = manifest.mode;
  j["config"] = scenario_json(manifest.config);
  j["outputs"] = manifest.outputs;
  j["wall_time_s"] = manifest.wall_time_s;
  return j.dump(2);
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
  std::ofstream out = open_output_file(path);
  out << manifest_json(manifest) << "\n";
}

}  // namespace chromsim
