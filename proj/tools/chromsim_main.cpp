#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chromsim/errors.hpp"
#include "chromsim/ideal.hpp"
#include "chromsim/mmocaa.hpp"
#include "chromsim/report.hpp"
#include "chromsim/scenario.hpp"
#include "chromsim/study.hpp"

namespace {

using namespace chromsim;

struct CommonOptions {
  std::string scenario_path;
  std::string mode = "auto";
  std::string out_dir = ".";
  std::string cache_dir;
  std::string snapshots;
  double eta = -1.0;
  int relax_cfl = 0;
  bool no_mass_adjust = false;
  bool corrected_310 = false;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--scenario", opt.scenario_path, "Scenario file")->required();
  cmd->add_option("--mode", opt.mode, "Solver: auto, mmocaa, ideal or mmoc-unadjusted");
  cmd->add_option("--out-dir", opt.out_dir, "Output directory");
  cmd->add_option("--cache-dir", opt.cache_dir,
                  "Reference cache directory (default $CHROMSIM_CACHE_DIR or ./chromsim_cache)");
  cmd->add_option("--eta", opt.eta, "Perturbation constant, overrides the scenario");
  cmd->add_option("--relax-cfl", opt.relax_cfl, "Admit v*dt/dx < K instead of < 1");
  cmd->add_flag("--no-mass-adjust", opt.no_mass_adjust, "Disable the adjusted-advection step");
  cmd->add_flag("--corrected-3.10", opt.corrected_310,
                "Ideal model: consistent quadratic-gradient scaling (see README)");
  cmd->add_option("--snapshots", opt.snapshots, "Comma-separated times for field snapshots");
}

std::vector<double> parse_times(const std::string& csv) {
  std::vector<double> out;
  std::istringstream stream(csv);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

std::vector<std::pair<int, int>> parse_ladder(const std::string& spec) {
  std::vector<std::pair<int, int>> out;
  std::istringstream stream(spec);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const size_t colon = item.find(':');
    if (colon == std::string::npos)
      throw ValidationError("ladder entries must look like nx:nt, got '" + item + "'");
    out.push_back({std::stoi(item.substr(0, colon)), std::stoi(item.substr(colon + 1))});
  }
  if (out.empty()) throw ValidationError("empty ladder");
  return out;
}

std::pair<int, int> parse_grid(const std::string& spec) {
  const size_t colon = spec.find(':');
  if (colon == std::string::npos)
    throw ValidationError("fine grid must look like nx:nt, got '" + spec + "'");
  return {std::stoi(spec.substr(0, colon)), std::stoi(spec.substr(colon + 1))};
}

std::string resolve_cache_dir(const CommonOptions& opt) {
  if (!opt.cache_dir.empty()) return opt.cache_dir;
  if (const char* env = std::getenv("CHROMSIM_CACHE_DIR"); env && *env) return env;
  return "chromsim_cache";
}

ScenarioConfig load_with_overrides(const CommonOptions& opt) {
  ScenarioConfig raw = load_scenario_file(opt.scenario_path);
  if (opt.eta >= 0.0) raw.solver.eta = opt.eta;
  if (opt.relax_cfl > 0) raw.solver.relax_cfl = opt.relax_cfl;
  if (opt.no_mass_adjust) raw.solver.mass_adjust = false;
  if (opt.corrected_310) raw.solver.corrected_310 = true;
  if (!opt.snapshots.empty()) raw.solver.snapshot_times = parse_times(opt.snapshots);
  return validate_scenario(raw);
}

std::string out_path(const CommonOptions& opt, const std::string& name) {
  return (std::filesystem::path(opt.out_dir) / name).string();
}

int cmd_run(const CommonOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  const ScenarioConfig scenario = load_with_overrides(opt);
  const SolverMode mode = solver_mode_from_string(opt.mode);
  const Trajectory traj = solve_scenario(scenario, mode);

  RunManifest manifest;
  manifest.scenario_path = opt.scenario_path;
  manifest.mode = traj.mode;
  manifest.config = scenario;

  const std::string chrom = out_path(opt, "chromatogram.csv");
  write_chromatogram_csv(chrom, traj);
  manifest.outputs.push_back(chrom);
  const std::string mass = out_path(opt, "mass_report.csv");
  write_mass_csv(mass, traj.ledger);
  manifest.outputs.push_back(mass);
  for (const Snapshot& snap : traj.snapshots) {
    std::string name = "field_t" + format_double(snap.requested_time) + ".csv";
    const std::string path = out_path(opt, name);
    write_snapshot_csv(path, snap, scenario.grid.dx);
    manifest.outputs.push_back(path);
  }
  manifest.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(out_path(opt, "manifest.json"), manifest);

  std::cout << "mode " << traj.mode << ", " << scenario.grid.steps << " steps, outputs in "
            << opt.out_dir << "\n";
  return 0;
}

int cmd_study(const CommonOptions& opt, const std::string& ladder_spec,
              const std::string& reference, const std::string& fine_spec, int jobs) {
  const auto start = std::chrono::steady_clock::now();
  const ScenarioConfig scenario = load_with_overrides(opt);
  const auto ladder = parse_ladder(ladder_spec);
  auto [fine_cells, fine_steps] = parse_grid(fine_spec);
  const StudyResult result =
      convergence_study(scenario, ladder, reference_kind_from_string(reference),
                        resolve_cache_dir(opt), fine_cells, fine_steps, jobs);

  const std::string csv = out_path(opt, "study.csv");
  write_study_csv(csv, result);

  RunManifest manifest;
  manifest.scenario_path = opt.scenario_path;
  manifest.mode = "mmocaa";
  manifest.config = scenario;
  manifest.outputs.push_back(csv);
  manifest.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(out_path(opt, "manifest.json"), manifest);

  std::cout << "reference: " << result.reference << "\n";
  for (const LadderRow& row : result.rows) {
    std::cout << "n_x=" << row.cells << " n_t=" << row.steps << " l1=" << row.l1_total;
    if (row.has_order) std::cout << " order=" << row.order;
    std::cout << "\n";
  }
  return 0;
}

int cmd_compare(const CommonOptions& opt, const std::string& reference,
                const std::string& fine_spec) {
  const auto start = std::chrono::steady_clock::now();
  const ScenarioConfig scenario = load_with_overrides(opt);
  auto [fine_cells, fine_steps] = parse_grid(fine_spec);
  const CompareResult result = compare(scenario, reference_kind_from_string(reference),
                                       resolve_cache_dir(opt), fine_cells, fine_steps);

  const std::string csv = out_path(opt, "compare.csv");
  write_compare_csv(csv, result);

  nlohmann::ordered_json summary;
  summary["reference"] = result.reference_name;
  summary["l1"] = result.l1;
  summary["max_error"] = result.max_error;
  {
    std::ofstream out = open_output_file(out_path(opt, "compare_summary.json"));
    out << summary.dump(2) << "\n";
  }

  RunManifest manifest;
  manifest.scenario_path = opt.scenario_path;
  manifest.mode = "mmocaa";
  manifest.config = scenario;
  manifest.outputs.push_back(csv);
  manifest.outputs.push_back(out_path(opt, "compare_summary.json"));
  manifest.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(out_path(opt, "manifest.json"), manifest);

  std::cout << "reference: " << result.reference_name << "\n";
  for (size_t k = 0; k < result.l1.size(); ++k)
    std::cout << "component " << k + 1 << ": l1=" << result.l1[k]
              << " max=" << result.max_error[k] << "\n";
  return 0;
}

void emit_error(const char* kind, const std::string& message, int code) {
  nlohmann::ordered_json j;
  j["error"]["type"] = kind;
  j["error"]["message"] = message;
  j["error"]["exit_code"] = code;
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-dimensional multi-component liquid chromatography simulator"};
  app.require_subcommand(1);

  CommonOptions run_opt, study_opt, compare_opt;
  std::string ladder_spec, study_ref = "auto", compare_ref = "auto";
  std::string study_fine = "3000:20000", compare_fine = "3000:20000";
  int jobs = 1;

  CLI::App* run_cmd = app.add_subcommand("run", "Simulate a scenario and write CSV outputs");
  add_common(run_cmd, run_opt);

  CLI::App* study_cmd =
      app.add_subcommand("study", "Convergence study over a grid ladder");
  add_common(study_cmd, study_opt);
  study_cmd->add_option("--ladder", ladder_spec, "Comma-separated nx:nt pairs")->required();
  study_cmd->add_option("--reference", study_ref, "auto, analytic, fine or ideal");
  study_cmd->add_option("--fine-grid", study_fine, "Fine reference grid nx:nt");
  study_cmd->add_option("--jobs", jobs, "Parallel worker threads for ladder rows");

  CLI::App* compare_cmd =
      app.add_subcommand("compare", "Overlay a run against a reference solution");
  add_common(compare_cmd, compare_opt);
  compare_cmd->add_option("--reference", compare_ref, "auto, analytic, fine or ideal");
  compare_cmd->add_option("--fine-grid", compare_fine, "Fine reference grid nx:nt");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    emit_error("validation", e.what(), 2);
    return 2;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run_opt);
    if (study_cmd->parsed()) return cmd_study(study_opt, ladder_spec, study_ref, study_fine, jobs);
    if (compare_cmd->parsed()) return cmd_compare(compare_opt, compare_ref, compare_fine);
  } catch (const ValidationError& e) {
    emit_error("validation", e.what(), 2);
    return 2;
  } catch (const SolverError& e) {
    emit_error("solver", e.what(), 3);
    return 3;
  } catch (const IoError& e) {
    emit_error("io", e.what(), 4);
    return 4;
  } catch (const std::exception& e) {
    emit_error("internal", e.what(), 1);
    return 1;
  }
  return 0;
}
