#ifndef CHROMSIM_REPORT_HPP
#define CHROMSIM_REPORT_HPP

#include <fstream>
#include <string>
#include <vector>

#include "chromsim/mmocaa.hpp"
#include "chromsim/reference.hpp"
#include "chromsim/scenario.hpp"

namespace chromsim {

inline constexpr const char* kVersion = "0.1.0";

/// Shortest round-trip decimal form (std::to_chars); keeps every CSV
/// byte-stable and exactly reloadable.
std::string format_double(double value);

/// Opens an output stream, creating parent directories; throws IoError.
std::ofstream open_output_file(const std::string& path);

void write_chromatogram_csv(const std::string& path, const Trajectory& trajectory);
void write_mass_csv(const std::string& path, const MassLedger& ledger);
void write_snapshot_csv(const std::string& path, const Snapshot& snapshot, double dx);

struct RunManifest {
  std::string scenario_path;
  std::string mode;
  ScenarioConfig config;
  std::vector<std::string> outputs;
  double wall_time_s = 0.0;
};

std::string manifest_json(const RunManifest& manifest);
void write_manifest(const std::string& path, const RunManifest& manifest);

}  // namespace chromsim

#endif
