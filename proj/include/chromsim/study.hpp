#ifndef CHROMSIM_STUDY_HPP
#define CHROMSIM_STUDY_HPP

#include <string>
#include <utility>
#include <vector>

#include "chromsim/reference.hpp"
#include "chromsim/scenario.hpp"

namespace chromsim {

enum class ReferenceKind {
  Auto,      // analytic when it applies (b = 0, m = 1, D > 0), else fine grid
  Analytic,  // closed-form linear solution; rejected for nonlinear scenarios
  FineGrid,  // cached fine-grid self reference
  Ideal,     // zero-dispersion solver on the same grid
};

ReferenceKind reference_kind_from_string(const std::string& name);

struct LadderRow {
  int cells = 0;
  int steps = 0;
  std::vector<double> l1;  // per component
  double l1_total = 0.0;
  double order = 0.0;  // observed order vs previous row (l1_total)
  bool has_order = false;
  double wall_time_s = 0.0;
};

struct StudyResult {
  std::vector<LadderRow> rows;
  std::string reference;  // which reference was used
};

/// Runs the scenario on every (n_x, n_t) of the ladder against one shared
/// reference and reports the time-integrated outlet errors with observed
/// orders. Rows may run on up to `jobs` worker threads.
StudyResult convergence_study(const ScenarioConfig& base,
                              const std::vector<std::pair<int, int>>& ladder, ReferenceKind kind,
                              const std::string& cache_dir, int fine_cells, int fine_steps,
                              int jobs = 1);

void write_study_csv(const std::string& path, const StudyResult& result);

struct CompareResult {
  ChromatogramRecord numeric;
  ChromatogramRecord reference;  // resampled onto the numeric grid
  std::vector<double> l1;
  std::vector<double> max_error;
  std::string reference_name;
};

CompareResult compare(const ScenarioConfig& scenario, ReferenceKind kind,
                      const std::string& cache_dir, int fine_cells, int fine_steps);

void write_compare_csv(const std::string& path, const CompareResult& result);

}  // namespace chromsim

#endif
