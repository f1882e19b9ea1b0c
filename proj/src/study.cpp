#include "chromsim/study.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <thread>

#include "chromsim/errors.hpp"
#include "chromsim/report.hpp"

namespace chromsim {

ReferenceKind reference_kind_from_string(const std::string& name) {
  if (name == "auto") return ReferenceKind::Auto;
  if (name == "analytic") return ReferenceKind::Analytic;
  if (name == "fine") return ReferenceKind::FineGrid;
  if (name == "ideal") return ReferenceKind::Ideal;
  throw ValidationError("unknown reference kind '" + name +
                        "' (expected auto, analytic, fine or ideal)");
}

namespace {

bool analytic_applies(const ScenarioConfig& cfg) {
  return cfg.components() == 1 && cfg.isotherm.b[0] == 0.0 && cfg.diffusion > 0.0;
}

struct Reference {
  ReferenceKind kind;
  ChromatogramRecord fine;  // used by FineGrid and Ideal
  std::string name;
};

Reference resolve_reference(const ScenarioConfig& cfg, ReferenceKind kind,
                            const std::string& cache_dir, int fine_cells, int fine_steps) {
  Reference ref;
  ref.kind = kind;
  if (kind == ReferenceKind::Auto)
    ref.kind = analytic_applies(cfg) ? ReferenceKind::Analytic : ReferenceKind::FineGrid;

  switch (ref.kind) {
    case ReferenceKind::Analytic:
      if (!analytic_applies(cfg))
        throw ValidationError(
            "analytic reference unavailable: scenario is not the linear single-component "
            "model with D > 0");
      ref.name = "analytic";
      break;
    case ReferenceKind::FineGrid:
      ref.fine = fine_grid_reference(cfg, fine_cells, fine_steps, cache_dir);
      ref.name = "fine-grid(" + std::to_string(fine_cells) + "," + std::to_string(fine_steps) + ")";
      break;
    case ReferenceKind::Ideal: {
      ScenarioConfig ideal_cfg = cfg;
      ideal_cfg.column.plate_count.reset();
      ideal_cfg.column.diffusion = 0.0;
      ideal_cfg.validated = false;
      ideal_cfg = validate_scenario(ideal_cfg);
      ref.fine = to_record(solve_scenario(ideal_cfg, SolverMode::Ideal));
      ref.name = "ideal";
      break;
    }
    default:
      throw ValidationError("unresolved reference kind");
  }
  return ref;
}

std::vector<double> errors_against(const Reference& ref, const ScenarioConfig& cfg,
                                   const ChromatogramRecord& numeric) {
  if (ref.kind == ReferenceKind::Analytic)
    return l1_error(numeric, analytic_record(cfg, numeric.times));
  return l1_error(numeric, ref.fine);
}

}  // namespace

StudyResult convergence_study(const ScenarioConfig& base,
                              const std::vector<std::pair<int, int>>& ladder, ReferenceKind kind,
                              const std::string& cache_dir, int fine_cells, int fine_steps,
                              int jobs) {
  if (ladder.empty()) throw ValidationError("convergence study needs at least one grid");
  const ScenarioConfig cfg = base.validated ? base : validate_scenario(base);
  const Reference ref = resolve_reference(cfg, kind, cache_dir, fine_cells, fine_steps);

  StudyResult result;
  result.reference = ref.name;
  result.rows.resize(ladder.size());

  std::atomic<size_t> cursor{0};
  auto worker = [&]() {
    for (;;) {
      const size_t idx = cursor.fetch_add(1);
      if (idx >= ladder.size()) return;
      const auto [cells, steps] = ladder[idx];
      const auto start = std::chrono::steady_clock::now();
      const ScenarioConfig row_cfg = with_grid(cfg, cells, steps);
      const ChromatogramRecord numeric = to_record(run_mmocaa(row_cfg));
      LadderRow row;
      row.cells = cells;
      row.steps = steps;
      row.l1 = errors_against(ref, row_cfg, numeric);
      row.l1_total = std::accumulate(row.l1.begin(), row.l1.end(), 0.0);
      row.wall_time_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      result.rows[idx] = std::move(row);
    }
  };

  const int nthreads = std::max(1, std::min<int>(jobs, static_cast<int>(ladder.size())));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (size_t i = 1; i < result.rows.size(); ++i) {
    const double h_prev = 1.0 / result.rows[i - 1].cells;
    const double h_cur = 1.0 / result.rows[i].cells;
    if (result.rows[i].l1_total > 0.0 && result.rows[i - 1].l1_total > 0.0 && h_prev != h_cur) {
      result.rows[i].order =
          std::log(result.rows[i - 1].l1_total / result.rows[i].l1_total) /
          std::log(h_prev / h_cur);
      result.rows[i].has_order = true;
    }
  }
  return result;
}

void write_study_csv(const std::string& path, const StudyResult& result) {
  std::ofstream out = open_output_file(path);
  const bool with_order = result.rows.size() > 1;
  const size_t m = result.rows.empty() ? 0 : result.rows.front().l1.size();
  out << "n_x,n_t";
  for (size_t k = 0; k < m; ++k) out << ",l1_u" << k + 1;
  out << ",l1_total";
  if (with_order) out << ",order";
  out << ",wall_time_s\n";
  for (const LadderRow& row : result.rows) {
    out << row.cells << ',' << row.steps;
    for (double e : row.l1) out << ',' << format_double(e);
    out << ',' << format_double(row.l1_total);
    if (with_order) out << ',' << (row.has_order ? format_double(row.order) : std::string());
    out << ',' << format_double(row.wall_time_s) << "\n";
  }
}

CompareResult compare(const ScenarioConfig& scenario, ReferenceKind kind,
                      const std::string& cache_dir, int fine_cells, int fine_steps) {
  const ScenarioConfig cfg = scenario.validated ? scenario : validate_scenario(scenario);
  const Reference ref = resolve_reference(cfg, kind, cache_dir, fine_cells, fine_steps);

  CompareResult out;
  out.reference_name = ref.name;
  out.numeric = to_record(run_mmocaa(cfg));
  if (ref.kind == ReferenceKind::Analytic) {
    out.reference = analytic_record(cfg, out.numeric.times);
  } else {
    out.reference.times = out.numeric.times;
    out.reference.series.resize(ref.fine.components());
    for (int k = 0; k < ref.fine.components(); ++k)
      out.reference.series[k] =
          resample_linear(ref.fine.times, ref.fine.series[k], out.numeric.times);
  }
  out.l1 = l1_error(out.numeric, out.reference);
  out.max_error.assign(out.numeric.components(), 0.0);
  for (int k = 0; k < out.numeric.components(); ++k)
    for (size_t j = 0; j < out.numeric.times.size(); ++j)
      out.max_error[k] = std::max(
          out.max_error[k], std::abs(out.numeric.series[k][j] - out.reference.series[k][j]));
  return out;
}

void write_compare_csv(const std::string& path, const CompareResult& result) {
  std::ofstream out = open_output_file(path);
  const int m = result.numeric.components();
  out << "time";
  for (int k = 0; k < m; ++k)
    out << ",numeric_u" << k + 1 << ",reference_u" << k + 1 << ",abs_error_u" << k + 1;
  out << "\n";
  for (size_t j = 0; j < result.numeric.times.size(); ++j) {
    out << format_double(result.numeric.times[j]);
    for (int k = 0; k < m; ++k) {
      const double num = result.numeric.series[k][j];
      const double ref = result.reference.series[k][j];
      out << ',' << format_double(num) << ',' << format_double(ref) << ','
          << format_double(std::abs(num - ref));
    }
    out << "\n";
  }
}

}  // namespace chromsim
