#ifndef CHROMSIM_MMOCAA_HPP
#define CHROMSIM_MMOCAA_HPP

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "chromsim/characteristics.hpp"
#include "chromsim/field.hpp"
#include "chromsim/massaudit.hpp"
#include "chromsim/scenario.hpp"

namespace chromsim {

struct StepDiagnostics {
  int iterations = 0;
  double residual = 0.0;
  bool converged = true;
  std::vector<std::int8_t> branch;  // per component: +1 max, -1 min, 0 none
  std::vector<double> deficit_before;
};

struct Snapshot {
  double requested_time = 0.0;
  double time = 0.0;
  int level = 0;
  int components = 0;
  std::vector<double> values;  // m*(n_x+1)
};

/// Everything a run produces: outlet series per component, optional field
/// snapshots, per-step diagnostics and the final mass ledger.
struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> outlet;  // [component][level]
  std::vector<Snapshot> snapshots;
  std::vector<StepDiagnostics> steps;
  MassLedger ledger;
  std::vector<double> min_values;  // most negative value seen per component
  std::string mode;                // resolved solver mode
};

enum class SolverMode { Auto, Mmocaa, Ideal, MmocUnadjusted };

std::string to_string(SolverMode mode);
SolverMode solver_mode_from_string(const std::string& name);

/// Traces the state along the retarded characteristics (coupling at the old
/// state), interpolates the two perturbed feet and applies the max/min
/// selection driven by the sign of the per-component mass deficit. Returns
/// the plain traced field when adjustment is off or balanced.
TracedField mass_adjusted_trace(const ConcentrationField& state, const ScenarioConfig& scenario,
                                const MassLedger& ledger, std::vector<std::int8_t>* branch_out = nullptr);

/// Secant-linearized solve of the implicit relation for one step on a
/// fixed traced field (from mass_adjusted_trace). Returns the new field,
/// the iteration count, and the final max-norm increment.
std::tuple<ConcentrationField, int, double> inner_iteration(const TracedField& traced,
                                                            const ConcentrationField& u_prev,
                                                            const ScenarioConfig& scenario,
                                                            double t_next);

/// One full MMOCAA step: trace, adjust, iterate, solve, ledger update.
std::pair<ConcentrationField, StepDiagnostics> advance_step(const ConcentrationField& state,
                                                            const ScenarioConfig& scenario,
                                                            MassLedger& ledger);

Trajectory run_mmocaa(const ScenarioConfig& scenario);

/// Mode dispatch: Auto sends D=0, m=1 scenarios to the ideal solver,
/// everything else to MMOCAA (D=0, m>1 drops the diffusion term).
Trajectory solve_scenario(const ScenarioConfig& scenario, SolverMode mode = SolverMode::Auto);

}  // namespace chromsim

#endif
