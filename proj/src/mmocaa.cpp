#include "chromsim/mmocaa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "chromsim/blocksolve.hpp"
#include "chromsim/errors.hpp"
#include "chromsim/ideal.hpp"
#include "chromsim/isotherm.hpp"

namespace chromsim {

std::string to_string(SolverMode mode) {
  switch (mode) {
    case SolverMode::Auto: return "auto";
    case SolverMode::Mmocaa: return "mmocaa";
    case SolverMode::Ideal: return "ideal";
    case SolverMode::MmocUnadjusted: return "mmoc-unadjusted";
  }
  return "auto";
}

SolverMode solver_mode_from_string(const std::string& name) {
  if (name == "auto") return SolverMode::Auto;
  if (name == "mmocaa") return SolverMode::Mmocaa;
  if (name == "ideal") return SolverMode::Ideal;
  if (name == "mmoc-unadjusted") return SolverMode::MmocUnadjusted;
  throw ValidationError("unknown solver mode '" + name +
                        "' (expected auto, mmocaa, ideal or mmoc-unadjusted)");
}

namespace {

// Per-node secant coupling blocks for the whole grid. The base state
// provides both the divided-difference anchor and the off-diagonal
// evaluation point; values laid out component-major.
void fill_coupling(std::vector<double>& coupling, std::span<const double> base,
                   std::span<const double> iterate, int m, int nodes, const IsothermParams& p,
                   SecantFreeze freeze) {
  coupling.resize(static_cast<size_t>(nodes) * m * m);
  double uo[8], un[8];
  for (int i = 0; i < nodes; ++i) {
    for (int k = 0; k < m; ++k) {
      uo[k] = base[static_cast<size_t>(k) * nodes + i];
      un[k] = iterate[static_cast<size_t>(k) * nodes + i];
    }
    secant_derivative_into({uo, static_cast<size_t>(m)}, {un, static_cast<size_t>(m)}, p, freeze,
                           {coupling.data() + static_cast<size_t>(i) * m * m,
                            static_cast<size_t>(m) * m});
  }
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double out = 0.0;
  for (size_t i = 0; i < a.size(); ++i) out = std::max(out, std::abs(a[i] - b[i]));
  return out;
}

double max_abs(const std::vector<double>& a) {
  double out = 0.0;
  for (double v : a) out = std::max(out, std::abs(v));
  return out;
}

// Per-component retardation 1 + F dq_k/du_k at the given state: the
// predictor velocities for the characteristic feet.
std::vector<double> tracing_retardation(const ConcentrationField& state,
                                        const ScenarioConfig& cfg) {
  const int m = state.components;
  const int nodes = state.nodes;
  std::vector<double> retard(static_cast<size_t>(m) * nodes);
  double work[8], jac[64];
  for (int i = 0; i < nodes; ++i) {
    for (int j = 0; j < m; ++j) work[j] = state.at(j, i);
    langmuir_jacobian_into({work, static_cast<size_t>(m)}, cfg.isotherm,
                           {jac, static_cast<size_t>(m) * m});
    for (int k = 0; k < m; ++k)
      retard[static_cast<size_t>(k) * nodes + i] =
          std::max(1.0 + cfg.phase_ratio * jac[k * m + k], 1e-6);
  }
  return retard;
}

// Same retardation read off the diagonal of a coupling-block array.
void retardation_from_coupling(std::span<const double> coupling, int m, int nodes,
                               double phase_ratio, std::vector<double>& retard) {
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < nodes; ++i)
      retard[static_cast<size_t>(k) * nodes + i] = std::max(
          1.0 + phase_ratio * coupling[(static_cast<size_t>(i) * m + k) * m + k], 1e-6);
}

// Trace every component back along its retarded characteristic
// dx/dt = v / (1 + F dq_k/du_k), the signal speed of the coupled system.
// Tracing at the bare fluid velocity instead leaves an O(dt) truncation
// term proportional to (v - v_eff)^2 u_xx that swamps the physical
// dispersion on realistic grids.
void trace_retarded(const ConcentrationField& state, const ScenarioConfig& cfg,
                    std::span<const double> retardation, double t_next, double foot_offset,
                    TracedField& out) {
  const int m = state.components;
  const int nodes = state.nodes;
  const int n = nodes - 1;
  out.components = m;
  out.nodes = nodes;
  out.values.resize(static_cast<size_t>(m) * nodes);
  out.feet.resize(static_cast<size_t>(m) * nodes);
  out.stencil_center.assign(static_cast<size_t>(m) * nodes, -1);

  const double v = cfg.column.velocity;
  const double dx = cfg.grid.dx;
  const double dt = cfg.grid.dt;
  const double length = cfg.column.length;

  for (int k = 0; k < m; ++k) {
    const double* uk = state.values.data() + static_cast<size_t>(k) * nodes;
    for (int i = 0; i < nodes; ++i) {
      const double veff = v / retardation[static_cast<size_t>(k) * nodes + i];
      const double x = i * dx;
      double foot = foot_of_characteristic(x, veff, dt) + foot_offset;
      out.feet[static_cast<size_t>(k) * nodes + i] = foot;
      if (foot < 0.0) {
        const double t_cross = t_next - x / veff;
        const bool feeding = t_cross > 0.0 && t_cross <= cfg.injection.duration;
        out.at(k, i) = feeding ? cfg.injection.feed[k] : 0.0;
        continue;
      }
      if (foot > length) foot = length;
      int center = static_cast<int>(std::lround(foot / dx));
      if (center < 1) center = 1;
      if (center > n - 1) center = n - 1;
      out.stencil_center[static_cast<size_t>(k) * nodes + i] = center;
      const double t = foot / dx - center;
      out.at(k, i) = 0.5 * t * (t - 1.0) * uk[center - 1] + (1.0 - t * t) * uk[center] +
                     0.5 * t * (t + 1.0) * uk[center + 1];
    }
  }
}

std::vector<std::int8_t> decide_branches(const ScenarioConfig& cfg, const MassLedger& ledger) {
  const int m = cfg.components();
  std::vector<std::int8_t> branch(m, 0);
  if (!cfg.solver.mass_adjust) return branch;
  for (int k = 0; k < m; ++k) {
    const double tol = cfg.solver.mass_tol_rel * std::abs(ledger.injected[k]);
    if (ledger.deficit[k] > tol) branch[k] = 1;
    else if (ledger.deficit[k] < -tol) branch[k] = -1;
  }
  return branch;
}

void apply_adjustment(const ConcentrationField& state, const ScenarioConfig& cfg,
                      std::span<const double> retardation, double t_next,
                      const std::vector<std::int8_t>& branch, TracedField& traced,
                      TracedField& plus, TracedField& minus) {
  const bool any = std::any_of(branch.begin(), branch.end(),
                               [](std::int8_t b) { return b != 0; });
  if (!any) return;
  const int nodes = state.nodes;
  const double shift = cfg.solver.eta * cfg.grid.dt * cfg.grid.dx;
  trace_retarded(state, cfg, retardation, t_next, shift, plus);
  trace_retarded(state, cfg, retardation, t_next, -shift, minus);
  for (int k = 0; k < state.components; ++k) {
    if (branch[k] == 0) continue;
    if (cfg.solver.adjust_mode == AdjustMode::Pointwise) {
      for (int i = 0; i < nodes; ++i) {
        const double hi = std::max(plus.at(k, i), minus.at(k, i));
        const double lo = std::min(plus.at(k, i), minus.at(k, i));
        traced.at(k, i) = branch[k] > 0 ? hi : lo;
      }
    } else {
      // Field granularity: take whichever whole candidate carries more
      // (or less) mass for this component.
      double sum_plus = 0.0, sum_minus = 0.0;
      for (int i = 0; i < nodes; ++i) {
        const double w = (i == 0 || i == nodes - 1) ? 0.5 : 1.0;
        sum_plus += w * plus.at(k, i);
        sum_minus += w * minus.at(k, i);
      }
      const bool take_plus = branch[k] > 0 ? sum_plus >= sum_minus : sum_plus < sum_minus;
      const TracedField& pick = take_plus ? plus : minus;
      for (int i = 0; i < nodes; ++i) traced.at(k, i) = pick.at(k, i);
    }
  }
}

struct InnerResult {
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

// Secant-linearized fixed point on the algebraic coupling (divided
// differences between the old state and the iterate) for a fixed traced
// field.
InnerResult inner_iterate(const TracedField& traced, const ConcentrationField& u_prev,
                          const ScenarioConfig& cfg, double t_next, ConcentrationField& out) {
  const int m = u_prev.components;
  const int nodes = u_prev.nodes;

  std::vector<double> inlet(m);
  injection_value_into(cfg.injection, t_next, inlet);

  std::vector<double> coupling, coupling_next;
  fill_coupling(coupling, u_prev.values, u_prev.values, m, nodes, cfg.isotherm,
                cfg.solver.secant_freeze);

  BlockTridiagonalSystem sys;
  std::vector<double> solution(static_cast<size_t>(nodes) * m);
  ConcentrationField u_iter = u_prev;
  out = u_prev;

  InnerResult result;
  for (int l = 1; l <= cfg.solver.inner_cap; ++l) {
    assemble_into(sys, traced, u_prev, coupling, cfg.diffusion, cfg.phase_ratio, cfg.grid.dt,
                  cfg.grid.dx, inlet);
    solve_in_place(sys, solution);
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < nodes; ++i) out.at(k, i) = solution[static_cast<size_t>(i) * m + k];

    double delta_u = 0.0;
    for (size_t j = 0; j < out.values.size(); ++j)
      delta_u = std::max(delta_u, std::abs(out.values[j] - u_iter.values[j]));

    fill_coupling(coupling_next, u_prev.values, out.values, m, nodes, cfg.isotherm,
                  cfg.solver.secant_freeze);
    const double delta_a = max_abs_diff(coupling, coupling_next);
    const double a_scale = 1.0 + max_abs(coupling_next);

    result.iterations = l;
    result.residual = delta_u;
    coupling.swap(coupling_next);
    u_iter.values = out.values;

    // A stationary coupling means the next sweep would reproduce this
    // iterate exactly; the linear isotherm lands here on the first pass.
    if (delta_a <= 1e-14 * a_scale || delta_u <= cfg.solver.inner_tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

// One full step: predictor feet from the old-state Jacobian, then the
// secant iteration refreshing both the algebra and the feet (front speeds
// become the step's jump secants). Feet freeze permanently once the
// iterate increment stalls: at steep fronts the foot-position map can
// two-cycle, since a fraction-of-a-cell foot move changes the traced
// value by the front height, and the algebra-only iteration always
// contracts.
InnerResult step_solve(const ConcentrationField& u_prev, const ScenarioConfig& cfg,
                       double t_next, const std::vector<std::int8_t>& branch,
                       ConcentrationField& out) {
  const int m = u_prev.components;
  const int nodes = u_prev.nodes;

  std::vector<double> inlet(m);
  injection_value_into(cfg.injection, t_next, inlet);

  std::vector<double> retardation = tracing_retardation(u_prev, cfg);
  TracedField traced, plus, minus;
  trace_retarded(u_prev, cfg, retardation, t_next, 0.0, traced);
  apply_adjustment(u_prev, cfg, retardation, t_next, branch, traced, plus, minus);

  std::vector<double> coupling, coupling_next;
  fill_coupling(coupling, u_prev.values, u_prev.values, m, nodes, cfg.isotherm,
                cfg.solver.secant_freeze);

  BlockTridiagonalSystem sys;
  std::vector<double> solution(static_cast<size_t>(nodes) * m);
  ConcentrationField u_iter = u_prev;
  out = u_prev;

  InnerResult result;
  bool feet_live = true;
  int stalls = 0;
  double prev_delta = std::numeric_limits<double>::infinity();
  for (int l = 1; l <= cfg.solver.inner_cap; ++l) {
    assemble_into(sys, traced, u_prev, coupling, cfg.diffusion, cfg.phase_ratio, cfg.grid.dt,
                  cfg.grid.dx, inlet);
    solve_in_place(sys, solution);
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < nodes; ++i) out.at(k, i) = solution[static_cast<size_t>(i) * m + k];

    double delta_u = 0.0;
    for (size_t j = 0; j < out.values.size(); ++j)
      delta_u = std::max(delta_u, std::abs(out.values[j] - u_iter.values[j]));

    fill_coupling(coupling_next, u_prev.values, out.values, m, nodes, cfg.isotherm,
                  cfg.solver.secant_freeze);
    const double delta_a = max_abs_diff(coupling, coupling_next);
    const double a_scale = 1.0 + max_abs(coupling_next);

    result.iterations = l;
    result.residual = delta_u;
    coupling.swap(coupling_next);
    u_iter.values = out.values;

    if (delta_a <= 1e-14 * a_scale || delta_u <= cfg.solver.inner_tol) {
      result.converged = true;
      break;
    }
    if (feet_live) {
      if (delta_u > 0.7 * prev_delta && ++stalls >= 2) {
        feet_live = false;
      } else {
        retardation_from_coupling(coupling, m, nodes, cfg.phase_ratio, retardation);
        trace_retarded(u_prev, cfg, retardation, t_next, 0.0, traced);
        apply_adjustment(u_prev, cfg, retardation, t_next, branch, traced, plus, minus);
      }
    }
    prev_delta = delta_u;
  }
  return result;
}

}  // namespace

TracedField mass_adjusted_trace(const ConcentrationField& state, const ScenarioConfig& scenario,
                                const MassLedger& ledger,
                                std::vector<std::int8_t>* branch_out) {
  const double t_next = (state.level + 1) * scenario.grid.dt;
  const std::vector<double> retardation = tracing_retardation(state, scenario);
  std::vector<std::int8_t> branch = decide_branches(scenario, ledger);
  TracedField traced, plus, minus;
  trace_retarded(state, scenario, retardation, t_next, 0.0, traced);
  apply_adjustment(state, scenario, retardation, t_next, branch, traced, plus, minus);
  if (branch_out) *branch_out = std::move(branch);
  return traced;
}

std::tuple<ConcentrationField, int, double> inner_iteration(const TracedField& traced,
                                                            const ConcentrationField& u_prev,
                                                            const ScenarioConfig& scenario,
                                                            double t_next) {
  ConcentrationField out;
  const InnerResult res = inner_iterate(traced, u_prev, scenario, t_next, out);
  return {std::move(out), res.iterations, res.residual};
}

std::pair<ConcentrationField, StepDiagnostics> advance_step(const ConcentrationField& state,
                                                            const ScenarioConfig& scenario,
                                                            MassLedger& ledger) {
  StepDiagnostics diag;
  diag.deficit_before = ledger.deficit;

  const double t_next = (state.level + 1) * scenario.grid.dt;
  diag.branch = decide_branches(scenario, ledger);

  ConcentrationField next;
  const InnerResult res = step_solve(state, scenario, t_next, diag.branch, next);
  diag.iterations = res.iterations;
  diag.residual = res.residual;
  diag.converged = res.converged;
  if (!res.converged) {
    std::ostringstream msg;
    msg << "inner iteration did not converge at step " << state.level + 1 << " (residual "
        << res.residual << " after " << res.iterations << " iterations)";
    throw SolverError(msg.str());
  }

  next.level = state.level + 1;
  next.time = t_next;
  advance_ledger(ledger, next, scenario.injection, scenario.column.velocity, scenario.grid.dx,
                 scenario.grid.dt, scenario.isotherm);
  return {std::move(next), std::move(diag)};
}

Trajectory run_mmocaa(const ScenarioConfig& scenario) {
  if (!scenario.validated) throw ValidationError("run_mmocaa requires a validated scenario");
  const int m = scenario.components();
  const int nodes = scenario.grid.nodes();
  const int steps = scenario.grid.steps;

  ConcentrationField u(m, nodes);
  if (!scenario.initial.empty()) u.values = scenario.initial;

  Trajectory traj;
  traj.mode = scenario.solver.mass_adjust ? "mmocaa" : "mmoc-unadjusted";
  traj.times.reserve(steps + 1);
  traj.outlet.assign(m, {});
  for (int k = 0; k < m; ++k) traj.outlet[k].reserve(steps + 1);
  traj.steps.reserve(steps);
  traj.min_values.assign(m, std::numeric_limits<double>::infinity());

  MassLedger ledger = make_ledger(u, scenario.isotherm, scenario.grid.dx);

  std::vector<double> wanted = scenario.solver.snapshot_times;
  std::sort(wanted.begin(), wanted.end());
  size_t next_snap = 0;

  auto record_level = [&](const ConcentrationField& state) {
    traj.times.push_back(state.time);
    for (int k = 0; k < m; ++k) {
      traj.outlet[k].push_back(state.at(k, nodes - 1));
      for (int i = 0; i < nodes; ++i)
        traj.min_values[k] = std::min(traj.min_values[k], state.at(k, i));
    }
    while (next_snap < wanted.size() && wanted[next_snap] <= state.time + 1e-12) {
      traj.snapshots.push_back(
          {wanted[next_snap], state.time, state.level, m, state.values});
      ++next_snap;
    }
  };

  record_level(u);
  for (int n = 0; n < steps; ++n) {
    auto [next, diag] = advance_step(u, scenario, ledger);
    u = std::move(next);
    traj.steps.push_back(std::move(diag));
    record_level(u);
  }
  traj.ledger = std::move(ledger);
  return traj;
}

Trajectory solve_scenario(const ScenarioConfig& scenario, SolverMode mode) {
  if (!scenario.validated) throw ValidationError("solve_scenario requires a validated scenario");
  switch (mode) {
    case SolverMode::Auto:
      if (scenario.diffusion == 0.0 && scenario.components() == 1) return run_ideal(scenario);
      return run_mmocaa(scenario);
    case SolverMode::Mmocaa:
      return run_mmocaa(scenario);
    case SolverMode::MmocUnadjusted: {
      ScenarioConfig off = scenario;
      off.solver.mass_adjust = false;
      return run_mmocaa(off);
    }
    case SolverMode::Ideal:
      if (scenario.components() != 1)
        throw ValidationError("ideal mode supports a single component only");
      if (scenario.diffusion != 0.0)
        throw ValidationError("ideal mode requires zero diffusion (D = 0)");
      return run_ideal(scenario);
  }
  throw ValidationError("unhandled solver mode");
}

}  // namespace chromsim
