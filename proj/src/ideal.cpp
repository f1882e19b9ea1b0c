#include "chromsim/ideal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "chromsim/errors.hpp"

namespace chromsim {

double w_of_u(double u, double phase_ratio, double a, double b) {
  return u + phase_ratio * a * u / (1.0 + b * u);
}

double u_of_w(double w, double phase_ratio, double a, double b) {
  const double q = phase_ratio * a + 1.0 - b * w;
  const double disc = q * q + 4.0 * b * w;
  if (disc < 0.0) throw SolverError("transform inversion failed: negative discriminant");
  const double root = std::sqrt(disc);
  if (q >= 0.0) return 2.0 * w / (q + root);  // cancellation-free near w = 0; exact for b = 0
  return (-q + root) / (2.0 * b);
}

double w_tt_of(double u, double ux, double uxx, double phase_ratio, double a, double b,
               double velocity) {
  const double s = 1.0 + b * u;
  const double fa = phase_ratio * a;
  const double denom = 1.0 + fa / (s * s);
  const double packed = s * s + fa;
  return velocity * velocity * uxx / denom +
         2.0 * velocity * velocity * fa * b * s * ux * ux / (packed * packed);
}

void lw_update(std::span<const double> u, double phase_ratio, double a, double b, double velocity,
               double dt, double dx, bool corrected, double inlet_next, std::span<double> w_out) {
  const int n = static_cast<int>(u.size()) - 1;
  const double c = velocity * dt / dx;
  const double fa = phase_ratio * a;

  w_out[0] = w_of_u(inlet_next, phase_ratio, a, b);
  for (int i = 1; i <= n; ++i) {
    const double left = u[i - 1];
    const double right = (i == n) ? u[i - 1] : u[i + 1];  // mirrored ghost at the outlet
    const double d1 = right - left;
    const double d2 = right - 2.0 * u[i] + left;
    const double s = 1.0 + b * u[i];
    const double grad2 = corrected ? 0.25 * d1 * d1 : d1 * d1;
    const double packed = s * s + fa;
    w_out[i] = w_of_u(u[i], phase_ratio, a, b) - 0.5 * c * d1 +
               0.5 * c * c * (d2 / (1.0 + fa / (s * s)) + 2.0 * fa * b * s * grad2 / (packed * packed));
  }
}

Trajectory run_ideal(const ScenarioConfig& scenario) {
  if (!scenario.validated) throw ValidationError("run_ideal requires a validated scenario");
  if (scenario.components() != 1)
    throw ValidationError("the ideal solver handles a single component only");
  if (scenario.diffusion != 0.0)
    throw ValidationError("the ideal solver requires zero diffusion (D = 0)");

  const double a = scenario.isotherm.a[0];
  const double b = scenario.isotherm.b[0];
  const double fr = scenario.phase_ratio;
  const double v = scenario.column.velocity;
  const double dt = scenario.grid.dt;
  const double dx = scenario.grid.dx;
  const int nodes = scenario.grid.nodes();
  const int steps = scenario.grid.steps;

  // Stability is set by the fastest retarded signal, at the largest
  // admissible concentration.
  double u_max = scenario.injection.feed[0];
  for (double u0 : scenario.initial) u_max = std::max(u_max, u0);
  const double s_max = 1.0 + b * u_max;
  const double r_min = 1.0 + fr * a / (s_max * s_max);
  const double eff_cfl = v * dt / dx / r_min;
  if (eff_cfl > 1.0 + 1e-12) {
    std::ostringstream msg;
    msg << "ideal solver stability bound violated: effective CFL " << eff_cfl
        << " exceeds 1 (raise n_t)";
    throw ValidationError(msg.str());
  }

  ConcentrationField u(1, nodes);
  if (!scenario.initial.empty()) u.values = scenario.initial;

  Trajectory traj;
  traj.mode = "ideal";
  traj.times.reserve(steps + 1);
  traj.outlet.assign(1, {});
  traj.outlet[0].reserve(steps + 1);
  traj.min_values.assign(1, std::numeric_limits<double>::infinity());

  MassLedger ledger = make_ledger(u, scenario.isotherm, dx);

  std::vector<double> wanted = scenario.solver.snapshot_times;
  std::sort(wanted.begin(), wanted.end());
  size_t next_snap = 0;

  auto record_level = [&](const ConcentrationField& state) {
    traj.times.push_back(state.time);
    traj.outlet[0].push_back(state.at(0, nodes - 1));
    for (int i = 0; i < nodes; ++i)
      traj.min_values[0] = std::min(traj.min_values[0], state.at(0, i));
    while (next_snap < wanted.size() && wanted[next_snap] <= state.time + 1e-12) {
      traj.snapshots.push_back({wanted[next_snap], state.time, state.level, 1, state.values});
      ++next_snap;
    }
  };

  record_level(u);
  std::vector<double> w(nodes);
  for (int n = 0; n < steps; ++n) {
    const double t_next = (n + 1) * dt;
    const double inlet = injection_value(scenario.injection, t_next)[0];
    StepDiagnostics diag;
    diag.iterations = 1;
    diag.converged = true;
    diag.branch.assign(1, 0);
    diag.deficit_before = ledger.deficit;
    lw_update(u.values, fr, a, b, v, dt, dx, scenario.solver.corrected_310, inlet, w);
    for (int i = 0; i < nodes; ++i) u.values[i] = u_of_w(w[i], fr, a, b);
    u.level = n + 1;
    u.time = t_next;
    advance_ledger(ledger, u, scenario.injection, v, dx, dt, scenario.isotherm);
    traj.steps.push_back(std::move(diag));
    record_level(u);
  }
  traj.ledger = std::move(ledger);
  return traj;
}

}  // namespace chromsim
