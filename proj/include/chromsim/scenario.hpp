#ifndef CHROMSIM_SCENARIO_HPP
#define CHROMSIM_SCENARIO_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace chromsim {

/// Column geometry and transport constants. Porosity/phase ratio and
/// plate count/diffusion are alternative parameterizations: exactly one
/// of each pair must be supplied.
struct ColumnSpec {
  double length = 0.0;    // L
  double velocity = 0.0;  // interstitial velocity v
  std::optional<double> porosity;     // eps, 0 < eps < 1
  std::optional<double> phase_ratio;  // F = (1 - eps) / eps
  std::optional<double> plate_count;  // N_t
  std::optional<double> diffusion;    // D, >= 0 (0 selects the ideal model)

  bool operator==(const ColumnSpec&) const = default;
};

struct DerivedCoefficients {
  double diffusion = 0.0;    // D = L v / (2 N_t) when given via plates
  double phase_ratio = 0.0;  // F = (1 - eps) / eps when given via porosity
};

/// Langmuir constants for all components plus the phase ratio that
/// multiplies the stationary-phase term.
struct IsothermParams {
  std::vector<double> a;     // Henry constants, a_i > 0
  std::vector<double> b;     // adsorption constants, b_i >= 0 (0 = linear)
  double phase_ratio = 0.0;  // F, filled in by validate_scenario

  int components() const { return static_cast<int>(a.size()); }
  bool operator==(const IsothermParams&) const = default;
};

enum class InjectionKind { Rectangular };

/// Rectangular inlet pulse: feed concentration on (0, t_inj], zero after.
struct InjectionProfile {
  std::vector<double> feed;  // u_f per component
  double duration = 0.0;     // t_inj
  InjectionKind kind = InjectionKind::Rectangular;

  bool operator==(const InjectionProfile&) const = default;
};

struct GridSpec {
  int cells = 0;         // n_x, nodes are 0..n_x
  int steps = 0;         // n_t
  double horizon = 0.0;  // t_max
  double dx = 0.0;       // derived L / n_x
  double dt = 0.0;       // derived t_max / n_t

  int nodes() const { return cells + 1; }
  bool operator==(const GridSpec&) const = default;
};

enum class AdjustMode {
  Pointwise,  // per-component branch, pointwise max/min of the two candidates
  Field       // per-component branch, whole candidate field chosen by its holdup
};

enum class SecantFreeze {
  Old,      // divided difference holds the other components at u^n
  Iterate,  // alternative reading: holds them at the current iterate
};

struct SolverOptions {
  double eta = 0.5;            // perturbation constant, 0 < eta < 1
  double inner_tol = 1e-10;    // inner-iteration stop tolerance (max norm)
  int inner_cap = 50;          // inner-iteration limit
  bool mass_adjust = true;     // adjusted-advection selection on/off
  int relax_cfl = 1;           // admit v dt/dx < relax_cfl (1 = strict)
  bool corrected_310 = false;  // ideal model: halved first-difference in the
                               // quadratic gradient term (see README)
  AdjustMode adjust_mode = AdjustMode::Pointwise;
  SecantFreeze secant_freeze = SecantFreeze::Old;
  double mass_tol_rel = 1e-12;  // dead band, relative to injected mass
  std::vector<double> snapshot_times;

  bool operator==(const SolverOptions&) const = default;
};

/// Full problem description. validate_scenario() checks every invariant
/// and fills the derived members; solvers accept validated configs only.
struct ScenarioConfig {
  ColumnSpec column;
  IsothermParams isotherm;
  InjectionProfile injection;
  GridSpec grid;
  std::vector<double> initial;  // m*(n_x+1) nodal values, empty = zero
  SolverOptions solver;

  double diffusion = 0.0;    // derived D
  double phase_ratio = 0.0;  // derived F
  double cfl = 0.0;          // derived v dt / dx
  bool validated = false;

  int components() const { return isotherm.components(); }
  bool operator==(const ScenarioConfig&) const = default;
};

DerivedCoefficients derive_coefficients(const ColumnSpec& column);

/// Inverse maps of derive_coefficients, used for round-trip checks and
/// manifest echoes.
double porosity_of_phase_ratio(double phase_ratio);
double plate_count_of_diffusion(double length, double velocity, double diffusion);

std::vector<double> injection_value(const InjectionProfile& profile, double t);
void injection_value_into(const InjectionProfile& profile, double t, std::span<double> out);

/// Checks all invariants, computes D, F, dx, dt and the CFL ratio.
/// Throws ValidationError naming the violated invariant.
ScenarioConfig validate_scenario(const ScenarioConfig& raw);

/// Reads the sectioned key-value scenario format (see README). The result
/// is unvalidated; callers apply overrides and then validate.
ScenarioConfig load_scenario_file(const std::string& path);

/// Stable content hash of everything that influences a run; keys the
/// reference cache.
std::string scenario_fingerprint(const ScenarioConfig& config);

/// Same physics on a different grid, revalidated. A non-empty initial
/// condition is resampled linearly onto the new nodes.
ScenarioConfig with_grid(const ScenarioConfig& scenario, int cells, int steps);

}  // namespace chromsim

#endif
