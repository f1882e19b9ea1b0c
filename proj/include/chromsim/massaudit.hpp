#ifndef CHROMSIM_MASSAUDIT_HPP
#define CHROMSIM_MASSAUDIT_HPP

#include <span>
#include <vector>

#include "chromsim/field.hpp"
#include "chromsim/scenario.hpp"

namespace chromsim {

/// Per-component mass bookkeeping over a run. "injected" folds in the mass
/// initially present in the column, so deficit = injected - holdup - outflow
/// starts at exactly zero. History rows are stored flat as [level*m + k].
struct MassLedger {
  int components = 0;
  std::vector<double> injected;
  std::vector<double> holdup;
  std::vector<double> outflow;
  std::vector<double> deficit;
  std::vector<double> initial_mass;
  std::vector<double> last_outlet;  // previous-level outlet values for the trapezoid

  std::vector<double> times;
  std::vector<double> hist_injected;
  std::vector<double> hist_holdup;
  std::vector<double> hist_outflow;
  std::vector<double> hist_deficit;

  int levels() const { return static_cast<int>(times.size()); }
};

/// v * integral of the inlet profile up to t; exact for the rectangular
/// pulse: v * u_f * min(t, t_inj).
std::vector<double> injected_mass(const InjectionProfile& profile, double t, double velocity);

/// Trapezoidal quadrature of u + F q(u) over the column.
std::vector<double> column_holdup(const ConcentrationField& state, const IsothermParams& p,
                                  double dx);

/// Accumulated convective outflow v*dt*sum_{k=1..n} (u^k + u^{k-1})/2 from
/// an outlet series that includes level 0. Trapezoidal in time: the
/// end-of-step rectangle reads several grid cells of phantom deficit into
/// the ledger while a front crosses the outlet, which misleads the
/// adjustment into trading real mass against a bookkeeping transient.
std::vector<double> outflow_mass(const std::vector<std::vector<double>>& outlet_series,
                                 double velocity, double dt);

std::vector<double> deficit(const MassLedger& ledger);

MassLedger make_ledger(const ConcentrationField& initial_state, const IsothermParams& p,
                       double dx);

/// Advances the ledger to the new level: adds the outlet rectangle, refreshes
/// the holdup, and re-evaluates the exact injected integral.
void advance_ledger(MassLedger& ledger, const ConcentrationField& state,
                    const InjectionProfile& profile, double velocity, double dx, double dt,
                    const IsothermParams& p);

}  // namespace chromsim

#endif
