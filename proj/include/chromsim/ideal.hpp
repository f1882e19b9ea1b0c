#ifndef CHROMSIM_IDEAL_HPP
#define CHROMSIM_IDEAL_HPP

#include <span>

#include "chromsim/mmocaa.hpp"
#include "chromsim/scenario.hpp"

namespace chromsim {

/// Transformed variable w = u + F a u / (1 + b u).
double w_of_u(double u, double phase_ratio, double a, double b);

/// Inverse transform: the non-negative root of b u^2 + (Fa+1-bw) u - w = 0,
/// reducing to w / (1 + Fa) for b = 0. Evaluated in the cancellation-free
/// form.
double u_of_w(double w, double phase_ratio, double a, double b);

/// Second time derivative of w expressed through spatial derivatives of u.
double w_tt_of(double u, double ux, double uxx, double phase_ratio, double a, double b,
               double velocity);

/// One explicit update of the transformed variable on the whole grid:
///   w_i^{n+1} = w_i^n - (v/2)(dt/dx) dx1 u + (v^2/2)(dt/dx)^2 *
///               [dx2 u / (1 + Fa/(1+b u)^2) + 2 F a b (1+b u)(dx1 u)^2 / ((1+b u)^2 + Fa)^2]
/// with dx1 u = u_{i+1}-u_{i-1} and dx2 u = u_{i+1}-2u_i+u_{i-1}. The
/// corrected variant replaces (dx1 u)^2 by (dx1 u / 2)^2, which is the
/// reading consistent with the continuous w_tt; see README. The inlet node
/// takes inlet_next, the outlet uses the mirrored ghost.
void lw_update(std::span<const double> u, double phase_ratio, double a, double b, double velocity,
               double dt, double dx, bool corrected, double inlet_next, std::span<double> w_out);

/// Single-component zero-dispersion solver: advance w, recover u, repeat.
/// Requires m = 1 and D = 0; enforces the effective-speed stability bound
/// (v dt/dx) / R_min <= 1 where R_min is the smallest retardation over the
/// admissible concentration range.
Trajectory run_ideal(const ScenarioConfig& scenario);

}  // namespace chromsim

#endif
