#ifndef CHROMSIM_ISOTHERM_HPP
#define CHROMSIM_ISOTHERM_HPP

#include <span>
#include <vector>

#include "chromsim/scenario.hpp"

namespace chromsim {

/// Stationary-phase concentrations q_i = a_i u_i / (1 + sum_j b_j u_j)
/// together with the shared denominator.
struct IsothermEval {
  std::vector<double> q;
  double denominator = 1.0;  // S = 1 + sum_j b_j u_j
};

/// dq_i/du_j at one state, row-major.
struct CouplingMatrix {
  int m = 0;
  std::vector<double> entries;
  std::vector<double> at_state;

  double operator()(int i, int j) const { return entries[static_cast<size_t>(i) * m + j]; }
};

double langmuir_denominator(std::span<const double> u, const IsothermParams& p);

IsothermEval langmuir_q(std::span<const double> u, const IsothermParams& p);
/// Allocation-free kernel; returns the denominator.
double langmuir_q_into(std::span<const double> u, const IsothermParams& p, std::span<double> q_out);

CouplingMatrix langmuir_jacobian(std::span<const double> u, const IsothermParams& p);
void langmuir_jacobian_into(std::span<const double> u, const IsothermParams& p, std::span<double> out);

/// Divided-difference coupling used by the inner iteration: diagonal entries
/// are secants of q_i in u_i between the old state and the iterate (falling
/// back to the analytic derivative below eps_sec), off-diagonals come from
/// the analytic Jacobian at u_old.
CouplingMatrix secant_derivative(std::span<const double> u_old, std::span<const double> u_new,
                                 const IsothermParams& p,
                                 SecantFreeze freeze = SecantFreeze::Old);
void secant_derivative_into(std::span<const double> u_old, std::span<const double> u_new,
                            const IsothermParams& p, SecantFreeze freeze, std::span<double> out);

/// Increment below which the secant falls back to the analytic diagonal.
inline constexpr double kSecantFallbackEps = 1e-10;

}  // namespace chromsim

#endif
