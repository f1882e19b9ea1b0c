#include "chromsim/isotherm.hpp"

#include <cmath>

#include "chromsim/errors.hpp"

namespace chromsim {

double langmuir_denominator(std::span<const double> u, const IsothermParams& p) {
  double s = 1.0;
  for (size_t j = 0; j < u.size(); ++j) s += p.b[j] * u[j];
  return s;
}

double langmuir_q_into(std::span<const double> u, const IsothermParams& p,
                       std::span<double> q_out) {
  const double s = langmuir_denominator(u, p);
  if (!(s > 1e-12))
    throw SolverError("isotherm evaluated at a non-physical state (denominator <= 0)");
  for (size_t i = 0; i < u.size(); ++i) q_out[i] = p.a[i] * u[i] / s;
  return s;
}

IsothermEval langmuir_q(std::span<const double> u, const IsothermParams& p) {
  IsothermEval eval;
  eval.q.resize(u.size());
  eval.denominator = langmuir_q_into(u, p, eval.q);
  return eval;
}

void langmuir_jacobian_into(std::span<const double> u, const IsothermParams& p,
                            std::span<double> out) {
  const int m = static_cast<int>(u.size());
  const double s = langmuir_denominator(u, p);
  if (!(s > 1e-12))
    throw SolverError("isotherm Jacobian at a non-physical state (denominator <= 0)");
  const double inv_s2 = 1.0 / (s * s);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double kron = (i == j) ? s : 0.0;
      out[static_cast<size_t>(i) * m + j] = p.a[i] * (kron - u[i] * p.b[j]) * inv_s2;
    }
  }
}

CouplingMatrix langmuir_jacobian(std::span<const double> u, const IsothermParams& p) {
  CouplingMatrix out;
  out.m = static_cast<int>(u.size());
  out.entries.resize(static_cast<size_t>(out.m) * out.m);
  out.at_state.assign(u.begin(), u.end());
  langmuir_jacobian_into(u, p, out.entries);
  return out;
}

void secant_derivative_into(std::span<const double> u_old, std::span<const double> u_new,
                            const IsothermParams& p, SecantFreeze freeze, std::span<double> out) {
  const int m = static_cast<int>(u_old.size());
  langmuir_jacobian_into(u_old, p, out);  // off-diagonals and fallback diagonal

  // Divided difference of q_i in its own argument, other components frozen.
  double scratch[8];
  std::vector<double> heap;
  double* frozen = nullptr;
  if (m <= 8) {
    frozen = scratch;
  } else {
    heap.resize(static_cast<size_t>(m));
    frozen = heap.data();
  }
  const std::span<const double> base = (freeze == SecantFreeze::Old) ? u_old : u_new;
  for (int i = 0; i < m; ++i) {
    const double du = u_new[i] - u_old[i];
    if (std::abs(du) < kSecantFallbackEps) continue;
    for (int j = 0; j < m; ++j) frozen[j] = base[j];
    frozen[i] = u_new[i];
    double s_hi = 1.0, s_lo = 1.0;
    for (int j = 0; j < m; ++j) s_hi += p.b[j] * frozen[j];
    const double q_hi = p.a[i] * frozen[i] / s_hi;
    frozen[i] = u_old[i];
    for (int j = 0; j < m; ++j) s_lo += p.b[j] * frozen[j];
    if (!(s_hi > 1e-12) || !(s_lo > 1e-12))
      throw SolverError("secant derivative at a non-physical state (denominator <= 0)");
    const double q_lo = p.a[i] * frozen[i] / s_lo;
    out[static_cast<size_t>(i) * m + i] = (q_hi - q_lo) / du;
  }
}

CouplingMatrix secant_derivative(std::span<const double> u_old, std::span<const double> u_new,
                                 const IsothermParams& p, SecantFreeze freeze) {
  CouplingMatrix out;
  out.m = static_cast<int>(u_old.size());
  out.entries.resize(static_cast<size_t>(out.m) * out.m);
  out.at_state.assign(u_old.begin(), u_old.end());
  secant_derivative_into(u_old, u_new, p, freeze, out.entries);
  return out;
}

}  // namespace chromsim
