#ifndef CHROMSIM_BLOCKSOLVE_HPP
#define CHROMSIM_BLOCKSOLVE_HPP

#include <span>
#include <vector>

#include "chromsim/characteristics.hpp"
#include "chromsim/field.hpp"

namespace chromsim {

/// One implicit time-step system: m x m blocks on three diagonals plus a
/// right-hand side of length m per node. Row 0 is the inlet Dirichlet
/// closure, row n_x the mirrored-ghost Neumann closure.
struct BlockTridiagonalSystem {
  int nodes = 0;
  int m = 0;
  std::vector<double> lower;  // nodes*m*m, block i couples node i to i-1
  std::vector<double> diag;
  std::vector<double> upper;
  std::vector<double> rhs;  // nodes*m

  void resize(int n, int comps);
};

/// Builds the coupled implicit relation: per interior node i and row k
///   [(I + F A_i) u_i^{new}]_k - (D dt/dx^2)(u_{i+1} - 2 u_i + u_{i-1})_k
///     = (1 + F A_kk) utraced_k,i + F sum_{j != k} A_kj uprev_j,i
/// with Dirichlet inlet row (value = inlet_value) and second-order Neumann
/// outlet row. The diagonal retardation differences along the traced
/// characteristic (so the stationary-phase mass telescopes with the trace
/// when A_kk is the secant based at the traced value); the cross couplings
/// difference at fixed x. coupling holds the m x m matrix per node, F not
/// applied.
void assemble_into(BlockTridiagonalSystem& sys, const TracedField& traced,
                   const ConcentrationField& prev, std::span<const double> coupling,
                   double diffusion, double phase_ratio, double dt, double dx,
                   std::span<const double> inlet_value);

BlockTridiagonalSystem assemble(const TracedField& traced, const ConcentrationField& prev,
                                std::span<const double> coupling, double diffusion,
                                double phase_ratio, double dt, double dx,
                                std::span<const double> inlet_value);

/// Block Thomas elimination; overwrites the blocks and rhs. Pivoting is
/// confined to each m x m block. Throws SolverError with the node index on
/// a singular pivot block.
void solve_in_place(BlockTridiagonalSystem& sys, std::span<double> solution);

std::vector<double> solve(const BlockTridiagonalSystem& sys);

/// Applies the assembled operator to x (residual checks, manufactured
/// solutions).
std::vector<double> apply_operator(const BlockTridiagonalSystem& sys, std::span<const double> x);

}  // namespace chromsim

#endif
