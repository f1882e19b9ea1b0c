#include "chromsim/blocksolve.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "chromsim/errors.hpp"

namespace chromsim {

void BlockTridiagonalSystem::resize(int n, int comps) {
  nodes = n;
  m = comps;
  const size_t bm = static_cast<size_t>(n) * comps * comps;
  lower.assign(bm, 0.0);
  diag.assign(bm, 0.0);
  upper.assign(bm, 0.0);
  rhs.assign(static_cast<size_t>(n) * comps, 0.0);
}

void assemble_into(BlockTridiagonalSystem& sys, const TracedField& traced,
                   const ConcentrationField& prev, std::span<const double> coupling,
                   double diffusion, double phase_ratio, double dt, double dx,
                   std::span<const double> inlet_value) {
  const int m = prev.components;
  const int nodes = prev.nodes;
  if (traced.nodes != nodes || traced.components != m)
    throw ValidationError("assemble: traced field shape does not match the state");
  if (coupling.size() != static_cast<size_t>(nodes) * m * m)
    throw ValidationError("assemble: coupling block count does not match the grid");
  if (inlet_value.size() != static_cast<size_t>(m))
    throw ValidationError("assemble: inlet value length does not match components");

  sys.resize(nodes, m);
  const double r = diffusion * dt / (dx * dx);
  const int mm = m * m;

  // Inlet Dirichlet row.
  for (int k = 0; k < m; ++k) {
    sys.diag[static_cast<size_t>(k) * m + k] = 1.0;
    sys.rhs[static_cast<size_t>(k)] = inlet_value[k];
  }

  for (int i = 1; i < nodes; ++i) {
    const bool outlet = (i == nodes - 1);
    double* d = sys.diag.data() + static_cast<size_t>(i) * mm;
    double* lo = sys.lower.data() + static_cast<size_t>(i) * mm;
    double* up = sys.upper.data() + static_cast<size_t>(i) * mm;
    double* b = sys.rhs.data() + static_cast<size_t>(i) * m;
    const double* A = coupling.data() + static_cast<size_t>(i) * mm;

    for (int row = 0; row < m; ++row) {
      for (int col = 0; col < m; ++col) {
        double v = phase_ratio * A[row * m + col];
        if (row == col) v += 1.0 + 2.0 * r;
        d[row * m + col] = v;
      }
      // Mirrored ghost at the outlet folds the upper neighbor into the lower.
      lo[row * m + row] = outlet ? -2.0 * r : -r;
      if (!outlet) up[row * m + row] = -r;
      // Retardation rides along the characteristic; cross couplings
      // difference at fixed x.
      double acc = (1.0 + phase_ratio * A[row * m + row]) * traced.at(row, i);
      for (int col = 0; col < m; ++col)
        if (col != row) acc += phase_ratio * A[row * m + col] * prev.at(col, i);
      b[row] = acc;
    }
  }
}

BlockTridiagonalSystem assemble(const TracedField& traced, const ConcentrationField& prev,
                                std::span<const double> coupling, double diffusion,
                                double phase_ratio, double dt, double dx,
                                std::span<const double> inlet_value) {
  BlockTridiagonalSystem sys;
  assemble_into(sys, traced, prev, coupling, diffusion, phase_ratio, dt, dx, inlet_value);
  return sys;
}

namespace {

// LU with partial pivoting of one m x m block; perm holds the row order.
void factor_block(double* a, int* perm, int m, int node) {
  for (int i = 0; i < m; ++i) perm[i] = i;
  for (int col = 0; col < m; ++col) {
    int p = col;
    double best = std::abs(a[perm[col] * m + col]);
    for (int row = col + 1; row < m; ++row) {
      const double cand = std::abs(a[perm[row] * m + col]);
      if (cand > best) {
        best = cand;
        p = row;
      }
    }
    if (!(best > 1e-300))
      throw SolverError("singular pivot block at node " + std::to_string(node));
    std::swap(perm[col], perm[p]);
    const double piv = a[perm[col] * m + col];
    for (int row = col + 1; row < m; ++row) {
      const double f = a[perm[row] * m + col] / piv;
      a[perm[row] * m + col] = f;
      for (int j = col + 1; j < m; ++j) a[perm[row] * m + j] -= f * a[perm[col] * m + j];
    }
  }
}

// x := A^{-1} b for a factored block.
void block_solve_vec(const double* a, const int* perm, int m, const double* b, double* x) {
  double y[8];
  for (int i = 0; i < m; ++i) {
    double acc = b[perm[i]];
    for (int j = 0; j < i; ++j) acc -= a[perm[i] * m + j] * y[j];
    y[i] = acc;
  }
  for (int i = m - 1; i >= 0; --i) {
    double acc = y[i];
    for (int j = i + 1; j < m; ++j) acc -= a[perm[i] * m + j] * x[j];
    x[i] = acc / a[perm[i] * m + i];
  }
}

// B := A^{-1} B column by column for a factored block.
void block_solve_mat(const double* a, const int* perm, int m, double* bmat) {
  double col[8], out[8];
  for (int c = 0; c < m; ++c) {
    for (int r = 0; r < m; ++r) col[r] = bmat[r * m + c];
    block_solve_vec(a, perm, m, col, out);
    for (int r = 0; r < m; ++r) bmat[r * m + c] = out[r];
  }
}

}  // namespace

void solve_in_place(BlockTridiagonalSystem& sys, std::span<double> solution) {
  const int m = sys.m;
  const int nodes = sys.nodes;
  if (m > 8) throw SolverError("block solver supports up to 8 components");
  if (solution.size() != static_cast<size_t>(nodes) * m)
    throw ValidationError("solve: solution buffer has the wrong size");
  const int mm = m * m;
  int perm[8];
  double tmp[8];

  // Forward sweep: overwrite upper_i with D_i^{-1} U_i and rhs_i with
  // D_i^{-1} rhs_i after folding in the lower coupling.
  for (int i = 0; i < nodes; ++i) {
    double* d = sys.diag.data() + static_cast<size_t>(i) * mm;
    double* b = sys.rhs.data() + static_cast<size_t>(i) * m;
    if (i > 0) {
      const double* lo = sys.lower.data() + static_cast<size_t>(i) * mm;
      const double* up_prev = sys.upper.data() + static_cast<size_t>(i - 1) * mm;
      const double* b_prev = sys.rhs.data() + static_cast<size_t>(i - 1) * m;
      for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) {
          double acc = 0.0;
          for (int k = 0; k < m; ++k) acc += lo[r * m + k] * up_prev[k * m + c];
          d[r * m + c] -= acc;
        }
        double accb = 0.0;
        for (int k = 0; k < m; ++k) accb += lo[r * m + k] * b_prev[k];
        b[r] -= accb;
      }
    }
    factor_block(d, perm, m, i);
    if (i < nodes - 1) block_solve_mat(d, perm, m, sys.upper.data() + static_cast<size_t>(i) * mm);
    block_solve_vec(d, perm, m, b, tmp);
    for (int r = 0; r < m; ++r) b[r] = tmp[r];
  }

  // Back substitution.
  for (int r = 0; r < m; ++r)
    solution[static_cast<size_t>(nodes - 1) * m + r] = sys.rhs[static_cast<size_t>(nodes - 1) * m + r];
  for (int i = nodes - 2; i >= 0; --i) {
    const double* up = sys.upper.data() + static_cast<size_t>(i) * mm;
    const double* xn = solution.data() + static_cast<size_t>(i + 1) * m;
    double* xi = solution.data() + static_cast<size_t>(i) * m;
    const double* b = sys.rhs.data() + static_cast<size_t>(i) * m;
    for (int r = 0; r < m; ++r) {
      double acc = b[r];
      for (int k = 0; k < m; ++k) acc -= up[r * m + k] * xn[k];
      xi[r] = acc;
    }
  }
}

std::vector<double> solve(const BlockTridiagonalSystem& sys) {
  BlockTridiagonalSystem work = sys;
  std::vector<double> solution(static_cast<size_t>(sys.nodes) * sys.m);
  solve_in_place(work, solution);
  return solution;
}

std::vector<double> apply_operator(const BlockTridiagonalSystem& sys, std::span<const double> x) {
  const int m = sys.m;
  const int mm = m * m;
  std::vector<double> y(static_cast<size_t>(sys.nodes) * m, 0.0);
  for (int i = 0; i < sys.nodes; ++i) {
    double* yi = y.data() + static_cast<size_t>(i) * m;
    for (int r = 0; r < m; ++r) {
      double acc = 0.0;
      const double* d = sys.diag.data() + static_cast<size_t>(i) * mm;
      for (int k = 0; k < m; ++k) acc += d[r * m + k] * x[static_cast<size_t>(i) * m + k];
      if (i > 0) {
        const double* lo = sys.lower.data() + static_cast<size_t>(i) * mm;
        for (int k = 0; k < m; ++k) acc += lo[r * m + k] * x[static_cast<size_t>(i - 1) * m + k];
      }
      if (i < sys.nodes - 1) {
        const double* up = sys.upper.data() + static_cast<size_t>(i) * mm;
        for (int k = 0; k < m; ++k) acc += up[r * m + k] * x[static_cast<size_t>(i + 1) * m + k];
      }
      yi[r] = acc;
    }
  }
  return y;
}

}  // namespace chromsim
