#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "chromsim/blocksolve.hpp"
#include "chromsim/errors.hpp"
#include "chromsim/isotherm.hpp"
#include "support/test_helpers.hpp"

using namespace chromsim;

namespace {

// Independent dense construction of the same operator for cross-checking.
std::vector<double> dense_operator(int nodes, int m, std::span<const double> coupling,
                                   double diffusion, double phase_ratio, double dt, double dx) {
  const int n = nodes * m;
  const double r = diffusion * dt / (dx * dx);
  std::vector<double> mat(static_cast<size_t>(n) * n, 0.0);
  auto entry = [&](int row, int col) -> double& { return mat[static_cast<size_t>(row) * n + col]; };
  for (int k = 0; k < m; ++k) entry(k, k) = 1.0;  // inlet row
  for (int i = 1; i < nodes; ++i) {
    for (int row = 0; row < m; ++row) {
      const int gr = i * m + row;
      for (int col = 0; col < m; ++col)
        entry(gr, i * m + col) +=
            phase_ratio * coupling[(static_cast<size_t>(i) * m + row) * m + col] +
            (row == col ? 1.0 + 2.0 * r : 0.0);
      if (i == nodes - 1) {
        entry(gr, (i - 1) * m + row) += -2.0 * r;
      } else {
        entry(gr, (i - 1) * m + row) += -r;
        entry(gr, (i + 1) * m + row) += -r;
      }
    }
  }
  return mat;
}

TracedField make_traced(int m, int nodes, const std::vector<double>& values) {
  TracedField t;
  t.components = m;
  t.nodes = nodes;
  t.values = values;
  t.feet.assign(nodes, 0.0);
  t.stencil_center.assign(nodes, 1);
  return t;
}

}  // namespace

TEST_CASE("pure advection limit reduces to the traced field") {
  const int nodes = 7;
  ConcentrationField prev(1, nodes);
  std::vector<double> traced_values(nodes);
  for (int i = 0; i < nodes; ++i) {
    prev.at(0, i) = 0.3 * i;
    traced_values[i] = 1.0 + 0.1 * i;
  }
  const TracedField traced = make_traced(1, nodes, traced_values);
  std::vector<double> coupling(nodes, 0.7);  // any A; F = 0 removes it

  std::vector<double> inlet{9.0};
  const auto sys = assemble(traced, prev, coupling, 0.0, 0.0, 0.01, 0.1, inlet);
  const auto sol = solve(sys);
  CHECK(sol[0] == 9.0);
  for (int i = 1; i < nodes; ++i)
    CHECK(sol[i] == doctest::Approx(traced_values[i]).epsilon(1e-15));
}

TEST_CASE("scalar linear-isotherm assembly matches the dense construction") {
  const int nodes = 5;
  const double a = 1.0, F = 1.5, D = 0.002, dt = 0.0175, dx = 0.01;
  ConcentrationField prev(1, nodes);
  std::vector<double> traced_values(nodes);
  for (int i = 0; i < nodes; ++i) {
    prev.at(0, i) = 0.2 * i;
    traced_values[i] = 0.15 * (i + 1);
  }
  const TracedField traced = make_traced(1, nodes, traced_values);
  std::vector<double> coupling(nodes, a);
  std::vector<double> inlet{1.0};
  const auto sys = assemble(traced, prev, coupling, D, F, dt, dx, inlet);

  const double r = D * dt / (dx * dx);
  for (int i = 1; i < nodes; ++i) {
    CHECK(sys.diag[i] == doctest::Approx(1.0 + F * a + 2.0 * r).epsilon(1e-15));
    // retardation differences along the characteristic
    CHECK(sys.rhs[i] == doctest::Approx((1.0 + F * a) * traced_values[i]).epsilon(1e-15));
  }
  CHECK(sys.lower[nodes - 1] == doctest::Approx(-2.0 * r).epsilon(1e-15));

  const auto dense = dense_operator(nodes, 1, coupling, D, F, dt, dx);
  const auto x = solve(sys);
  const auto sol_dense = test_support::dense_solve(dense, sys.rhs);
  CHECK(test_support::max_abs_diff(x, sol_dense) < 1e-12);
}

TEST_CASE("two-component diagonal block carries I + F A at the feed state") {
  const int nodes = 5;
  IsothermParams p;
  p.a = {0.5, 1.0};
  p.b = {0.05, 0.1};
  p.phase_ratio = 1.5;
  const std::vector<double> u{10.0, 10.0};
  const auto A = langmuir_jacobian(u, p);

  ConcentrationField prev(2, nodes);
  std::vector<double> traced_values(2 * nodes, 0.0);
  for (int i = 0; i < nodes; ++i) {
    prev.at(0, i) = u[0];
    prev.at(1, i) = u[1];
  }
  const TracedField traced = make_traced(2, nodes, traced_values);
  std::vector<double> coupling(static_cast<size_t>(nodes) * 4);
  for (int i = 0; i < nodes; ++i)
    for (int e = 0; e < 4; ++e) coupling[static_cast<size_t>(i) * 4 + e] = A.entries[e];

  std::vector<double> inlet{0.0, 0.0};
  const double D = 1e-5, dt = 1.0 / 60.0, dx = 1.0 / 500.0;
  const auto sys = assemble(traced, prev, coupling, D, p.phase_ratio, dt, dx, inlet);

  const double r = D * dt / (dx * dx);
  const int i = 2;  // interior block
  CHECK(sys.diag[i * 4 + 0] == doctest::Approx(1.0 + 1.5 * A(0, 0) + 2 * r).epsilon(1e-14));
  CHECK(sys.diag[i * 4 + 1] == doctest::Approx(1.5 * A(0, 1)).epsilon(1e-14));
  CHECK(sys.diag[i * 4 + 2] == doctest::Approx(1.5 * A(1, 0)).epsilon(1e-14));
  CHECK(sys.diag[i * 4 + 3] == doctest::Approx(1.0 + 1.5 * A(1, 1) + 2 * r).epsilon(1e-14));

  const auto dense = dense_operator(nodes, 2, coupling, D, p.phase_ratio, dt, dx);
  const auto sol_dense = test_support::dense_solve(dense, sys.rhs);
  CHECK(test_support::max_abs_diff(solve(sys), sol_dense) < 1e-12);
}

TEST_CASE("identity system returns the right-hand side") {
  BlockTridiagonalSystem sys;
  sys.resize(6, 2);
  for (int i = 0; i < 6; ++i)
    for (int k = 0; k < 2; ++k) {
      sys.diag[static_cast<size_t>(i) * 4 + k * 2 + k] = 1.0;
      sys.rhs[static_cast<size_t>(i) * 2 + k] = 10.0 * i + k;
    }
  const auto sol = solve(sys);
  for (size_t j = 0; j < sys.rhs.size(); ++j) CHECK(sol[j] == sys.rhs[j]);
}

TEST_CASE("block Thomas equals dense elimination on random dominant systems") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int m : {1, 2, 3}) {
    for (int trial = 0; trial < 8; ++trial) {
      const int nodes = 5 + static_cast<int>(rng() % 46);  // up to 50 nodes
      BlockTridiagonalSystem sys;
      sys.resize(nodes, m);
      const int mm = m * m;
      for (int i = 0; i < nodes; ++i)
        for (int e = 0; e < mm; ++e) {
          const int row = e / m, col = e % m;
          sys.diag[static_cast<size_t>(i) * mm + e] =
              dist(rng) + (row == col ? 4.0 : 0.0);  // block-diagonally dominant
          if (i > 0) sys.lower[static_cast<size_t>(i) * mm + e] = dist(rng);
          if (i < nodes - 1) sys.upper[static_cast<size_t>(i) * mm + e] = dist(rng);
        }
      for (auto& v : sys.rhs) v = dist(rng);

      // dense mirror
      const int n = nodes * m;
      std::vector<double> dense(static_cast<size_t>(n) * n, 0.0);
      for (int i = 0; i < nodes; ++i)
        for (int row = 0; row < m; ++row)
          for (int col = 0; col < m; ++col) {
            dense[static_cast<size_t>(i * m + row) * n + i * m + col] =
                sys.diag[(static_cast<size_t>(i) * m + row) * m + col];
            if (i > 0)
              dense[static_cast<size_t>(i * m + row) * n + (i - 1) * m + col] =
                  sys.lower[(static_cast<size_t>(i) * m + row) * m + col];
            if (i < nodes - 1)
              dense[static_cast<size_t>(i * m + row) * n + (i + 1) * m + col] =
                  sys.upper[(static_cast<size_t>(i) * m + row) * m + col];
          }

      const auto sol_dense = test_support::dense_solve(dense, sys.rhs);
      CHECK(test_support::max_abs_diff(solve(sys), sol_dense) < 1e-10);
    }
  }
}

TEST_CASE("manufactured solution round trip and residual") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> dist(0.0, 2.0);
  for (int m : {1, 2, 3}) {
    for (int nodes : {5, 40, 1000}) {
      ConcentrationField prev(m, nodes);
      std::vector<double> traced_values(static_cast<size_t>(m) * nodes);
      for (auto& v : prev.values) v = dist(rng);
      for (auto& v : traced_values) v = dist(rng);
      IsothermParams p;
      for (int k = 0; k < m; ++k) {
        p.a.push_back(0.5 + 0.5 * k);
        p.b.push_back(0.05 * (k + 1));
      }
      p.phase_ratio = 1.5;
      std::vector<double> coupling(static_cast<size_t>(nodes) * m * m);
      double un[8];
      for (int i = 0; i < nodes; ++i) {
        for (int k = 0; k < m; ++k) un[k] = prev.at(k, i);
        langmuir_jacobian_into({un, static_cast<size_t>(m)}, p,
                               {coupling.data() + static_cast<size_t>(i) * m * m,
                                static_cast<size_t>(m) * m});
      }
      const TracedField traced = make_traced(m, nodes, traced_values);
      std::vector<double> inlet(m, 0.5);
      auto sys = assemble(traced, prev, coupling, 0.002, p.phase_ratio, 0.005,
                          1.0 / (nodes - 1), inlet);

      std::vector<double> target(static_cast<size_t>(nodes) * m);
      for (auto& v : target) v = dist(rng);
      sys.rhs = apply_operator(sys, target);
      const auto recovered = solve(sys);
      CHECK(test_support::max_abs_diff(recovered, target) < 1e-10);

      const auto residual = apply_operator(sys, recovered);
      CHECK(test_support::max_abs_diff(residual, sys.rhs) < 1e-10);
    }
  }
}

TEST_CASE("singular pivot reports the node") {
  BlockTridiagonalSystem sys;
  sys.resize(4, 1);
  sys.diag[0] = 1.0;
  sys.diag[1] = 1.0;
  sys.diag[2] = 0.0;  // singular block at node 2
  sys.diag[3] = 1.0;
  std::vector<double> out(4);
  CHECK_THROWS_WITH_AS(solve_in_place(sys, out), doctest::Contains("node 2"), SolverError);
}

TEST_CASE("assemble rejects mismatched shapes") {
  ConcentrationField prev(1, 5);
  const TracedField traced = make_traced(1, 4, std::vector<double>(4, 0.0));
  std::vector<double> coupling(5, 1.0);
  std::vector<double> inlet{0.0};
  CHECK_THROWS_AS(assemble(traced, prev, coupling, 0.0, 0.0, 0.1, 0.1, inlet), ValidationError);
}
