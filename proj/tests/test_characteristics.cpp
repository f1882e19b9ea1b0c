#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "chromsim/characteristics.hpp"
#include "chromsim/errors.hpp"

using namespace chromsim;

namespace {

GridSpec make_grid(int cells, double length, double dt) {
  GridSpec g;
  g.cells = cells;
  g.steps = 1;
  g.horizon = dt;
  g.dx = length / cells;
  g.dt = dt;
  return g;
}

}  // namespace

TEST_CASE("characteristic feet") {
  CHECK(foot_of_characteristic(0.5, 1.0, 0.005) == doctest::Approx(0.495).epsilon(1e-15));
  CHECK(foot_of_characteristic(0.0, 1.0, 0.005) < 0.0);
  CHECK(foot_of_characteristic(1.0, 1.0, 0.005) == doctest::Approx(0.995).epsilon(1e-15));
}

TEST_CASE("perturbed feet") {
  const auto [plus, minus] = perturbed_feet(0.5, 1.0, 0.005, 0.01, 0.5);
  CHECK(plus == doctest::Approx(0.495025).epsilon(1e-12));
  CHECK(minus == doctest::Approx(0.494975).epsilon(1e-12));

  // symmetric about the unperturbed foot
  const double foot = foot_of_characteristic(0.5, 1.0, 0.005);
  CHECK(0.5 * (plus + minus) == doctest::Approx(foot).epsilon(1e-15));

  // degenerate perturbation collapses onto the foot
  const auto [p2, m2] = perturbed_feet(0.5, 1.0, 0.005, 0.01, 1e-12);
  CHECK(p2 == doctest::Approx(foot).epsilon(1e-13));
  CHECK(m2 == doctest::Approx(foot).epsilon(1e-13));

  // perturbation stays within one cell whenever eta dt < 1
  CHECK(std::abs(plus - foot) < 0.01);

  CHECK_THROWS_AS(perturbed_feet(0.5, 1.0, 0.005, 0.01, 0.0), ValidationError);
  CHECK_THROWS_AS(perturbed_feet(0.5, 1.0, 0.005, 0.01, 1.5), ValidationError);
}

TEST_CASE("quadratic interpolation reproduces nodal values and quadratics") {
  const int n = 20;
  const double dx = 1.0 / n;
  std::vector<double> square(n + 1);
  for (int i = 0; i <= n; ++i) square[i] = (i * dx) * (i * dx);

  for (int i = 0; i <= n; ++i)
    CHECK(quadratic_interpolate(square, dx, i * dx) ==
          doctest::Approx(square[i]).epsilon(1e-14));

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double x = dist(rng);
    CHECK(std::abs(quadratic_interpolate(square, dx, x) - x * x) < 1e-13);
  }
}

TEST_CASE("quadratic interpolation error on cubics shrinks at third order") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dist(0.05, 0.95);
  double prev = 0.0;
  for (int level = 0; level < 3; ++level) {
    const int n = 25 << level;
    const double dx = 1.0 / n;
    std::vector<double> cubic(n + 1);
    for (int i = 0; i <= n; ++i) cubic[i] = std::pow(i * dx, 3);
    double worst = 0.0;
    for (int trial = 0; trial < 400; ++trial) {
      const double x = dist(rng);
      worst = std::max(worst, std::abs(quadratic_interpolate(cubic, dx, x) - x * x * x));
    }
    if (level > 0) CHECK(worst < prev / 6.0);  // close to the factor-8 third-order drop
    prev = worst;
  }
}

TEST_CASE("interpolation needs a full stencil") {
  std::vector<double> two{0.0, 1.0};
  CHECK_THROWS_AS(quadratic_interpolate(two, 1.0, 0.5), ValidationError);
}

TEST_CASE("inflow trace samples the crossing time") {
  InjectionProfile inj;
  inj.feed = {2.0};
  inj.duration = 3.0;

  // crossing inside the pulse
  CHECK(inflow_trace(0.5, 2.0, 1.0, inj)[0] == 2.0);
  // crossing after the pulse
  CHECK(inflow_trace(0.5, 4.0, 1.0, inj)[0] == 0.0);
  // crossing exactly at t_inj (profile closed on the right)
  CHECK(inflow_trace(1.0, 4.0, 1.0, inj)[0] == 2.0);
}

TEST_CASE("tracing a constant field returns the constant for any offset") {
  const int n = 30;
  GridSpec grid = make_grid(n, 1.0, 0.01);
  ConcentrationField state(2, n + 1);
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i <= n; ++i) state.at(k, i) = 3.5 - k;

  InjectionProfile inj;
  inj.feed = {3.5, 2.5};  // boundary matches the field
  inj.duration = 100.0;

  for (double offset : {0.0, 2.4e-5, -2.4e-5}) {
    const TracedField traced = trace_field(state, grid, 1.0, 1.0, 0.01, inj, offset);
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i <= n; ++i)
        CHECK(traced.at(k, i) == doctest::Approx(state.at(k, 0)).epsilon(1e-14));
  }
}

TEST_CASE("tracing marks inflow nodes and clamps the outlet side") {
  const int n = 10;
  GridSpec grid = make_grid(n, 1.0, 0.05);
  ConcentrationField state(1, n + 1);
  for (int i = 0; i <= n; ++i) state.at(0, i) = i * grid.dx;  // linear ramp

  InjectionProfile inj;
  inj.feed = {7.0};
  inj.duration = 100.0;

  const TracedField traced = trace_field(state, grid, 1.0, 1.0, 0.05, inj);
  CHECK(traced.stencil_center[0] == -1);      // foot at -0.05
  CHECK(traced.at(0, 0) == 7.0);              // inlet boundary value
  // interior feet interpolate the ramp exactly (quadratic reproduces linears)
  for (int i = 1; i <= n; ++i)
    CHECK(traced.at(0, i) == doctest::Approx(i * grid.dx - 0.05).epsilon(1e-13));
}
