#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "chromsim/errors.hpp"
#include "chromsim/isotherm.hpp"

using namespace chromsim;

namespace {

IsothermParams params(std::vector<double> a, std::vector<double> b, double F = 1.0) {
  IsothermParams p;
  p.a = std::move(a);
  p.b = std::move(b);
  p.phase_ratio = F;
  return p;
}

}  // namespace

TEST_CASE("langmuir_q pinned values") {
  const auto zero = langmuir_q(std::vector<double>{0.0, 0.0}, params({0.5, 1.0}, {0.05, 0.1}));
  CHECK(zero.q[0] == 0.0);
  CHECK(zero.q[1] == 0.0);
  CHECK(zero.denominator == 1.0);

  const auto linear = langmuir_q(std::vector<double>{1.0}, params({1.0}, {0.0}));
  CHECK(linear.q[0] == doctest::Approx(1.0).epsilon(1e-15));

  // two-component competitive state at feed level
  const auto feed = langmuir_q(std::vector<double>{10.0, 10.0}, params({0.5, 1.0}, {0.05, 0.1}));
  CHECK(feed.denominator == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(feed.q[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(feed.q[1] == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("langmuir_q rejects non-physical denominators") {
  CHECK_THROWS_AS(langmuir_q(std::vector<double>{-3.0}, params({1.0}, {1.0})), SolverError);
}

TEST_CASE("jacobian closed form") {
  const auto at_zero = langmuir_jacobian(std::vector<double>{0.0, 0.0},
                                         params({0.5, 1.0}, {0.05, 0.1}));
  CHECK(at_zero(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(at_zero(1, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(at_zero(0, 1) == 0.0);
  CHECK(at_zero(1, 0) == 0.0);

  const auto scalar = langmuir_jacobian(std::vector<double>{1.0}, params({1.0}, {1.0}));
  CHECK(scalar(0, 0) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("jacobian matches central finite differences") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> dist(0.0, 10.0);
  const double h = 1e-6;
  for (int m : {1, 2, 3}) {
    IsothermParams p;
    for (int k = 0; k < m; ++k) {
      p.a.push_back(0.25 + 0.5 * k);
      p.b.push_back(0.02 * (k + 1));
    }
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> u(m);
      for (double& v : u) v = dist(rng);
      const auto jac = langmuir_jacobian(u, p);
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          std::vector<double> up = u, dn = u;
          up[j] += h;
          dn[j] -= h;
          const double fd = (langmuir_q(up, p).q[i] - langmuir_q(dn, p).q[i]) / (2.0 * h);
          CHECK(std::abs(jac(i, j) - fd) <= 1e-6);
        }
      }
    }
  }
}

TEST_CASE("jacobian sign structure for non-negative states") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(0.0, 20.0);
  const IsothermParams p = params({0.5, 1.0, 2.0}, {0.05, 0.1, 0.2});
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> u(3);
    for (double& v : u) v = dist(rng);
    const auto jac = langmuir_jacobian(u, p);
    for (int i = 0; i < 3; ++i) {
      CHECK(jac(i, i) > 0.0);
      for (int j = 0; j < 3; ++j)
        if (i != j) CHECK(jac(i, j) <= 0.0);
    }
  }
}

TEST_CASE("saturation bound and monotonicity") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(0.0, 50.0);
  const IsothermParams p = params({1.0, 2.0}, {0.5, 0.25});
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> u{dist(rng), dist(rng)};
    const auto eval = langmuir_q(u, p);
    CHECK(eval.q[0] < p.a[0] / p.b[0]);
    CHECK(eval.q[1] < p.a[1] / p.b[1]);

    std::vector<double> bumped = u;
    bumped[0] += 0.5;
    CHECK(langmuir_q(bumped, p).q[0] > eval.q[0]);
  }
}

TEST_CASE("linear case is exact") {
  const IsothermParams p = params({0.5, 2.0}, {0.0, 0.0});
  const std::vector<double> u{3.0, 7.0};
  const auto eval = langmuir_q(u, p);
  CHECK(eval.q[0] == 0.5 * 3.0);
  CHECK(eval.q[1] == 2.0 * 7.0);
  const auto jac = langmuir_jacobian(u, p);
  CHECK(jac(0, 0) == 0.5);
  CHECK(jac(1, 1) == 2.0);
  CHECK(jac(0, 1) == 0.0);
  CHECK(jac(1, 0) == 0.0);
}

TEST_CASE("secant derivative pinned values and fallback") {
  const IsothermParams p = params({1.0}, {1.0});

  // zero increment falls back to the analytic jacobian
  const auto fb = secant_derivative(std::vector<double>{1.0}, std::vector<double>{1.0}, p);
  CHECK(fb(0, 0) == doctest::Approx(0.25).epsilon(1e-15));

  // (q(1) - q(0)) / 1 = 0.5
  const auto sec = secant_derivative(std::vector<double>{0.0}, std::vector<double>{1.0}, p);
  CHECK(sec(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("secant converges linearly to the analytic diagonal") {
  const IsothermParams p = params({1.0, 0.5}, {0.3, 0.1});
  const std::vector<double> u{2.0, 1.0};
  const double exact = langmuir_jacobian(u, p)(0, 0);
  double prev_err = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double du = std::pow(10.0, -2 - k);
    std::vector<double> u_new = u;
    u_new[0] += du;
    const double err = std::abs(secant_derivative(u, u_new, p)(0, 0) - exact);
    if (k > 0) CHECK(err < 0.2 * prev_err);  // shrinks at least linearly in du
    prev_err = err;
  }
}

TEST_CASE("secant freeze variants agree for a single component") {
  const IsothermParams p = params({1.0}, {1.0});
  const std::vector<double> u_old{0.5}, u_new{1.5};
  const auto old_frozen = secant_derivative(u_old, u_new, p, SecantFreeze::Old);
  const auto iter_frozen = secant_derivative(u_old, u_new, p, SecantFreeze::Iterate);
  CHECK(old_frozen(0, 0) == iter_frozen(0, 0));
}
