#include <doctest.h>

#include <array>
#include <cmath>

#include "tcoord/coordination.hpp"

using tcoord::CoordinationState;
using tcoord::Vec3;

namespace {

const tcoord::GainSet kGains{3.75, 4.82, 1.5, 12.0};

// gamma'' = -b gamma' - a gamma from gamma(0) = 1, gamma'(0) = 0, integrated to t = 1.
double damped_oscillator_error(double dt) {
  const double a = 3.75, b = 4.82;
  CoordinationState s{1.0, 0.0, false};
  const long steps = std::lround(1.0 / dt);
  for (long k = 0; k < steps; ++k) s = tcoord::step_coordination(s, -b * s.gamma_dot - a * s.gamma, dt, 1e9);
  // closed form: real roots r1, r2 of r^2 + b r + a
  const double disc = std::sqrt(b * b - 4 * a);
  const double r1 = (-b + disc) / 2, r2 = (-b - disc) / 2;
  const double c1 = -r2 / (r1 - r2), c2 = r1 / (r1 - r2);
  return std::abs(s.gamma - (c1 * std::exp(r1) + c2 * std::exp(r2)));
}

}  // namespace

TEST_CASE("coupling term") {
  CHECK(tcoord::alpha_bar(Vec3(10, 0, 0), Vec3::Zero(), 1.5, 12.0) == 0.0);
  CHECK(tcoord::alpha_bar(Vec3(10, 0, 0), Vec3(2, 0, 0), 1.5, 12.0) == doctest::Approx(30.0 / 22.0).epsilon(1e-15));
  CHECK(tcoord::alpha_bar(Vec3(10, 0, 0), Vec3(0, 3, -1), 1.5, 12.0) == 0.0);
  CHECK(tcoord::alpha_bar(Vec3(0, 7, 0), Vec3(0, -2, 0), 1.5, 12.0) < 0.0);
}

TEST_CASE("coordination acceleration") {
  const std::array<double, 2> at_equilibrium{3.0, 3.0};
  CHECK(tcoord::coordination_accel(3.0, 1.0, at_equilibrium, 1.0, kGains, 0.0) == 0.0);

  const std::array<double, 1> one{0.4};
  CHECK(tcoord::coordination_accel(0.5, 1.2, one, 1.0, kGains, 0.0) == doctest::Approx(-1.339).epsilon(1e-12));

  CHECK(tcoord::coordination_accel(0.5, 1.2, {}, 1.0, kGains, 0.0) == doctest::Approx(-4.82 * 0.2).epsilon(1e-14));
  CHECK(tcoord::coordination_accel(0.5, 1.0, {}, 1.0, kGains, 0.7) == 0.7);
}

TEST_CASE("semi-implicit Euler step") {
  auto s = tcoord::step_coordination({2.0, 1.0, false}, 0.0, 0.01, 21.1);
  CHECK(s.gamma == doctest::Approx(2.01).epsilon(1e-15));
  CHECK(s.gamma_dot == 1.0);

  // velocity is updated first, then used for the position
  s = tcoord::step_coordination({0.0, 1.0, false}, 2.0, 0.1, 21.1);
  CHECK(s.gamma_dot == doctest::Approx(1.2));
  CHECK(s.gamma == doctest::Approx(0.12));

  s = tcoord::step_coordination({21.0995, 1.0, false}, 0.0, 0.001, 21.1);
  CHECK(s.gamma == 21.1);
  CHECK(s.done);
  CHECK(s.gamma_dot == 0.0);
  CHECK(tcoord::step_coordination(s, 5.0, 0.001, 21.1) == s);

  s = tcoord::step_coordination({0.0001, -1.0, false}, 0.0, 0.001, 21.1);
  CHECK(s.gamma == 0.0);
  CHECK_FALSE(s.done);

  CHECK_THROWS_AS(tcoord::step_coordination({}, 0.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(tcoord::step_coordination({}, std::nan(""), 0.01, 1.0), std::domain_error);
}

TEST_CASE("one step and two half steps differ at second order") {
  auto accel = [](const CoordinationState& s) { return -4.82 * s.gamma_dot - 3.75 * (s.gamma - 1.0); };
  double prev = 0.0;
  for (double dt : {0.04, 0.02, 0.01, 0.005}) {
    const CoordinationState s0{0.0, 2.0, false};
    const auto full = tcoord::step_coordination(s0, accel(s0), dt, 1e9);
    auto half = tcoord::step_coordination(s0, accel(s0), dt / 2, 1e9);
    half = tcoord::step_coordination(half, accel(half), dt / 2, 1e9);
    const double diff = std::abs(full.gamma - half.gamma) + std::abs(full.gamma_dot - half.gamma_dot);
    if (prev > 0.0) CHECK(prev / diff == doctest::Approx(4.0).epsilon(0.1));
    prev = diff;
    CHECK(diff <= 10.0 * dt * dt);
  }
}

TEST_CASE("global error is first order against the closed form") {
  const double e1 = damped_oscillator_error(1e-3);
  const double e2 = damped_oscillator_error(5e-4);
  const double e3 = damped_oscillator_error(2.5e-4);
  CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.05));
  CHECK(e2 / e3 == doctest::Approx(2.0).epsilon(0.05));
  CHECK(e3 < 1e-3);
}

TEST_CASE("coordination error") {
  const auto q2 = tcoord::build_q(2);
  auto err = tcoord::coordination_error(q2, tcoord::Vector::Constant(2, 4.0), tcoord::Vector::Constant(2, 1.4), 1.4);
  CHECK(err.norm == 0.0);

  tcoord::Vector g(2);
  g << 1.0, 0.0;
  err = tcoord::coordination_error(q2, g, tcoord::Vector::Ones(2), 1.0);
  CHECK(err.xi1.norm() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(err.xi2.isZero(0.0));
  CHECK(err.norm == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));

  const auto q5 = tcoord::build_q(5);
  tcoord::Vector g5(5), v5(5);
  g5 << 0.1, 0.7, -0.2, 1.3, 0.0;
  v5 << 1.0, 1.1, 0.9, 1.2, 1.0;
  const auto base = tcoord::coordination_error(q5, g5, v5, 1.0);
  const auto shifted = tcoord::coordination_error(q5, g5.array() + 17.25, v5, 1.0);
  CHECK((base.xi1 - shifted.xi1).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(base.norm == doctest::Approx(std::sqrt(base.xi1.squaredNorm() + base.xi2.squaredNorm())));

  CHECK_THROWS_AS(tcoord::coordination_error(q5, g, v5, 1.0), std::invalid_argument);
}
