#include "nispin/precession.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace nispin;
using testing::Draws;

TEST_CASE("precession right-hand side") {
  const double w = 0.3;
  CHECK((precession_rhs(Vec3(0.5, 0, 0), Vec3(0, 0, w), Vec3::Zero(), Vec3::Zero()) -
         Vec3(0, -0.5 * w, 0))
            .norm() < 1e-16);
  const Vec3 axis(0.1, -0.2, 0.3);
  CHECK(precession_rhs(0.7 * axis, axis, Vec3::Zero(), Vec3::Zero()).norm() < 1e-16);
  const double v = 0.4, a = 0.2;
  const Vec3 s(0.1, 0.3, -0.2);
  CHECK((precession_rhs(s, Vec3::Zero(), Vec3(v, 0, 0), Vec3(0, a, 0)) - s.cross(Vec3(0, 0, v * a)))
            .norm() < 1e-16);
  const PrecessionFields f = PrecessionFields::constant(Vec3(0.1, 0, 0), Vec3(v, 0, 0), Vec3(0, a, 0));
  CHECK((f.axis(3.0) - Vec3(0.1, 0, v * a)).norm() < 1e-16);
}

TEST_CASE("constant rotation turns the spin rigidly") {
  const double w = 0.5;
  const double t_end = std::numbers::pi / w;
  const auto traj = integrate_precession(Vec3(0.5, 0, 0), PrecessionFields::constant(Vec3(0, 0, w)),
                                         t_end, 1e-3);
  REQUIRE_FALSE(traj.empty());
  CHECK(traj.front().t == 0.0);
  CHECK(traj.back().t == doctest::Approx(t_end).epsilon(1e-15));
  for (const auto& sample : traj) {
    const Vec3 expect = 0.5 * Vec3(std::cos(w * sample.t), -std::sin(w * sample.t), 0);
    CHECK((sample.s - expect).norm() < 1e-8);
  }
}

TEST_CASE("zero fields leave the spin untouched") {
  const Vec3 s0(0.1, 0.2, 0.3);
  for (const auto& sample : integrate_precession(s0, PrecessionFields::constant(Vec3::Zero()), 2.0, 0.1))
    CHECK(sample.s == s0);
}

TEST_CASE("norm is conserved over long runs") {
  Draws d(12);
  for (int i = 0; i < 5; ++i) {
    const Vec3 w = d.vec(1.0), v = d.vec(0.5), a = d.vec(1.0);
    const PrecessionFields f = PrecessionFields::constant(w, v, a);
    const double dt = 0.01 / f.axis(0).norm();
    const Vec3 s0 = 0.5 * d.ball(1.0).normalized();
    const auto traj = integrate_precession(s0, f, 1e4 * dt, dt);
    CHECK(traj.size() >= 10001);
    double drift = 0.0;
    for (const auto& sample : traj) drift = std::max(drift, std::abs(sample.s.norm() - 0.5));
    CHECK(drift < 1e-9);
  }
}

TEST_CASE("time-dependent fields still preserve the norm and the axis projection") {
  PrecessionFields f;
  f.omega = [](double t) { return Vec3(0.1 * std::sin(t), 0.0, 0.3); };
  f.velocity = [](double t) { return Vec3(0.2 * std::cos(t), 0.2 * std::sin(t), 0.0); };
  f.acceleration = [](double t) { return Vec3(-0.2 * std::cos(t), -0.2 * std::sin(t), 0.0); };
  const auto traj = integrate_precession(Vec3(0.3, 0.0, 0.4), f, 50.0, 1e-2);
  for (const auto& sample : traj) CHECK(sample.s.norm() == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("Mashhoon energy is constant for constant rotation") {
  CHECK(mashhoon_energy(Vec3(0, 0, 0.5), Vec3(0, 0, 0.2)) == doctest::Approx(-0.1));
  const Vec3 w(0.2, -0.1, 0.4);
  const Vec3 s0(0.3, 0.1, -0.2);
  const double e0 = mashhoon_energy(s0, w);
  for (const auto& sample : integrate_precession(s0, PrecessionFields::constant(w), 100.0, 0.01))
    CHECK(std::abs(mashhoon_energy(sample.s, w) - e0) < 1e-9);
}

TEST_CASE("precession frequency equals |Omega|") {
  const Vec3 w(0.3, 0.2, -0.4);
  const double period = 2 * std::numbers::pi / w.norm();
  const Vec3 s0 = 0.5 * w.cross(Vec3(1, 0, 0)).normalized();
  const auto traj = integrate_precession(s0, PrecessionFields::constant(w), period, period / 4000);
  CHECK((traj.back().s - s0).norm() < 1e-10);
  // Half a period flips the transverse spin.
  const auto half = integrate_precession(s0, PrecessionFields::constant(w), period / 2, period / 4000);
  CHECK((half.back().s + s0).norm() < 1e-10);
}

TEST_CASE("bad step sizes are rejected") {
  const auto f = PrecessionFields::constant(Vec3(0, 0, 1));
  CHECK_THROWS_AS(integrate_precession(Vec3(0.5, 0, 0), f, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(integrate_precession(Vec3(0.5, 0, 0), f, 1.0, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(integrate_precession(Vec3(0.5, 0, 0), f, -1.0, 0.1), std::invalid_argument);
  CHECK(integrate_precession(Vec3(0.5, 0, 0), f, 0.0, 0.1).size() == 1);
}
