#include "nispin/scenario.hpp"
#include "nispin/transition.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace nispin;
using testing::Draws;
using testing::max_abs;

namespace {

constexpr double kPi = std::numbers::pi;

FlipKinematics rotating_beam(double k, double omega) {
  return {1.0, [k](double) { return Vec3(k, 0, 0); },
          FrameField::constant(Vec3::Zero(), Vec3(omega, 0, 0))};
}

}  // namespace

TEST_CASE("T gradient vanishes in an inertial frame") {
  const FourMomentum k(1.0, Vec3(0.3, -0.1, 0.2));
  const auto tg = t_gradient(FrameField::inertial(), k, {1.0, Vec3(0.2, 0.1, 0.0)}, {});
  for (const auto& m : tg) CHECK(max_abs(m) == 0.0);
}

TEST_CASE("T gradient time component carries i m Omega Sigma3") {
  const double m = 1.7, w = 0.05;
  const FourMomentum k = FourMomentum::at_rest(m);
  const auto tg = t_gradient(FrameField::constant(Vec3::Zero(), Vec3(0, 0, w)), k,
                             {0.4, Vec3(0.3, -0.2, 0.1)}, {});
  const ComplexMatrix expect = kI * m * w * spin_matrix(2);
  CHECK(max_abs(2.0 * m * tg[0] - expect) < 1e-15);
  for (int nu = 1; nu < 4; ++nu) CHECK(max_abs(tg[nu]) < 1e-15);
}

TEST_CASE("T gradient assembled term by term") {
  Draws d(5);
  for (int i = 0; i < 20; ++i) {
    const FourMomentum k(1.0, d.ball(1.5));
    const FrameField f = FrameField::constant(d.vec(0.1), d.vec(0.1));
    const SpacetimePoint x{d.uniform(0, 2), d.vec(1.0)};
    PhaseDerivatives pd;
    pd.phi_g_gradient = Vec4(d.uniform(-1, 1), d.uniform(-1, 1), d.uniform(-1, 1), d.uniform(-1, 1));
    pd.phi_g_hessian = Eigen::Matrix4d::Random();
    pd.em_potential = Vec4(0.1, -0.2, 0.3, 0.05);
    const auto tg = t_gradient(f, k, x, pd);
    const TetradGradient dh = tetrad_gradient(f, x);
    const SpinConnection g = spin_connection(f, x);
    for (int nu = 0; nu < 4; ++nu) {
      ComplexMatrix expect = ComplexMatrix::Zero();
      for (int al = 0; al < 4; ++al)
        for (int mu = 0; mu < 4; ++mu) expect += dh[nu](mu, al) * k.lower()[mu] * gamma_flat(al);
      for (int mu = 0; mu < 4; ++mu) expect += pd.phi_g_hessian(mu, nu) * gamma_flat(mu);
      expect -= 2.0 * kI * k.mass() *
                ((pd.phi_g_gradient[nu] - pd.em_potential[nu]) * ComplexMatrix::Identity() + g[nu]);
      CHECK(max_abs(tg[nu] - expect / (2.0 * k.mass())) < 1e-14);
    }
  }
}

TEST_CASE("k-contracted T gradient reduces to the spin connection term") {
  // Phase derivatives and tetrad terms drop out between u1 and u2, whatever
  // their values.
  Draws d(8);
  for (int i = 0; i < 50; ++i) {
    const FourMomentum k(1.0, d.ball(2.0));
    const FrameField f = FrameField::constant(d.vec(0.1), d.vec(0.1));
    const double t = d.uniform(0, 3);
    PhaseDerivatives pd;
    pd.phi_g_gradient = Vec4::Random();
    pd.phi_g_hessian = Eigen::Matrix4d::Random();
    const auto tg = t_gradient(f, k, {t, d.vec(1.0)}, pd);
    CHECK(std::abs(contracted_t_gradient(k, tg) - matrix_element(k, f, t)) < 1e-14);
  }
}

TEST_CASE("electromagnetic potential drops out of the flip element") {
  const FourMomentum k(1.0, Vec3(0.2, 0.4, -0.3));
  const FrameField f = FrameField::constant(Vec3(0.01, 0.02, 0.03), Vec3(0.05, -0.02, 0.04));
  PhaseDerivatives with, without;
  with.em_potential = Vec4(0.3, 0.1, -0.4, 0.2);
  const SpacetimePoint x{1.0, Vec3(0.1, 0.2, 0.3)};
  const Complex a = contracted_t_gradient(k, t_gradient(f, k, x, with));
  const Complex b = contracted_t_gradient(k, t_gradient(f, k, x, without));
  CHECK(std::abs(a - b) < 1e-15);
}

TEST_CASE("matrix element examples") {
  CHECK(std::abs(matrix_element(FourMomentum(1.0, Vec3(0.3, 0.2, 0.1)), FrameField::inertial(), 1.0)) ==
        0.0);
  const double w = 0.07;
  const Complex me =
      matrix_element(FourMomentum::at_rest(), FrameField::constant(Vec3::Zero(), Vec3(w, 0, 0)), 0.0);
  CHECK(std::abs(me - kI * 0.5 * w) < 1e-16);
  CHECK(std::abs(a12_closed_form(FourMomentum::at_rest(), Vec3(w, 0, 0), Vec3::Zero()) - w) < 1e-16);
}

TEST_CASE("closed-form A12 examples") {
  const double kx = 0.8, w = 0.1, a3 = 0.03;
  const FourMomentum k(1.0, Vec3(kx, 0, 0));
  const double e = k.energy();
  CHECK(std::abs(a12_closed_form(k, Vec3(w, 0, 0), Vec3::Zero()) - w / e) < 1e-16);
  CHECK(std::abs(a12_closed_form(k, Vec3::Zero(), Vec3(0, 0, a3)) - kI * a3 * kx / e) < 1e-16);
  const FourMomentum k2(1.0, Vec3(0.4, -0.6, 0));
  CHECK(std::abs(a12_closed_form(k2, Vec3::Zero(), Vec3(0, 0, a3)) -
                 kI * a3 * Complex(0.4, 0.6) / k2.energy()) < 1e-16);
}

TEST_CASE("closed form and spinor contraction agree") {
  Draws d(2024);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const FourMomentum k(1.0, d.ball(3.0));
    const Vec3 a = d.ball(0.1), w = d.ball(0.1);
    const Complex direct = matrix_element(k, FrameField::constant(a, w), 0.0);
    const Complex closed = kI * (k.energy() / 2.0) * a12_closed_form(k, w, a);
    worst = std::max(worst, std::abs(direct - closed) / std::max(std::abs(closed), 1e-300));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("flip selection rules") {
  Draws d(99);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 p = d.ball(2.0);
    const FourMomentum planar(1.0, Vec3(p.x(), p.y(), 0.0));
    const Vec3 a(d.uniform(-0.1, 0.1), d.uniform(-0.1, 0.1), 0.0);
    const Vec3 w(0.0, 0.0, d.uniform(-0.1, 0.1));
    CHECK(a12_closed_form(planar, w, a) == Complex(0.0, 0.0));
    // Breaking any one condition makes the amplitude non-zero.
    CHECK(std::abs(a12_closed_form(FourMomentum(1.0, Vec3(p.x(), p.y(), 0.3)), w,
                                   a + Vec3(0.05, 0, 0))) > 0.0);
    CHECK(std::abs(a12_closed_form(planar, w, a + Vec3(0, 0, 0.05))) > 0.0);
  }
  const FourMomentum rest = FourMomentum::at_rest();
  CHECK(std::abs(a12_closed_form(rest, Vec3(0.02, 0, 0), Vec3::Zero())) > 0.0);
  CHECK(std::abs(a12_closed_form(rest, Vec3(0, 0.02, 0), Vec3::Zero())) > 0.0);
  // Acceleration alone never flips a particle at rest.
  CHECK(std::abs(a12_closed_form(rest, Vec3::Zero(), Vec3(0.05, -0.02, 0.07))) == 0.0);
}

TEST_CASE("A12 is linear in the frame fields") {
  Draws d(4);
  for (int i = 0; i < 100; ++i) {
    const FourMomentum k(1.0, d.ball(2.0));
    const Vec3 a1 = d.vec(0.1), w1 = d.vec(0.1), a2 = d.vec(0.1), w2 = d.vec(0.1);
    const double s = d.uniform(-2, 2);
    const Complex lhs = a12_closed_form(k, w1 + s * w2, a1 + s * a2);
    const Complex rhs = a12_closed_form(k, w1, a1) + s * a12_closed_form(k, w2, a2);
    CHECK(std::abs(lhs - rhs) < 1e-15);
  }
}

TEST_CASE("amplitude sample") {
  const FlipKinematics kin = rotating_beam(0.5, 0.1);
  const AmplitudeSample s = amplitude_sample(kin, 2.0);
  const double e = std::sqrt(1.25);
  CHECK(s.t == 2.0);
  CHECK(std::abs(s.a12 - 0.1 / e) < 1e-16);
  CHECK(std::abs(s.integrand - kI * (e / 2.0) * s.a12) < 1e-16);
  CHECK(std::abs(s.integrand - matrix_element(kin.momentum_at(2.0), kin.frame, 2.0)) < 1e-16);
}

TEST_CASE("rotating beam probability") {
  for (double omega_t : {0.1, 0.5, 1.0, 2.0}) {
    const double omega = 0.1, t = omega_t / omega;
    const double expect = 0.25 * omega_t * omega_t;
    double first = -1.0;
    for (double kx : {0.0, 0.5, 2.0}) {
      const TransitionResult r = transition_probability(rotating_beam(kx, omega), t);
      CHECK(std::abs(r.p - expect) < 1e-6 * expect);
      if (omega_t < 2.0) CHECK(r.valid);
      if (first < 0) first = r.p;
      CHECK(std::abs(r.p - first) < 1e-10);
    }
  }
  CHECK(transition_probability(rotating_beam(0.5, 0.1), 0.0).p == 0.0);
}

TEST_CASE("validity horizon") {
  const TransitionResult r = transition_probability(rotating_beam(0.3, 0.2), 15.0);
  CHECK_FALSE(r.valid);
  CHECK(r.p == doctest::Approx(2.25));
  REQUIRE(r.t_max_valid);
  CHECK(*r.t_max_valid == doctest::Approx(10.0).epsilon(1e-10));
  CHECK_FALSE(transition_probability(rotating_beam(0.3, 0.2), 9.0).t_max_valid);
}

TEST_CASE("transition probability rejects bad input") {
  CHECK_THROWS_AS(transition_probability(rotating_beam(0, 0.1), -1.0), std::invalid_argument);
  FlipKinematics broken;
  CHECK_THROWS_AS(transition_probability(broken, 1.0), std::invalid_argument);
}

TEST_CASE("closed-form probabilities") {
  CHECK(p_rotating_beam(0.2, 5.0).p == doctest::Approx(0.25));
  CHECK(p_rotating_beam(0.2, 0.0).p == 0.0);
  CHECK(p_rotating_beam(0.2, 10.0).p == doctest::Approx(1.0));
  CHECK(p_rotating_beam(0.2, 10.0).valid);
  CHECK_FALSE(p_rotating_beam(0.2, 10.5).valid);
  CHECK_THROWS(p_rotating_beam(0.2, -1.0));

  CHECK(p_helical(0.3, 0.4, 0.1, 2.0, 0.0).p == 0.0);
  CHECK(p_helical(0.3, 0.0, 0.1, 2.0, 7.0).p == 0.0);
  {
    // k/(E+m) = 0.1 and k3/E = 0.5 with Omega R = 0.01 and sin 2 Omega t = 1.
    // k = 0.1 (E+1), k3 = E/2, so E^2 = 1 + 0.01 (E+1)^2 + E^2/4.
    const double a = 0.75 - 0.01, b = -0.02, c = -1.01;
    const double e = (-b + std::sqrt(b * b - 4 * a * c)) / (2 * a);
    const double k = 0.1 * (e + 1), k3 = 0.5 * e;
    const double omega = 0.01, radius = 1.0;
    const double t = kPi / (4 * omega);
    CHECK(p_helical(k, k3, omega, radius, t).p == doctest::Approx(3.025e-3).epsilon(1e-12));
  }

  {
    const double omega = 0.05, wc = 0.3, t = kPi / (2 * wc);
    const double half = omega * t / 2;
    CHECK(p_cyclotron(0.0, omega, wc, t).p ==
          doctest::Approx(half * half * (1 + 4 / (kPi * kPi))).epsilon(1e-14));
  }
  CHECK(p_cyclotron(0.5, 0.1, 0.3, 0.0).p == 0.0);
  // w -> 0 limit is continuous.
  CHECK(p_cyclotron(0.5, 0.1, 1e-9, 3.0).p == doctest::Approx(p_cyclotron(0.5, 0.1, 1e-5, 3.0).p).epsilon(1e-9));
  CHECK(cyclotron_frequency(2.0, 0.3, 0.0) == doctest::Approx(0.6));
  CHECK(cyclotron_frequency(1.0, 0.5, std::sqrt(3.0)) == doctest::Approx(0.25));
}

TEST_CASE("sinc") {
  CHECK(sinc(0.0) == 1.0);
  for (double x : {1e-6, 5e-5, 1e-4, 1e-3, 0.5, 3.0})
    CHECK(sinc(x) == doctest::Approx(std::sin(x) / x).epsilon(1e-15));
}

TEST_CASE("cyclotron probability at small times") {
  Scenario s;
  s.preset = Preset::cyclotron_orbit;
  s.k = 0.6;
  s.omega = 0.05;
  s.omega_cyc = 0.4;
  const FlipKinematics kin = s.kinematics();
  const double e = std::sqrt(1.0 + s.k * s.k);
  for (double t : {1e-3, 2e-3}) {
    const double p = transition_probability(kin, t).p;
    // A12(0) = Omega m / E, so P ~ (Omega t / 2)^2.
    CHECK(p / (t * t) == doctest::Approx(0.25 * s.omega * s.omega).epsilon(1e-5));
    // Printed bracket has the same t^2 onset; the scale differs by (E/m)^2.
    CHECK(p / p_cyclotron(s.k, s.omega, 0.4, t).p == doctest::Approx(e * e).epsilon(1e-5));
  }
}
