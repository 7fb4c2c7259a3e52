#include "selftest.hpp"

#include "nispin/spin_current.hpp"
#include "nispin/transition.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

using namespace nispin;

namespace {

struct Report {
  std::ostream& out;
  bool ok = true;

  void line(bool pass, const std::string& name, const std::string& detail) {
    ok = ok && pass;
    out << (pass ? "PASS " : "FAIL ") << name << "  " << detail << "\n";
  }
};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

void rotating_beam(Report& r) {
  double worst = 0.0, spread = 0.0;
  const double omega = 0.2;
  for (double wt : {0.1, 0.5, 1.0, 2.0}) {
    const double t = wt / omega;
    const double expect = 0.25 * wt * wt;
    double lo = 1e300, hi = -1e300;
    for (double k : {0.0, 0.5, 2.0}) {
      FlipKinematics kin;
      kin.momentum = [k](double) { return Vec3(k, 0, 0); };
      kin.frame = FrameField::constant(Vec3::Zero(), Vec3(omega, 0, 0));
      const double p = transition_probability(kin, t).p;
      worst = std::max(worst, std::abs(p - expect) / expect);
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
    spread = std::max(spread, hi - lo);
  }
  r.line(worst < 1e-6 && spread < 1e-10, "rotating-beam probability",
         fmt("max rel err %.3e, k spread %.3e", worst, spread));
}

void route_equivalence(Report& r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto ball = [&](double radius) {
    Vec3 v;
    do v = Vec3(u(rng), u(rng), u(rng));
    while (v.norm() > 1.0);
    return (radius * v).eval();
  };
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const FourMomentum k(1.0, ball(3.0));
    const Vec3 a = ball(0.1), w = ball(0.1);
    const Complex direct = matrix_element(k, FrameField::constant(a, w), 0.0);
    const Complex closed = kI * (k.energy() / 2.0) * a12_closed_form(k, w, a);
    const double scale = std::max(std::abs(closed), 1e-300);
    worst = std::max(worst, std::abs(direct - closed) / scale);
  }
  r.line(worst < 1e-12, "amplitude route equivalence", fmt("max rel err %.3e", worst));
}

void conclusions(Report& r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  bool zero = true, nonzero = true;
  for (int i = 0; i < 1000; ++i) {
    const FourMomentum k(1.0, Vec3(10 * u(rng), 10 * u(rng), 0.0));
    const Vec3 a(u(rng), u(rng), 0.0), w(0.0, 0.0, u(rng));
    zero = zero && a12_closed_form(k, w, a) == Complex(0.0, 0.0) &&
           std::abs(matrix_element(k, FrameField::constant(a, w), 0.0)) < 1e-15;
    const Vec3 wt(u(rng), u(rng), u(rng));
    if (wt.x() == 0.0 && wt.y() == 0.0) continue;
    nonzero = nonzero && std::abs(a12_closed_form(FourMomentum::at_rest(), wt, Vec3::Zero())) > 0;
  }
  r.line(zero, "no flip without k3, transverse rotation or a3", "");
  r.line(nonzero, "flip at rest under transverse rotation", "");
}

void flat_conservation(Report& r) {
  double worst = 0.0;
  for (double k : {0.0, 0.5}) {
    const auto state = DiracState::along_momentum(FourMomentum(1.0, Vec3(k, 0, 0)), SpinLabel::up,
                                                  FrameField::inertial(), {});
    worst = std::max(worst,
                     divergence_fd(state, {0.3, Vec3(0.2, -0.4, 0.7)}).cwiseAbs().maxCoeff());
  }
  r.line(worst < 1e-8, "flat-limit spin-current conservation", fmt("max |div| %.3e", worst));
}

}  // namespace

bool run_selftest(std::uint64_t seed, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(seed);
  Report r{out};
  rotating_beam(r);
  route_equivalence(r, rng);
  conclusions(r, rng);
  flat_conservation(r);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out << "selftest seed " << seed << ", " << fmt("%.2f s", secs) << "\n";
  return r.ok;
}
