#include "nispin/precession.hpp"

#include <cmath>
#include <stdexcept>

namespace nispin {

Vec3 precession_rhs(const SpinVector& s, const Vec3& omega, const Vec3& v, const Vec3& a) {
  return s.cross(omega + v.cross(a));
}

PrecessionFields PrecessionFields::constant(const Vec3& omega, const Vec3& v, const Vec3& a) {
  return {[omega](double) { return omega; }, [v](double) { return v; },
          [a](double) { return a; }};
}

Vec3 PrecessionFields::axis(double t) const {
  Vec3 w = omega ? omega(t) : Vec3::Zero();
  if (velocity && acceleration) w += velocity(t).cross(acceleration(t));
  return w;
}

std::vector<SpinSample> integrate_precession(const SpinVector& s0, const PrecessionFields& fields,
                                             double t_end, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("precession step must be positive");
  if (!(t_end >= 0.0)) throw std::invalid_argument("precession end time must be non-negative");

  const auto f = [&](double t, const Vec3& s) { return s.cross(fields.axis(t)); };
  const auto steps = static_cast<long>(std::ceil(t_end / dt - 1e-12));

  std::vector<SpinSample> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back({0.0, s0});
  Vec3 s = s0;
  for (long i = 0; i < steps; ++i) {
    const double t = i * dt;
    const double h = std::min(dt, t_end - t);
    const Vec3 k1 = f(t, s);
    const Vec3 k2 = f(t + 0.5 * h, s + 0.5 * h * k1);
    const Vec3 k3 = f(t + 0.5 * h, s + 0.5 * h * k2);
    const Vec3 k4 = f(t + h, s + h * k3);
    s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.push_back({t + h, s});
  }
  return out;
}

double mashhoon_energy(const SpinVector& s, const Vec3& omega) { return -omega.dot(s); }

}  // namespace nispin
