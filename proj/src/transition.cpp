#include "nispin/transition.hpp"

#include <cmath>

namespace nispin {

PhaseDerivatives PhaseDerivatives::from_field(const PhaseField& field, const SpacetimePoint& x) {
  PhaseDerivatives d;
  d.phi_g_gradient = field.phi_g_gradient(x);
  d.phi_g_hessian = field.phi_g_hessian(x);
  if (const auto& em = field.em()) d.em_potential = em->charge * em->potential(x);
  return d;
}

std::array<ComplexMatrix, 4> t_gradient(const FrameField& frame, const FourMomentum& k,
                                        const SpacetimePoint& x, const PhaseDerivatives& d) {
  const TetradGradient dh = tetrad_gradient(frame, x);
  const SpinConnection gam = spin_connection(frame, x);
  const Vec4 kl = k.lower();
  const double m = k.mass();
  std::array<ComplexMatrix, 4> out;
  for (int nu = 0; nu < 4; ++nu) {
    ComplexMatrix t = ComplexMatrix::Zero();
    for (int al = 0; al < 4; ++al) {
      double coeff = 0.0;
      for (int mu = 0; mu < 4; ++mu) coeff += dh[nu](mu, al) * kl[mu];
      t += (coeff + d.phi_g_hessian(al, nu)) * gamma_flat(al);
    }
    t -= 2.0 * kI * m *
         ((d.phi_g_gradient[nu] - d.em_potential[nu]) * ComplexMatrix::Identity() + gam[nu]);
    out[nu] = t / (2.0 * m);
  }
  return out;
}

Complex contracted_t_gradient(const FourMomentum& k, const std::array<ComplexMatrix, 4>& tg) {
  const Vec4 ku = k.upper();
  ComplexMatrix c = ComplexMatrix::Zero();
  for (int nu = 0; nu < 4; ++nu) c += (ku[nu] / k.mass()) * tg[nu];
  return sandwich(plane_wave_spinor(k, SpinLabel::up), c, plane_wave_spinor(k, SpinLabel::down),
                  AdjointKind::bar);
}

Complex matrix_element(const FourMomentum& k, const FrameField& frame, double t) {
  const SpinConnection g = spin_connection(frame, SpacetimePoint{t, Vec3::Zero()});
  const Complex bracket = sandwich(plane_wave_spinor(k, SpinLabel::up), g[0],
                                   plane_wave_spinor(k, SpinLabel::down), AdjointKind::bar);
  return -kI * (k.energy() / k.mass()) * bracket;
}

Complex a12_closed_form(const FourMomentum& k, const Vec3& omega, const Vec3& a) {
  const double e = k.energy();
  const double m = k.mass();
  const Vec3& p = k.spatial();
  const double d = e + m;
  const Complex kminus(p.x(), -p.y());
  const Complex km2 = kminus * kminus;
  const double k3 = p.z();
  const double n2 = d / (2.0 * e);

  Complex a12 = -kI * (k3 / e) * a.x() - (k3 / e) * a.y() + kI * (kminus / e) * a.z();
  a12 += omega.z() * (k3 / e) * (-kminus / d);
  a12 += omega.x() * n2 * (1.0 + k3 * k3 / (d * d) - km2 / (d * d));
  a12 -= kI * omega.y() * n2 * (1.0 + k3 * k3 / (d * d) + km2 / (d * d));
  return a12;
}

AmplitudeSample amplitude_sample(const FlipKinematics& kin, double t) {
  const FourMomentum k = kin.momentum_at(t);
  const Complex a12 =
      a12_closed_form(k, kin.frame.rotation(t), kin.frame.acceleration(t));
  return {t, a12, kI * (k.energy() / (2.0 * k.mass())) * a12};
}

TransitionResult transition_probability(const FlipKinematics& kin, double t, int nodes) {
  if (!kin.momentum) throw std::invalid_argument("momentum sampler missing");
  if (!(t >= 0.0) || !std::isfinite(t))
    throw std::invalid_argument("transition time must be finite and non-negative");
  TransitionResult r;
  if (t == 0.0) return r;

  const auto f = [&](double s) { return matrix_element(kin.momentum_at(s), kin.frame, s); };
  const CompositeGaussLegendre whole(nodes);
  const CompositeGaussLegendre panel(CompositeGaussLegendre::kPanelOrder);
  const int panels = whole.panels();
  const double width = t / panels;

  Complex amp = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double lo = i * width;
    const Complex next = amp + panel.integrate(f, lo, lo + width);
    if (!r.t_max_valid && std::norm(next) >= 1.0) {
      double a = lo, b = lo + width;
      for (int it = 0; it < 200 && b - a > 1e-14 * t; ++it) {
        const double mid = 0.5 * (a + b);
        (std::norm(amp + panel.integrate(f, lo, mid)) >= 1.0 ? b : a) = mid;
      }
      r.t_max_valid = b;
    }
    amp = next;
  }
  r.p = std::norm(amp);
  r.valid = r.p <= 1.0;
  return r;
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

ClosedFormProbability p_rotating_beam(double omega, double t) {
  if (t < 0.0) throw std::invalid_argument("time must be non-negative");
  const double half = 0.5 * omega * t;
  const double p = half * half;
  return {p, p <= 1.0};
}

ClosedFormProbability p_helical(double k, double k3, double omega, double radius, double t,
                                double mass) {
  const double e = std::sqrt(k * k + k3 * k3 + mass * mass);
  const double amp = (k3 / e) * (omega * radius + k / (e + mass)) * std::sin(2.0 * omega * t);
  return {amp * amp, amp * amp <= 1.0};
}

double cyclotron_profile(double k, double omega_cyc, double t, double mass) {
  const double e = std::sqrt(k * k + mass * mass);
  const double c = k * k / ((e + mass) * (e + mass));
  const double x = omega_cyc * t;
  const double s = sinc(x);
  const double first = x * x * s * s * s * s;  // sin^4(x) / x^2
  const double second = 1.0 - c * sinc(2.0 * x);
  return t * t * (first + second * second);
}

ClosedFormProbability p_cyclotron(double k, double omega_rot, double omega_cyc, double t,
                                  double mass) {
  const double e = std::sqrt(k * k + mass * mass);
  const double pref = omega_rot * (e + mass) / (4.0 * e);
  const double p = pref * pref * cyclotron_profile(k, omega_cyc, t, mass);
  return {p, p <= 1.0};
}

double cyclotron_frequency(double charge, double field, double k, double mass) {
  return charge * field / std::sqrt(k * k + mass * mass);
}

}  // namespace nispin
