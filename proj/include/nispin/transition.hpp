#pragma once

// Spin-flip matrix elements <u1| T_{,nu} |u2>, the closed-form amplitude
// A12 and the transition probability P(2 -> 1).
//
// Bra-ket contractions here use the Dirac adjoint (u1-bar ... u2): with that
// contraction <u1|u2> and <u1|gamma^mu|u2> vanish, and -2 u1-bar Gamma_0 u2
// reproduces the six-term closed form of A12 term by term.

#include "nispin/phase.hpp"

#include <functional>
#include <optional>

namespace nispin {

/// Time-dependent kinematics of a spin-flip calculation: the momentum k(t)
/// labelling the instantaneous plane-wave states and the frame a(t), Omega(t).
struct FlipKinematics {
  double mass = 1.0;
  std::function<Vec3(double)> momentum;
  FrameField frame;

  FourMomentum momentum_at(double t) const { return {mass, momentum(t)}; }
};

struct AmplitudeSample {
  double t = 0.0;
  Complex a12;
  Complex integrand;  // (E / 2m) i A12
};

struct TransitionResult {
  double p = 0.0;
  bool valid = true;                   // p <= 1
  std::optional<double> t_max_valid;   // first time in [0, t] where p reaches 1
};

/// Derivatives of the phases at a point, as consumed by t_gradient().
struct PhaseDerivatives {
  Vec4 phi_g_gradient = Vec4::Zero();
  Eigen::Matrix4d phi_g_hessian = Eigen::Matrix4d::Zero();
  Vec4 em_potential = Vec4::Zero();  // e A_nu (covariant)

  static PhaseDerivatives from_field(const PhaseField& field, const SpacetimePoint& x);
};

/// T_{,nu} = 1/(2m){ h^mu_{al,nu} gamma^al k_mu + gamma^mu Phi_{G,mu nu}
///                   - 2im (Phi_{G,nu} + Gamma_nu - e A_nu) }
std::array<ComplexMatrix, 4> t_gradient(const FrameField& frame, const FourMomentum& k,
                                        const SpacetimePoint& x, const PhaseDerivatives& d);

/// <u1| (k^nu / m) T_{,nu} |u2> contracted from the full T_{,nu} matrices.
Complex contracted_t_gradient(const FourMomentum& k, const std::array<ComplexMatrix, 4>& tg);

/// -i (E/m) u1-bar Gamma_0(t) u2, by direct spinor contraction.
Complex matrix_element(const FourMomentum& k, const FrameField& frame, double t);

/// The six-term closed form of A12.
Complex a12_closed_form(const FourMomentum& k, const Vec3& omega, const Vec3& a);

AmplitudeSample amplitude_sample(const FlipKinematics& kin, double t);

/// P = |int_0^t matrix_element dt'|^2 by composite Gauss-Legendre quadrature.
/// Throws std::invalid_argument for t < 0 or missing samplers.
TransitionResult transition_probability(const FlipKinematics& kin, double t, int nodes = 1024);

struct ClosedFormProbability {
  double p = 0.0;
  bool valid = true;
};

/// (Omega t / 2)^2, valid for t <= 2 / Omega.
ClosedFormProbability p_rotating_beam(double omega, double t);

/// Printed helical-packet closed form [k3/E (Omega R + k/(E+m)) sin 2 Omega t]^2.
/// Kept verbatim for comparison; it does not follow from integrating A12.
ClosedFormProbability p_helical(double k, double k3, double omega, double radius, double t,
                                double mass = 1.0);

/// Printed cyclotron-orbit closed form
///   (Omega t (E+m) / 4E)^2 { sin^4 wt / (w t)^2 + (1 - k^2/(E+m)^2 sin 2wt / 2wt)^2 }.
/// Uses the analytic w -> 0 limit through sinc.
ClosedFormProbability p_cyclotron(double k, double omega_rot, double omega_cyc, double t,
                                  double mass = 1.0);

/// The bracket {...} of p_cyclotron times t^2, i.e. its time profile.
double cyclotron_profile(double k, double omega_cyc, double t, double mass = 1.0);

/// w = e B / (m gamma_L) = e B / E.
double cyclotron_frequency(double charge, double field, double k, double mass = 1.0);

/// sin(x)/x with a series near zero.
double sinc(double x);

}  // namespace nispin
