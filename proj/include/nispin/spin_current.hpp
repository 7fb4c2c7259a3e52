#pragma once

// Spin-current tensor S^{rho mu nu} of the first-order solution
// Psi = T psi_0, computed (a) from its bilinear definition with finite
// differences of Psi and (b) from the term-by-term first-order expansion.

#include "nispin/phase.hpp"

#include <array>
#include <optional>
#include <string_view>

namespace nispin {

struct Rank3Tensor {
  std::array<double, 64> values{};
  double imag_residue = 0.0;  // max |Im| over components

  double& operator()(int rho, int mu, int nu) { return values[16 * rho + 4 * mu + nu]; }
  double operator()(int rho, int mu, int nu) const { return values[16 * rho + 4 * mu + nu]; }

  double max_abs_difference(const Rank3Tensor& other) const;
  double max_abs() const;
};

/// A plane-wave state propagated into the non-inertial frame. The phases are
/// integrated along `worldline` from its reference point.
struct DiracState {
  FourMomentum k;
  SpinLabel spin = SpinLabel::up;
  FrameField frame;
  Worldline worldline = Worldline::straight({}, Vec3::Zero());
  PhaseOptions options;
  std::optional<ElectromagneticPotential> em;

  /// State whose worldline is the classical straight path through `start`
  /// with velocity k/E.
  static DiracState along_momentum(const FourMomentum& k, SpinLabel spin, FrameField frame,
                                   const SpacetimePoint& start, PhaseOptions options = {});
};

/// Psi(x) = -1/(2m) (-i gamma^mu(x) D_mu - m)(1 - i Phi_T) psi_0(x), with
/// gamma^mu(x) = (delta + h)^mu_al gamma^al and D_mu = d_mu + i Gamma_mu.
class FirstOrderSolution {
 public:
  explicit FirstOrderSolution(DiracState state);

  const DiracState& state() const { return state_; }
  const PhaseField& phases() const { return phases_; }

  Spinor operator()(const SpacetimePoint& x) const;
  /// psi_0(x) = u(k) exp(-i k.x).
  Spinor unperturbed(const SpacetimePoint& x) const;
  /// D_rho Psi with d_rho Psi by central differences.
  Spinor covariant_derivative(const SpacetimePoint& x, int rho) const;

 private:
  DiracState state_;
  PhaseField phases_;
  Spinor u_;
};

Spinor perturbed_solution(const DiracState& state, const SpacetimePoint& x);

/// sigma^{mu nu}(x) = sigma^{mu nu} + h^mu_tau sigma^{tau nu} + h^nu_tau sigma^{mu tau}.
ComplexMatrix sigma_at(const TetradPerturbation& h, int mu, int nu);

/// S^{rho mu nu} = 1/(4im) [ (nabla^rho Psi)-bar sigma^{mu nu}(x) Psi
///                          - Psi-bar sigma^{mu nu}(x) nabla^rho Psi ].
Rank3Tensor spin_current_definitional(const FirstOrderSolution& psi, const SpacetimePoint& x);
Rank3Tensor spin_current_definitional(const DiracState& state, const SpacetimePoint& x);

/// Registry of the terms of the first-order expansion of S^{rho mu nu}.
/// Term 10 (the Gamma^rho ... Gamma^rho product) is ambiguous in its index
/// placement and quadratic in the connection; it is off by default.
struct ExpansionTerms {
  static constexpr int kCount = 10;
  std::array<bool, kCount> enabled{true, true, true, true, true, true, true, true, true, false};

  static ExpansionTerms defaults() { return {}; }
  static ExpansionTerms none();
  static ExpansionTerms only(int index);  // 1-based
  ExpansionTerms without(int index) const;
};

std::string_view expansion_term_label(int index);  // 1-based

Rank3Tensor spin_current_expanded(const FourMomentum& k, SpinLabel spin, const FrameField& frame,
                                  const PhaseField& phases, const SpacetimePoint& x,
                                  const ExpansionTerms& terms = ExpansionTerms::defaults());

/// d_rho S^{rho mu nu} for each rho separately (no sum), by central
/// differences of the definitional tensor with the state's fd_step.
std::array<Eigen::Matrix4d, 4> divergence_terms_fd(const DiracState& state,
                                                   const SpacetimePoint& x);

/// d_rho S^{rho mu nu}, indexed (mu, nu).
Eigen::Matrix4d divergence_fd(const DiracState& state, const SpacetimePoint& x);

/// divergence_terms_fd with one Richardson step: (4 D(h/2) - D(h)) / 3.
std::array<Eigen::Matrix4d, 4> divergence_terms_richardson(const DiracState& state,
                                                           const SpacetimePoint& x);

/// Rest-frame closed form (E+m)/(2E) Omega a_2 x / (1 + a.x), Omega along z,
/// x the field point's x-coordinate.
double divergence_rest_frame_closed(double omega, const Vec3& a, const Vec3& x, double energy,
                                    double mass = 1.0);

}  // namespace nispin
