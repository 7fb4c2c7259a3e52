#pragma once

// Flat-spacetime Dirac algebra in the standard (Dirac) representation,
// metric signature (+,-,-,-), natural units hbar = c = 1.

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>

namespace nispin {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::Matrix4cd;
using Spinor = Eigen::Vector4cd;
using RowSpinor = Eigen::RowVector4cd;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;

inline constexpr Complex kI{0.0, 1.0};

/// Minkowski metric component eta^{mu nu} (equal to eta_{mu nu}).
inline constexpr double eta(int mu, int nu) {
  return mu != nu ? 0.0 : (mu == 0 ? 1.0 : -1.0);
}

/// On-shell four-momentum. Energy is always derived from k and m, so the
/// mass-shell relation E^2 = k.k + m^2 holds by construction.
class FourMomentum {
 public:
  FourMomentum() : FourMomentum(1.0, Vec3::Zero()) {}
  FourMomentum(double mass, const Vec3& k);

  static FourMomentum at_rest(double mass = 1.0) { return {mass, Vec3::Zero()}; }

  double mass() const { return mass_; }
  double energy() const { return energy_; }
  const Vec3& spatial() const { return k_; }

  /// k^mu (contravariant).
  Vec4 upper() const { return {energy_, k_.x(), k_.y(), k_.z()}; }
  /// k_mu = eta_{mu nu} k^nu.
  Vec4 lower() const { return {energy_, -k_.x(), -k_.y(), -k_.z()}; }

 private:
  double mass_;
  Vec3 k_;
  double energy_;
};

enum class SpinLabel { up = 1, down = 2 };

/// Parses 1 or 2; anything else throws std::invalid_argument.
SpinLabel spin_label(int value);

enum class AdjointKind { dagger, bar };

/// gamma^{mu-hat}; index outside 0..3 throws std::out_of_range.
const ComplexMatrix& gamma_flat(int index);

/// sigma^{mu nu} = (i/2)[gamma^mu, gamma^nu].
const ComplexMatrix& sigma_flat(int mu, int nu);

/// Sigma^i = diag(sigma^i, sigma^i), the spin operator up to a factor 1/2.
const ComplexMatrix& spin_matrix(int i);

/// Omega . Sigma for a real 3-vector.
ComplexMatrix spin_dot(const Vec3& v);

/// Positive-energy plane-wave spinor u(k) with phi = (1,0) for spin up and
/// phi = (0,1) for spin down, normalized to u^dagger u = 1.
Spinor plane_wave_spinor(const FourMomentum& k, SpinLabel spin);

/// u-bar = u^dagger gamma^0.
RowSpinor dirac_adjoint(const Spinor& u);

/// bra^dagger M ket or bra-bar M ket.
Complex sandwich(const Spinor& bra, const ComplexMatrix& m, const Spinor& ket,
                 AdjointKind kind);

/// gamma^0 M^dagger gamma^0.
ComplexMatrix dirac_conjugate(const ComplexMatrix& m);

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}
inline ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b + b * a;
}

}  // namespace nispin
