#include "nispin/dirac.hpp"

#include <array>
#include <cmath>
#include <string>

namespace nispin {

namespace {

using Pauli = Eigen::Matrix2cd;

std::array<Pauli, 3> pauli() {
  Pauli s1, s2, s3;
  s1 << 0, 1, 1, 0;
  s2 << 0, -kI, kI, 0;
  s3 << 1, 0, 0, -1;
  return {s1, s2, s3};
}

ComplexMatrix block(const Pauli& a, const Pauli& b, const Pauli& c, const Pauli& d) {
  ComplexMatrix m;
  m << a, b, c, d;
  return m;
}

struct Tables {
  std::array<ComplexMatrix, 4> gamma;
  std::array<std::array<ComplexMatrix, 4>, 4> sigma;
  std::array<ComplexMatrix, 3> spin;

  Tables() {
    const auto s = pauli();
    const Pauli one = Pauli::Identity();
    const Pauli zero = Pauli::Zero();
    gamma[0] = block(one, zero, zero, -one);
    for (int i = 0; i < 3; ++i) {
      gamma[i + 1] = block(zero, s[i], -s[i], zero);
      spin[i] = block(s[i], zero, zero, s[i]);
    }
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu)
        sigma[mu][nu] = 0.5 * kI * commutator(gamma[mu], gamma[nu]);
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

void check_index(int i, int hi, const char* what) {
  if (i < 0 || i >= hi)
    throw std::out_of_range(std::string(what) + " index out of range: " + std::to_string(i));
}

}  // namespace

FourMomentum::FourMomentum(double mass, const Vec3& k)
    : mass_(mass), k_(k), energy_(std::sqrt(k.squaredNorm() + mass * mass)) {
  if (!(mass > 0.0) || !std::isfinite(mass))
    throw std::invalid_argument("fermion mass must be positive and finite");
  if (!k.allFinite()) throw std::invalid_argument("momentum must be finite");
}

SpinLabel spin_label(int value) {
  if (value == 1) return SpinLabel::up;
  if (value == 2) return SpinLabel::down;
  throw std::invalid_argument("spin label must be 1 or 2, got " + std::to_string(value));
}

const ComplexMatrix& gamma_flat(int index) {
  check_index(index, 4, "gamma");
  return tables().gamma[index];
}

const ComplexMatrix& sigma_flat(int mu, int nu) {
  check_index(mu, 4, "sigma");
  check_index(nu, 4, "sigma");
  return tables().sigma[mu][nu];
}

const ComplexMatrix& spin_matrix(int i) {
  check_index(i, 3, "Sigma");
  return tables().spin[i];
}

ComplexMatrix spin_dot(const Vec3& v) {
  const auto& s = tables().spin;
  return v.x() * s[0] + v.y() * s[1] + v.z() * s[2];
}

Spinor plane_wave_spinor(const FourMomentum& k, SpinLabel spin) {
  const double e = k.energy();
  const double m = k.mass();
  const Vec3& p = k.spatial();
  const double norm = std::sqrt((e + m) / (2.0 * e));
  const double d = e + m;
  Spinor u;
  // Lower block is (sigma.k / (E+m)) phi.
  if (spin == SpinLabel::up) {
    u << 1.0, 0.0, p.z() / d, Complex(p.x(), p.y()) / d;
  } else {
    u << 0.0, 1.0, Complex(p.x(), -p.y()) / d, -p.z() / d;
  }
  return norm * u;
}

RowSpinor dirac_adjoint(const Spinor& u) { return u.adjoint() * gamma_flat(0); }

Complex sandwich(const Spinor& bra, const ComplexMatrix& m, const Spinor& ket,
                 AdjointKind kind) {
  const RowSpinor row = kind == AdjointKind::bar ? dirac_adjoint(bra) : RowSpinor(bra.adjoint());
  return (row * m * ket)(0, 0);
}

ComplexMatrix dirac_conjugate(const ComplexMatrix& m) {
  const auto& g0 = gamma_flat(0);
  return g0 * m.adjoint() * g0;
}

}  // namespace nispin
