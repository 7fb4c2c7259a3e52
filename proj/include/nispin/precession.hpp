#pragma once

// Classical spin precession ds/dt = s x (Omega + v x a), integrated with
// fixed-step RK4.

#include "nispin/dirac.hpp"

#include <functional>
#include <vector>

namespace nispin {

/// Spin vector in units of hbar; |s| = 1/2 for a fermion.
using SpinVector = Vec3;

Vec3 precession_rhs(const SpinVector& s, const Vec3& omega, const Vec3& v, const Vec3& a);

struct PrecessionFields {
  std::function<Vec3(double)> omega;
  std::function<Vec3(double)> velocity;
  std::function<Vec3(double)> acceleration;

  static PrecessionFields constant(const Vec3& omega, const Vec3& v = Vec3::Zero(),
                                   const Vec3& a = Vec3::Zero());
  Vec3 axis(double t) const;  // Omega + v x a
};

struct SpinSample {
  double t = 0.0;
  SpinVector s = SpinVector::Zero();
};

/// Samples at t = 0, dt, ..., with the last step shortened to land on t_end.
/// Throws std::invalid_argument for dt <= 0 or t_end < 0.
std::vector<SpinSample> integrate_precession(const SpinVector& s0, const PrecessionFields& fields,
                                             double t_end, double dt);

double mashhoon_energy(const SpinVector& s, const Vec3& omega);

}  // namespace nispin
