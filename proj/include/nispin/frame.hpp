#pragma once

// Geometry of a uniformly accelerated, rotating frame to first order in the
// metric deviation: gamma_{mu nu}, tetrad perturbation, spin connection and
// linearized Christoffel symbols, all as fields over spacetime points.

#include "nispin/dirac.hpp"

#include <array>
#include <functional>

namespace nispin {

struct SpacetimePoint {
  double t = 0.0;
  Vec3 x = Vec3::Zero();

  Vec4 coords() const { return {t, x.x(), x.y(), x.z()}; }
  static SpacetimePoint from_coords(const Vec4& c) { return {c[0], Vec3(c[1], c[2], c[3])}; }
};

/// A 3-vector valued function of coordinate time together with its time
/// derivative. Both must be deterministic.
struct VectorSampler {
  std::function<Vec3(double)> value;
  std::function<Vec3(double)> rate;

  static VectorSampler constant(const Vec3& v);
};

/// Acceleration a(t) and rotation rate Omega(t) of the non-inertial frame.
class FrameField {
 public:
  FrameField() : FrameField(constant(Vec3::Zero(), Vec3::Zero())) {}
  FrameField(VectorSampler acceleration, VectorSampler rotation, bool stationary = false);

  static FrameField constant(const Vec3& acceleration, const Vec3& rotation);
  static FrameField inertial() { return constant(Vec3::Zero(), Vec3::Zero()); }

  Vec3 acceleration(double t) const { return accel_.value(t); }
  Vec3 rotation(double t) const { return rot_.value(t); }
  Vec3 acceleration_rate(double t) const { return accel_.rate(t); }
  Vec3 rotation_rate(double t) const { return rot_.rate(t); }
  bool stationary() const { return stationary_; }

  /// The frame with (a, Omega) -> (s a, s Omega).
  FrameField scaled(double s) const;

 private:
  VectorSampler accel_;
  VectorSampler rot_;
  bool stationary_;
};

/// gamma_{mu nu}, symmetric, spatial block identically zero.
struct MetricDeviation {
  Eigen::Matrix4d components = Eigen::Matrix4d::Zero();
  double operator()(int mu, int nu) const { return components(mu, nu); }
};

/// d_lambda gamma_{mu nu}, indexed [lambda](mu, nu).
using MetricGradient = std::array<Eigen::Matrix4d, 4>;

/// h^mu_{alpha-hat} (row mu, column alpha) and h^{alpha-hat}_mu (row alpha,
/// column mu). The unit spatial block of the tetrad is not included.
struct TetradPerturbation {
  Eigen::Matrix4d upper = Eigen::Matrix4d::Zero();
  Eigen::Matrix4d lower = Eigen::Matrix4d::Zero();
};

/// d_lambda h^mu_{alpha-hat}, indexed [lambda](mu, alpha).
using TetradGradient = std::array<Eigen::Matrix4d, 4>;

/// Gamma^sigma_{alpha beta}, indexed [sigma](alpha, beta).
using Christoffel = std::array<Eigen::Matrix4d, 4>;

using SpinConnection = std::array<ComplexMatrix, 4>;

/// full: gamma_00 with its quadratic terms, as printed. linear: only the
/// terms linear in (a, Omega).
enum class MetricOrder { full, linear };

MetricDeviation metric_deviation(const FrameField& frame, const SpacetimePoint& p,
                                 MetricOrder order = MetricOrder::full);
MetricGradient metric_gradient(const FrameField& frame, const SpacetimePoint& p,
                               MetricOrder order = MetricOrder::full);

TetradPerturbation tetrad_perturbation(const FrameField& frame, const SpacetimePoint& p);
TetradGradient tetrad_gradient(const FrameField& frame, const SpacetimePoint& p);

/// Gamma_0 = -1/2 a_i sigma^{0i} - 1/2 Omega.Sigma, Gamma_i = 0.
SpinConnection spin_connection(const FrameField& frame, const SpacetimePoint& p);

/// Spin connection from its defining tetrad formula
///   Gamma_mu = -1/4 sigma^{ab} e^nu_a nabla_mu e_{nu b}
/// with the full metric, tetrad and Christoffels (no truncation). Agrees with
/// spin_connection() up to terms quadratic in (a, Omega).
SpinConnection spin_connection_from_tetrad(const FrameField& frame, const SpacetimePoint& p);

/// Linearized Christoffels 1/2 eta^{sigma lambda}(g_{lambda alpha,beta} +
/// g_{lambda beta,alpha} - g_{alpha beta,lambda}) built from the analytic
/// derivatives of metric_deviation().
Christoffel christoffel_first_order(const FrameField& frame, const SpacetimePoint& p);

/// max |gamma_{mu nu}|; the first-order expansion is trusted below
/// kPerturbationWarnThreshold.
double perturbation_magnitude(const FrameField& frame, const SpacetimePoint& p);

inline constexpr double kPerturbationWarnThreshold = 0.1;

}  // namespace nispin
