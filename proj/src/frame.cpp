#include "nispin/frame.hpp"

#include <cmath>
#include <utility>

namespace nispin {

namespace {

Eigen::Matrix4d minkowski() { return Eigen::Vector4d(1.0, -1.0, -1.0, -1.0).asDiagonal(); }

Vec3 unit(int i) { return Vec3::Unit(i); }

}  // namespace

VectorSampler VectorSampler::constant(const Vec3& v) {
  return {[v](double) { return v; }, [](double) { return Vec3::Zero().eval(); }};
}

FrameField::FrameField(VectorSampler acceleration, VectorSampler rotation, bool stationary)
    : accel_(std::move(acceleration)), rot_(std::move(rotation)), stationary_(stationary) {
  if (!accel_.value || !rot_.value) throw std::invalid_argument("frame samplers must be set");
  if (!accel_.rate) accel_.rate = [](double) { return Vec3::Zero().eval(); };
  if (!rot_.rate) rot_.rate = [](double) { return Vec3::Zero().eval(); };
}

FrameField FrameField::constant(const Vec3& acceleration, const Vec3& rotation) {
  return FrameField(VectorSampler::constant(acceleration), VectorSampler::constant(rotation),
                    true);
}

FrameField FrameField::scaled(double s) const {
  auto scale = [s](const VectorSampler& v) {
    return VectorSampler{[s, f = v.value](double t) { return (s * f(t)).eval(); },
                         [s, f = v.rate](double t) { return (s * f(t)).eval(); }};
  };
  return FrameField(scale(accel_), scale(rot_), stationary_);
}

MetricDeviation metric_deviation(const FrameField& frame, const SpacetimePoint& p,
                                 MetricOrder order) {
  const Vec3 a = frame.acceleration(p.t);
  const Vec3 w = frame.rotation(p.t);
  const Vec3& x = p.x;
  const double ax = a.dot(x);
  const double wx = w.dot(x);
  MetricDeviation g;
  g.components(0, 0) = 2.0 * ax;
  if (order == MetricOrder::full) g.components(0, 0) += ax * ax - w.squaredNorm() * x.squaredNorm() + wx * wx;
  const Vec3 wcx = w.cross(x);
  for (int i = 0; i < 3; ++i) {
    g.components(0, i + 1) = -wcx[i];
    g.components(i + 1, 0) = -wcx[i];
  }
  return g;
}

MetricGradient metric_gradient(const FrameField& frame, const SpacetimePoint& p,
                               MetricOrder order) {
  const Vec3 a = frame.acceleration(p.t);
  const Vec3 w = frame.rotation(p.t);
  const Vec3 da = frame.acceleration_rate(p.t);
  const Vec3 dw = frame.rotation_rate(p.t);
  const Vec3& x = p.x;
  const double ax = a.dot(x);
  const double wx = w.dot(x);

  MetricGradient d;
  for (auto& m : d) m.setZero();

  // time derivative
  const bool full = order == MetricOrder::full;
  d[0](0, 0) = 2.0 * da.dot(x);
  if (full)
    d[0](0, 0) += 2.0 * da.dot(x) * ax - 2.0 * w.dot(dw) * x.squaredNorm() + 2.0 * wx * dw.dot(x);
  const Vec3 dwcx = dw.cross(x);
  for (int i = 0; i < 3; ++i) d[0](0, i + 1) = d[0](i + 1, 0) = -dwcx[i];

  for (int j = 0; j < 3; ++j) {
    auto& m = d[j + 1];
    m(0, 0) = 2.0 * a[j];
    if (full) m(0, 0) += 2.0 * a[j] * ax - 2.0 * w.squaredNorm() * x[j] + 2.0 * wx * w[j];
    const Vec3 wce = w.cross(unit(j));
    for (int i = 0; i < 3; ++i) m(0, i + 1) = m(i + 1, 0) = -wce[i];
  }
  return d;
}

TetradPerturbation tetrad_perturbation(const FrameField& frame, const SpacetimePoint& p) {
  const Vec3 a = frame.acceleration(p.t);
  const Vec3 wcx = frame.rotation(p.t).cross(p.x);
  TetradPerturbation h;
  h.upper(0, 0) = -a.dot(p.x);
  h.lower(0, 0) = a.dot(p.x);
  for (int i = 0; i < 3; ++i) {
    h.upper(i + 1, 0) = -wcx[i];  // -eps^{ijk} Omega_j x_k
    h.lower(i + 1, 0) = wcx[i];   // eps_{jki} Omega^j x^k
  }
  return h;
}

TetradGradient tetrad_gradient(const FrameField& frame, const SpacetimePoint& p) {
  const Vec3 a = frame.acceleration(p.t);
  const Vec3 w = frame.rotation(p.t);
  TetradGradient d;
  for (auto& m : d) m.setZero();
  d[0](0, 0) = -frame.acceleration_rate(p.t).dot(p.x);
  const Vec3 dwcx = frame.rotation_rate(p.t).cross(p.x);
  for (int i = 0; i < 3; ++i) d[0](i + 1, 0) = -dwcx[i];
  for (int j = 0; j < 3; ++j) {
    d[j + 1](0, 0) = -a[j];
    const Vec3 wce = w.cross(unit(j));
    for (int i = 0; i < 3; ++i) d[j + 1](i + 1, 0) = -wce[i];
  }
  return d;
}

SpinConnection spin_connection(const FrameField& frame, const SpacetimePoint& p) {
  const Vec3 a = frame.acceleration(p.t);
  SpinConnection g;
  g[0] = -0.5 * spin_dot(frame.rotation(p.t));
  for (int i = 0; i < 3; ++i) g[0] -= 0.5 * a[i] * sigma_flat(0, i + 1);
  for (int i = 1; i < 4; ++i) g[i].setZero();
  return g;
}

SpinConnection spin_connection_from_tetrad(const FrameField& frame, const SpacetimePoint& p) {
  const Eigen::Matrix4d g = minkowski() + metric_deviation(frame, p).components;
  const Eigen::Matrix4d g_inv = g.inverse();
  const MetricGradient dg = metric_gradient(frame, p);
  const Eigen::Matrix4d e_up = Eigen::Matrix4d::Identity() + tetrad_perturbation(frame, p).upper;
  const TetradGradient dh = tetrad_gradient(frame, p);
  const Eigen::Matrix4d e_low = g * e_up;  // e_{nu b}

  SpinConnection out;
  for (int mu = 0; mu < 4; ++mu) {
    // nabla_mu e_{nu b} = d_mu e_{nu b} - Gamma^lambda_{mu nu} e_{lambda b}
    Eigen::Matrix4d nabla = dg[mu] * e_up + g * dh[mu];
    for (int nu = 0; nu < 4; ++nu) {
      for (int lam = 0; lam < 4; ++lam) {
        double chr = 0.0;
        for (int s = 0; s < 4; ++s)
          chr += 0.5 * g_inv(lam, s) * (dg[nu](s, mu) + dg[mu](s, nu) - dg[s](mu, nu));
        nabla.row(nu) -= chr * e_low.row(lam);
      }
    }
    // contraction[a][b] = e^nu_a nabla_mu e_{nu b}
    const Eigen::Matrix4d contraction = e_up.transpose() * nabla;
    ComplexMatrix gm = ComplexMatrix::Zero();
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        if (a != b) gm += contraction(a, b) * sigma_flat(a, b);
    out[mu] = -0.25 * gm;
  }
  return out;
}

Christoffel christoffel_first_order(const FrameField& frame, const SpacetimePoint& p) {
  const MetricGradient dg = metric_gradient(frame, p);
  Christoffel c;
  for (int s = 0; s < 4; ++s) {
    for (int al = 0; al < 4; ++al) {
      for (int be = 0; be < 4; ++be) {
        // eta is diagonal, so only lambda = sigma survives
        c[s](al, be) = 0.5 * eta(s, s) * (dg[be](s, al) + dg[al](s, be) - dg[s](al, be));
      }
    }
  }
  return c;
}

double perturbation_magnitude(const FrameField& frame, const SpacetimePoint& p) {
  return metric_deviation(frame, p).components.cwiseAbs().maxCoeff();
}

}  // namespace nispin
