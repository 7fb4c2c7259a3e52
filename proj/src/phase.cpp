#include "nispin/phase.hpp"

#include <cmath>
#include <utility>

namespace nispin {

namespace {

constexpr double kOnWorldlineTol = 1e-9;

void require_on_worldline(const Worldline& w, const SpacetimePoint& x) {
  w.require(x.t);
  const double off = (w.position(x.t) - x.x).norm();
  if (off > kOnWorldlineTol * std::max(1.0, x.x.norm()))
    throw std::invalid_argument("endpoint is not on the worldline (offset " +
                                std::to_string(off) + ")");
}

template <class F>
Vec4 central_gradient(F&& f, const SpacetimePoint& x, double h) {
  Vec4 grad;
  const Vec4 c = x.coords();
  for (int mu = 0; mu < 4; ++mu) {
    Vec4 plus = c, minus = c;
    plus[mu] += h;
    minus[mu] -= h;
    grad[mu] = (f(SpacetimePoint::from_coords(plus)) - f(SpacetimePoint::from_coords(minus))) /
               (2.0 * h);
  }
  return grad;
}

AffineIntegral affine_integrand(const FrameField& frame, const FourMomentum& k,
                                const SpacetimePoint& z, const Vec4& dz, MetricOrder order) {
  const MetricDeviation g = metric_deviation(frame, z, order);
  const MetricGradient dg = metric_gradient(frame, z, order);
  const Vec4 ku = k.upper();
  AffineIntegral r;
  for (int lam = 0; lam < 4; ++lam) {
    if (dz[lam] == 0.0) continue;
    // The bracket is antisymmetric in (al, be), so the double sum is twice
    // the (x-z)^al k^be half.
    for (int al = 0; al < 4; ++al) {
      double b = 0.0;
      for (int be = 0; be < 4; ++be) b += (dg[be](al, lam) - dg[al](be, lam)) * ku[be];
      r.c[al] -= 0.5 * b * dz[lam];
    }
    for (int al = 0; al < 4; ++al) r.c0 += 0.5 * g(al, lam) * ku[al] * dz[lam];
  }
  r.c0 -= r.c.dot(z.coords());
  return r;
}

using Packed = Eigen::Matrix<double, 5, 1>;

Packed pack(const AffineIntegral& a) {
  Packed p;
  p << a.c0, a.c;
  return p;
}

AffineIntegral unpack(const Packed& p) { return {p[0], p.tail<4>()}; }

}  // namespace

double phi_g_integrand(const FrameField& frame, const FourMomentum& k, const SpacetimePoint& z,
                       const Vec4& dz, const SpacetimePoint& x, MetricOrder order) {
  return affine_integrand(frame, k, z, dz, order).at(x);
}

AffineIntegral phi_g_affine_segment(const Worldline& w, const FourMomentum& k,
                                    const FrameField& frame, double from, double to,
                                    const CompositeGaussLegendre& quad, MetricOrder order) {
  return unpack(quad.integrate(
      [&](double s) { return pack(affine_integrand(frame, k, w.point(s), w.tangent(s), order)); },
      from, to));
}

double phi_g_segment(const Worldline& w, const FourMomentum& k, const FrameField& frame,
                     double from, double to, const SpacetimePoint& x,
                     const CompositeGaussLegendre& quad, MetricOrder order) {
  return phi_g_affine_segment(w, k, frame, from, to, quad, order).at(x);
}

double phi_g(const Worldline& w, const FourMomentum& k, const FrameField& frame,
             const SpacetimePoint& x, const PhaseOptions& opts) {
  require_on_worldline(w, x);
  return phi_g_segment(w, k, frame, w.start(), x.t, x, CompositeGaussLegendre(opts.nodes),
                       opts.metric_order);
}

ComplexMatrix phi_s(const Worldline& w, const FrameField& frame, const SpacetimePoint& x,
                    const PhaseOptions& opts) {
  require_on_worldline(w, x);
  const CompositeGaussLegendre quad(opts.nodes);
  return quad.integrate(
      [&](double s) -> ComplexMatrix {
        const SpinConnection g = spin_connection(frame, w.point(s));
        const Vec4 dz = w.tangent(s);
        ComplexMatrix m = ComplexMatrix::Zero();
        for (int lam = 0; lam < 4; ++lam)
          if (dz[lam] != 0.0) m += dz[lam] * g[lam];
        return m;
      },
      w.start(), x.t);
}

double phi_em(const Worldline& w, const ElectromagneticPotential& em, const SpacetimePoint& x,
              const PhaseOptions& opts) {
  if (!em.potential) throw std::invalid_argument("electromagnetic potential sampler missing");
  require_on_worldline(w, x);
  const CompositeGaussLegendre quad(opts.nodes);
  return em.charge *
         quad.integrate([&](double s) { return em.potential(w.point(s)).dot(w.tangent(s)); },
                        w.start(), x.t);
}

PhaseField::PhaseField(Worldline w, FourMomentum k, FrameField frame, PhaseOptions opts,
                       std::optional<ElectromagneticPotential> em)
    : w_(std::move(w)),
      k_(std::move(k)),
      frame_(std::move(frame)),
      opts_(opts),
      em_(std::move(em)),
      quad_(opts.nodes),
      segment_quad_(CompositeGaussLegendre::kPanelOrder) {
  if (em_ && !em_->potential)
    throw std::invalid_argument("electromagnetic potential sampler missing");
  if (!(opts_.fd_step > 0.0)) throw std::invalid_argument("fd_step must be positive");
}

AffineIntegral PhaseField::worldline_phi_g(double t) const {
  {
    std::lock_guard<std::mutex> g(cache_->lock);
    if (auto it = cache_->phi_g.find(t); it != cache_->phi_g.end()) return it->second;
  }
  const AffineIntegral r = phi_g_affine_segment(w_, k_, frame_, w_.start(), t, quad_, opts_.metric_order);
  std::lock_guard<std::mutex> g(cache_->lock);
  if (cache_->phi_g.size() > 256) cache_->phi_g.clear();
  cache_->phi_g.emplace(t, r);
  return r;
}

ComplexMatrix PhaseField::worldline_phi_s(double t) const {
  {
    std::lock_guard<std::mutex> g(cache_->lock);
    if (auto it = cache_->phi_s.find(t); it != cache_->phi_s.end()) return it->second;
  }
  const ComplexMatrix r = nispin::phi_s(w_, frame_, w_.point(t), opts_);
  std::lock_guard<std::mutex> g(cache_->lock);
  if (cache_->phi_s.size() > 256) cache_->phi_s.clear();
  cache_->phi_s.emplace(t, r);
  return r;
}

double PhaseField::phi_g(const SpacetimePoint& x) const {
  w_.require(x.t);
  double value = worldline_phi_g(x.t).at(x);
  const Vec3 base = w_.position(x.t);
  const Vec3 d = x.x - base;
  if (d.squaredNorm() > 0.0) {
    const Vec4 dz(0.0, d.x(), d.y(), d.z());
    value += segment_quad_.integrate(
        [&](double s) {
          return phi_g_integrand(frame_, k_, SpacetimePoint{x.t, base + s * d}, dz, x,
                                 opts_.metric_order);
        },
        0.0, 1.0);
  }
  return value;
}

ComplexMatrix PhaseField::phi_s(const SpacetimePoint& x) const {
  // The spatial segment contributes Gamma_i dx^i = 0.
  w_.require(x.t);
  return worldline_phi_s(x.t);
}

double PhaseField::phi_em(const SpacetimePoint& x) const {
  if (!em_) return 0.0;
  w_.require(x.t);
  double value = nispin::phi_em(w_, *em_, w_.point(x.t), opts_);
  const Vec3 base = w_.position(x.t);
  const Vec3 d = x.x - base;
  if (d.squaredNorm() > 0.0) {
    const Vec4 dz(0.0, d.x(), d.y(), d.z());
    value += em_->charge *
             segment_quad_.integrate(
                 [&](double s) {
                   return em_->potential(SpacetimePoint{x.t, base + s * d}).dot(dz);
                 },
                 0.0, 1.0);
  }
  return value;
}

PhaseResult PhaseField::at(const SpacetimePoint& x) const {
  return {phi_g(x), phi_s(x), phi_em(x), quad_.nodes()};
}

Vec4 PhaseField::phi_g_gradient(const SpacetimePoint& x) const {
  return central_gradient([this](const SpacetimePoint& p) { return phi_g(p); }, x,
                          opts_.fd_step);
}

Eigen::Matrix4d PhaseField::phi_g_hessian(const SpacetimePoint& x) const {
  Eigen::Matrix4d hess;
  const Vec4 c = x.coords();
  const double h = opts_.fd_step;
  for (int mu = 0; mu < 4; ++mu) {
    Vec4 plus = c, minus = c;
    plus[mu] += h;
    minus[mu] -= h;
    hess.row(mu) = ((phi_g_gradient(SpacetimePoint::from_coords(plus)) -
                     phi_g_gradient(SpacetimePoint::from_coords(minus))) /
                    (2.0 * h))
                       .transpose();
  }
  return 0.5 * (hess + hess.transpose());
}

SpinConnection PhaseField::phi_s_gradient(const SpacetimePoint& x) const {
  return spin_connection(frame_, x);
}

Vec4 PhaseField::phi_em_gradient(const SpacetimePoint& x) const {
  if (!em_) return Vec4::Zero();
  return central_gradient([this](const SpacetimePoint& p) { return phi_em(p); }, x,
                          opts_.fd_step);
}

Vec4 phi_g_gradient(const Worldline& w, const FourMomentum& k, const FrameField& frame,
                    const SpacetimePoint& x, const PhaseOptions& opts) {
  require_on_worldline(w, x);
  return PhaseField(w, k, frame, opts).phi_g_gradient(x);
}

}  // namespace nispin
