#pragma once

// Path phases of the first-order solution: the scalar inertial phase Phi_G,
// the matrix spin-connection phase Phi_S and the electromagnetic phase
// Phi_EM, integrated along a worldline from its reference point.

#include "nispin/quadrature.hpp"
#include "nispin/worldline.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>

namespace nispin {

struct PhaseOptions {
  int nodes = 1024;        // composite Gauss-Legendre nodes along the worldline
  double fd_step = 1e-4;   // central-difference step for phase gradients (1/m)
  MetricOrder metric_order = MetricOrder::full;  // metric entering Phi_G
};

/// Signed charge e and a sampler of the covariant potential A_mu(z).
struct ElectromagneticPotential {
  double charge = 0.0;
  std::function<Vec4(const SpacetimePoint&)> potential;
};

struct PhaseResult {
  double phi_g = 0.0;
  ComplexMatrix phi_s = ComplexMatrix::Zero();
  double phi_em = 0.0;
  int quadrature_nodes = 0;

  /// Phi_T = Phi_S + (Phi_G + Phi_EM) I.
  ComplexMatrix total() const {
    return phi_s + (phi_g + phi_em) * ComplexMatrix::Identity();
  }
};

/// Integrand of Phi_G at z for tangent dz and field point x:
///   -1/4 [g_{al,lam,be} - g_{be,lam,al}][(x-z)^al k^be - (x-z)^be k^al] dz^lam
///   + 1/2 g_{al,lam} k^al dz^lam
double phi_g_integrand(const FrameField& frame, const FourMomentum& k, const SpacetimePoint& z,
                       const Vec4& dz, const SpacetimePoint& x,
                       MetricOrder order = MetricOrder::full);

/// Phi_G restricted to worldline parameters [from, to], with the (x - z)
/// factors referring to the field point x.
double phi_g_segment(const Worldline& w, const FourMomentum& k, const FrameField& frame,
                     double from, double to, const SpacetimePoint& x,
                     const CompositeGaussLegendre& quad, MetricOrder order = MetricOrder::full);

/// The Phi_G integrand is affine in the field point: value = c0 + c . x.
struct AffineIntegral {
  double c0 = 0.0;
  Vec4 c = Vec4::Zero();
  double at(const SpacetimePoint& x) const { return c0 + c.dot(x.coords()); }
};

AffineIntegral phi_g_affine_segment(const Worldline& w, const FourMomentum& k,
                                    const FrameField& frame, double from, double to,
                                    const CompositeGaussLegendre& quad,
                                    MetricOrder order = MetricOrder::full);

/// Phi_G at an endpoint lying on the worldline. Throws std::out_of_range if
/// the endpoint time is not a worldline parameter, std::invalid_argument if
/// the endpoint is off the worldline.
double phi_g(const Worldline& w, const FourMomentum& k, const FrameField& frame,
             const SpacetimePoint& x, const PhaseOptions& opts = {});

/// Plain (not path-ordered) integral of Gamma_lambda dz^lambda.
ComplexMatrix phi_s(const Worldline& w, const FrameField& frame, const SpacetimePoint& x,
                    const PhaseOptions& opts = {});

/// e * integral of A_lambda dz^lambda. Throws std::invalid_argument when the
/// potential sampler is missing.
double phi_em(const Worldline& w, const ElectromagneticPotential& em, const SpacetimePoint& x,
              const PhaseOptions& opts = {});

/// Phases as fields over spacetime. The contour to a point x runs along the
/// worldline from P to parameter x.t, then along the straight spatial segment
/// at fixed time from the worldline point to x. On the worldline this reduces
/// to the plain worldline integral; spatial derivatives correspond to
/// straight-line endpoint variation.
class PhaseField {
 public:
  PhaseField(Worldline w, FourMomentum k, FrameField frame, PhaseOptions opts = {},
             std::optional<ElectromagneticPotential> em = std::nullopt);

  const Worldline& worldline() const { return w_; }
  const FourMomentum& momentum() const { return k_; }
  const FrameField& frame() const { return frame_; }
  const PhaseOptions& options() const { return opts_; }
  const std::optional<ElectromagneticPotential>& em() const { return em_; }

  double phi_g(const SpacetimePoint& x) const;
  ComplexMatrix phi_s(const SpacetimePoint& x) const;
  double phi_em(const SpacetimePoint& x) const;
  PhaseResult at(const SpacetimePoint& x) const;

  /// d_mu Phi_G by central differences of the field.
  Vec4 phi_g_gradient(const SpacetimePoint& x) const;
  /// d_mu d_nu Phi_G by nested central differences.
  Eigen::Matrix4d phi_g_hessian(const SpacetimePoint& x) const;
  /// d_mu Phi_S. Gamma_i vanishes and Gamma_0 depends on time only, so this is
  /// exactly Gamma_mu(x).
  SpinConnection phi_s_gradient(const SpacetimePoint& x) const;
  /// d_mu Phi_EM by central differences (zero without a potential).
  Vec4 phi_em_gradient(const SpacetimePoint& x) const;

 private:
  Worldline w_;
  FourMomentum k_;
  FrameField frame_;
  PhaseOptions opts_;
  std::optional<ElectromagneticPotential> em_;
  CompositeGaussLegendre quad_;
  CompositeGaussLegendre segment_quad_;

  // Worldline integrals keyed by their upper limit; finite-difference
  // stencils revisit the same few times many times over.
  struct Cache {
    std::mutex lock;
    std::map<double, AffineIntegral> phi_g;
    std::map<double, ComplexMatrix> phi_s;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
  AffineIntegral worldline_phi_g(double t) const;
  ComplexMatrix worldline_phi_s(double t) const;
};

/// d_mu Phi_G at a worldline point, via PhaseField.
Vec4 phi_g_gradient(const Worldline& w, const FourMomentum& k, const FrameField& frame,
                    const SpacetimePoint& x, const PhaseOptions& opts = {});

}  // namespace nispin
