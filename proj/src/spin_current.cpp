#include "nispin/spin_current.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nispin {

double Rank3Tensor::max_abs_difference(const Rank3Tensor& other) const {
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    d = std::max(d, std::abs(values[i] - other.values[i]));
  return d;
}

double Rank3Tensor::max_abs() const {
  double d = 0.0;
  for (double v : values) d = std::max(d, std::abs(v));
  return d;
}

DiracState DiracState::along_momentum(const FourMomentum& k, SpinLabel spin, FrameField frame,
                                      const SpacetimePoint& start, PhaseOptions options) {
  DiracState s;
  s.k = k;
  s.spin = spin;
  s.frame = std::move(frame);
  s.worldline = Worldline::straight(start, k.spatial() / k.energy());
  s.options = options;
  return s;
}

FirstOrderSolution::FirstOrderSolution(DiracState state)
    : state_(std::move(state)),
      phases_(state_.worldline, state_.k, state_.frame, state_.options, state_.em),
      u_(plane_wave_spinor(state_.k, state_.spin)) {}

Spinor FirstOrderSolution::unperturbed(const SpacetimePoint& x) const {
  const double kx = state_.k.lower().dot(x.coords());
  return u_ * std::exp(-kI * kx);
}

Spinor FirstOrderSolution::operator()(const SpacetimePoint& x) const {
  const double m = state_.k.mass();
  const Vec4 kl = state_.k.lower();
  const Spinor psi0 = unperturbed(x);
  const ComplexMatrix phase = ComplexMatrix::Identity() - kI * phases_.at(x).total();
  const Spinor mpsi = phase * psi0;

  const Vec4 grad_scalar = phases_.phi_g_gradient(x) + phases_.phi_em_gradient(x);
  const SpinConnection grad_s = phases_.phi_s_gradient(x);
  const SpinConnection conn = spin_connection(state_.frame, x);
  const TetradPerturbation h = tetrad_perturbation(state_.frame, x);

  Spinor sum = Spinor::Zero();
  for (int mu = 0; mu < 4; ++mu) {
    // D_mu [(1 - i Phi_T) psi_0]
    const Spinor d = -kI * (grad_scalar[mu] * psi0 + grad_s[mu] * psi0) - kI * kl[mu] * mpsi +
                     kI * (conn[mu] * mpsi);
    ComplexMatrix g = gamma_flat(mu);
    for (int al = 0; al < 4; ++al) g += h.upper(mu, al) * gamma_flat(al);
    sum += g * d;
  }
  return -(1.0 / (2.0 * m)) * (-kI * sum - m * mpsi);
}

Spinor FirstOrderSolution::covariant_derivative(const SpacetimePoint& x, int rho) const {
  const double step = state_.options.fd_step;
  Vec4 plus = x.coords(), minus = x.coords();
  plus[rho] += step;
  minus[rho] -= step;
  const Spinor d = ((*this)(SpacetimePoint::from_coords(plus)) -
                    (*this)(SpacetimePoint::from_coords(minus))) /
                   (2.0 * step);
  return d + kI * (spin_connection(state_.frame, x)[rho] * (*this)(x));
}

Spinor perturbed_solution(const DiracState& state, const SpacetimePoint& x) {
  return FirstOrderSolution(state)(x);
}

ComplexMatrix sigma_at(const TetradPerturbation& h, int mu, int nu) {
  ComplexMatrix s = sigma_flat(mu, nu);
  for (int tau = 0; tau < 4; ++tau)
    s += h.upper(mu, tau) * sigma_flat(tau, nu) + h.upper(nu, tau) * sigma_flat(mu, tau);
  return s;
}

Rank3Tensor spin_current_definitional(const FirstOrderSolution& psi, const SpacetimePoint& x) {
  const double m = psi.state().k.mass();
  const TetradPerturbation h = tetrad_perturbation(psi.state().frame, x);
  const Spinor value = psi(x);
  const RowSpinor value_bar = dirac_adjoint(value);

  std::array<std::array<ComplexMatrix, 4>, 4> sig;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu) sig[mu][nu] = sigma_at(h, mu, nu);

  Rank3Tensor s;
  for (int rho = 0; rho < 4; ++rho) {
    const Spinor d = psi.covariant_derivative(x, rho);
    const RowSpinor d_bar = dirac_adjoint(d);
    for (int mu = 0; mu < 4; ++mu) {
      for (int nu = mu + 1; nu < 4; ++nu) {
        const Complex bil =
            (d_bar * sig[mu][nu] * value)(0, 0) - (value_bar * sig[mu][nu] * d)(0, 0);
        const Complex v = eta(rho, rho) * bil / (4.0 * kI * m);
        s(rho, mu, nu) = v.real();
        s(rho, nu, mu) = -v.real();
        s.imag_residue = std::max(s.imag_residue, std::abs(v.imag()));
      }
    }
  }
  return s;
}

Rank3Tensor spin_current_definitional(const DiracState& state, const SpacetimePoint& x) {
  return spin_current_definitional(FirstOrderSolution(state), x);
}

ExpansionTerms ExpansionTerms::none() {
  ExpansionTerms t;
  t.enabled.fill(false);
  return t;
}

ExpansionTerms ExpansionTerms::only(int index) {
  if (index < 1 || index > kCount) throw std::out_of_range("expansion term index out of range");
  ExpansionTerms t = none();
  t.enabled[index - 1] = true;
  return t;
}

ExpansionTerms ExpansionTerms::without(int index) const {
  if (index < 1 || index > kCount) throw std::out_of_range("expansion term index out of range");
  ExpansionTerms t = *this;
  t.enabled[index - 1] = false;
  return t;
}

std::string_view expansion_term_label(int index) {
  static constexpr std::array<std::string_view, ExpansionTerms::kCount> labels{
      "8im^2 k^rho sigma^{mu nu}",
      "8im k^rho h^[mu_tau sigma^{tau nu]}",
      "4im k^rho (Phi_G,al + k_s h^s_al){sigma^{mu nu}, gamma^al}",
      "-8im k^rho Phi_G k^[mu gamma^nu]",
      "4m k^rho k_al [sigma^{mu nu}, gamma^al Phi_S - gamma^0 Phi_S^+ gamma^0 gamma^al]",
      "4m^2 k^rho [sigma^{mu nu}, Phi_S - gamma^0 Phi_S^+ gamma^0]",
      "-8m^2 k^rho h^0_al [gamma^0, [sigma^{0 al}, sigma^{mu nu}]]",
      "-8im^2 k_s (Gamma^s_{al be} eta^{be rho} + d^rho h^s_al) eta^{al[mu} gamma^nu]",
      "8im^2 d^rho Phi_G (4m sigma^{mu nu} - 2i k^[mu gamma^nu])",
      "4im^2 gamma^0 Gamma^{rho+} gamma^0 {gamma^al k_al + m, sigma^{mu nu}} Gamma^rho",
  };
  if (index < 1 || index > ExpansionTerms::kCount)
    throw std::out_of_range("expansion term index out of range");
  return labels[index - 1];
}

Rank3Tensor spin_current_expanded(const FourMomentum& k, SpinLabel spin, const FrameField& frame,
                                  const PhaseField& phases, const SpacetimePoint& x,
                                  const ExpansionTerms& terms) {
  const double m = k.mass();
  const Vec4 ku = k.upper();
  const Vec4 kl = k.lower();
  const Spinor u = plane_wave_spinor(k, spin);
  const RowSpinor ub = dirac_adjoint(u);

  const TetradPerturbation h = tetrad_perturbation(frame, x);
  const TetradGradient dh = tetrad_gradient(frame, x);
  const Christoffel chr = christoffel_first_order(frame, x);
  const SpinConnection conn = spin_connection(frame, x);
  const double phi_g = phases.phi_g(x);
  const Vec4 dphi_g = phases.phi_g_gradient(x);
  const ComplexMatrix phi_s = phases.phi_s(x);
  const ComplexMatrix phi_s_conj = dirac_conjugate(phi_s);
  const auto& g0 = gamma_flat(0);

  ComplexMatrix kslash = m * ComplexMatrix::Identity();
  for (int al = 0; al < 4; ++al) kslash += kl[al] * gamma_flat(al);

  // k^[mu gamma^nu] = k^mu gamma^nu - k^nu gamma^mu
  const auto k_gamma = [&](int mu, int nu) -> ComplexMatrix {
    return ku[mu] * gamma_flat(nu) - ku[nu] * gamma_flat(mu);
  };

  const auto on = [&](int i) { return terms.enabled[i - 1]; };

  Rank3Tensor s;
  for (int rho = 0; rho < 4; ++rho) {
    const double kr = ku[rho];
    const double er = eta(rho, rho);
    for (int mu = 0; mu < 4; ++mu) {
      for (int nu = mu + 1; nu < 4; ++nu) {
        const ComplexMatrix& sig = sigma_flat(mu, nu);
        ComplexMatrix acc = ComplexMatrix::Zero();

        if (on(1)) acc += 8.0 * kI * m * m * kr * sig;

        if (on(2)) {
          ComplexMatrix a = ComplexMatrix::Zero();
          for (int tau = 0; tau < 4; ++tau)
            a += h.upper(mu, tau) * sigma_flat(tau, nu) - h.upper(nu, tau) * sigma_flat(tau, mu);
          acc += 8.0 * kI * m * kr * a;
        }

        if (on(3)) {
          ComplexMatrix a = ComplexMatrix::Zero();
          for (int al = 0; al < 4; ++al) {
            double c = dphi_g[al];
            for (int sg = 0; sg < 4; ++sg) c += kl[sg] * h.upper(sg, al);
            a += c * anticommutator(sig, gamma_flat(al));
          }
          acc += 4.0 * kI * m * kr * a;
        }

        if (on(4)) acc -= 8.0 * kI * m * kr * phi_g * k_gamma(mu, nu);

        if (on(5)) {
          ComplexMatrix a = ComplexMatrix::Zero();
          for (int al = 0; al < 4; ++al)
            a += kl[al] * commutator(sig, gamma_flat(al) * phi_s - phi_s_conj * gamma_flat(al));
          acc += 4.0 * m * kr * a;
        }

        if (on(6)) acc += 4.0 * m * m * kr * commutator(sig, phi_s - phi_s_conj);

        if (on(7)) {
          ComplexMatrix a = ComplexMatrix::Zero();
          for (int al = 0; al < 4; ++al)
            if (h.upper(0, al) != 0.0)
              a += h.upper(0, al) * commutator(g0, commutator(sigma_flat(0, al), sig));
          acc -= 8.0 * m * m * kr * a;
        }

        if (on(8)) {
          // eta^{al mu} is diagonal, so al = mu (resp. nu) in the antisymmetrized pair.
          const auto part = [&](int p, int q) -> ComplexMatrix {
            double c = 0.0;
            for (int sg = 0; sg < 4; ++sg)
              c += kl[sg] * (chr[sg](p, rho) * er + er * dh[rho](sg, p));
            return c * eta(p, p) * gamma_flat(q);
          };
          acc -= 8.0 * kI * m * m * (part(mu, nu) - part(nu, mu));
        }

        if (on(9))
          acc += 8.0 * kI * m * m * er * dphi_g[rho] *
                 (4.0 * m * sig - 2.0 * kI * k_gamma(mu, nu));

        if (on(10)) {
          const ComplexMatrix up = er * conn[rho];  // Gamma^rho
          acc += 4.0 * kI * m * m * dirac_conjugate(up) * anticommutator(kslash, sig) * up;
        }

        const Complex v = (ub * acc * u)(0, 0) / (16.0 * kI * m * m * m);
        s(rho, mu, nu) = v.real();
        s(rho, nu, mu) = -v.real();
        s.imag_residue = std::max(s.imag_residue, std::abs(v.imag()));
      }
    }
  }
  return s;
}

std::array<Eigen::Matrix4d, 4> divergence_terms_fd(const DiracState& state,
                                                   const SpacetimePoint& x) {
  const FirstOrderSolution psi(state);
  const double step = state.options.fd_step;
  std::array<Eigen::Matrix4d, 4> out;
  for (int rho = 0; rho < 4; ++rho) {
    Vec4 plus = x.coords(), minus = x.coords();
    plus[rho] += step;
    minus[rho] -= step;
    const Rank3Tensor sp = spin_current_definitional(psi, SpacetimePoint::from_coords(plus));
    const Rank3Tensor sm = spin_current_definitional(psi, SpacetimePoint::from_coords(minus));
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu)
        out[rho](mu, nu) = (sp(rho, mu, nu) - sm(rho, mu, nu)) / (2.0 * step);
  }
  return out;
}

Eigen::Matrix4d divergence_fd(const DiracState& state, const SpacetimePoint& x) {
  const auto parts = divergence_terms_fd(state, x);
  return parts[0] + parts[1] + parts[2] + parts[3];
}

std::array<Eigen::Matrix4d, 4> divergence_terms_richardson(const DiracState& state,
                                                           const SpacetimePoint& x) {
  DiracState half = state;
  half.options.fd_step *= 0.5;
  const auto coarse = divergence_terms_fd(state, x);
  const auto fine = divergence_terms_fd(half, x);
  std::array<Eigen::Matrix4d, 4> out;
  for (int rho = 0; rho < 4; ++rho) out[rho] = (4.0 * fine[rho] - coarse[rho]) / 3.0;
  return out;
}

double divergence_rest_frame_closed(double omega, const Vec3& a, const Vec3& x, double energy,
                                    double mass) {
  return (energy + mass) / (2.0 * energy) * omega * a.y() * x.x() / (1.0 + a.dot(x));
}

}  // namespace nispin
