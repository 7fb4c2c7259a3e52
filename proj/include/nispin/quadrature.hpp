#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace nispin {

/// Gauss-Legendre nodes and weights on [-1, 1], Newton iteration on P_n.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendreRule(int order);
};

/// Composite Gauss-Legendre quadrature with equal-width panels. The total
/// node count is panels * panel_order; requests that are not a multiple of
/// the panel order are rounded up.
class CompositeGaussLegendre {
 public:
  static constexpr int kPanelOrder = 16;

  explicit CompositeGaussLegendre(int nodes = 1024);

  int nodes() const { return panels_ * static_cast<int>(rule_.nodes.size()); }
  int panels() const { return panels_; }

  /// Integrates f over [a, b]; b < a gives the oriented (negated) integral.
  /// The result type is whatever f returns (double, complex, Eigen matrix).
  template <class F>
  auto integrate(F&& f, double a, double b) const -> decltype(f(a)) {
    using R = decltype(f(a));
    const double width = (b - a) / panels_;
    const int order = static_cast<int>(rule_.nodes.size());
    R sum = rule_.weights[0] * f(a + 0.5 * width * (rule_.nodes[0] + 1.0));
    bool first = true;
    for (int p = 0; p < panels_; ++p) {
      const double lo = a + p * width;
      for (int i = 0; i < order; ++i) {
        if (first) {
          first = false;
          continue;
        }
        const double s = lo + 0.5 * width * (rule_.nodes[i] + 1.0);
        sum += rule_.weights[i] * f(s);
      }
    }
    return 0.5 * width * sum;
  }

 private:
  GaussLegendreRule rule_;
  int panels_;
};

}  // namespace nispin
