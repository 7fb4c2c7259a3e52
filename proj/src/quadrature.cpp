#include "nispin/quadrature.hpp"

#include <algorithm>
#include <numbers>

namespace nispin {

GaussLegendreRule::GaussLegendreRule(int order) : nodes(order), weights(order) {
  if (order < 1) throw std::invalid_argument("Gauss-Legendre order must be >= 1");
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= order; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
      }
      dp = order * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged root
    double p0 = 1.0, p1 = 0.0;
    for (int j = 1; j <= order; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
    }
    dp = order * (x * p0 - p1) / (x * x - 1.0);
    nodes[i] = -x;
    nodes[order - 1 - i] = x;
    weights[i] = weights[order - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

CompositeGaussLegendre::CompositeGaussLegendre(int nodes)
    : rule_(std::min(nodes, kPanelOrder)),
      panels_(nodes <= kPanelOrder ? 1 : (nodes + kPanelOrder - 1) / kPanelOrder) {
  if (nodes < 1) throw std::invalid_argument("quadrature node count must be >= 1");
}

}  // namespace nispin
