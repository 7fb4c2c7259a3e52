#include "nispin/worldline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nispin {

std::string to_string(WorldlineKind kind) {
  switch (kind) {
    case WorldlineKind::straight: return "straight";
    case WorldlineKind::circular: return "circular";
    case WorldlineKind::helical: return "helical";
    case WorldlineKind::sampled: return "sampled";
  }
  return "unknown";
}

Worldline Worldline::straight(const SpacetimePoint& start, const Vec3& velocity) {
  Worldline w;
  w.kind_ = WorldlineKind::straight;
  w.origin_ = start.x;
  w.t0_ = start.t;
  w.start_ = start.t;
  w.velocity_ = velocity;
  return w;
}

Worldline Worldline::circular(const Vec3& center, double radius, double angular_rate,
                              double phase) {
  return helical(center, radius, angular_rate, 0.0, phase).with_kind_circular();
}

Worldline Worldline::helical(const Vec3& center, double radius, double angular_rate,
                             double axial_speed, double phase) {
  if (!(radius >= 0.0)) throw std::invalid_argument("orbit radius must be non-negative");
  Worldline w;
  w.kind_ = WorldlineKind::helical;
  w.origin_ = center;
  w.radius_ = radius;
  w.rate_ = angular_rate;
  w.axial_ = axial_speed;
  w.phase_ = phase;
  return w;
}

Worldline Worldline::sampled(std::vector<double> times, std::vector<Vec3> positions) {
  if (times.size() < 2 || times.size() != positions.size())
    throw std::invalid_argument("sampled worldline needs >= 2 matching samples");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("sampled worldline times must be strictly increasing");
  Worldline w;
  w.kind_ = WorldlineKind::sampled;
  const std::size_t n = times.size();
  w.slopes_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
    w.slopes_[i] = (positions[hi] - positions[lo]) / (times[hi] - times[lo]);
  }
  w.lo_ = times.front();
  w.hi_ = times.back();
  w.start_ = times.front();
  w.times_ = std::move(times);
  w.samples_ = std::move(positions);
  return w;
}

Worldline Worldline::with_kind_circular() const {
  Worldline w = *this;
  w.kind_ = WorldlineKind::circular;
  return w;
}

Worldline Worldline::with_start(double t0) const {
  require(t0);
  Worldline w = *this;
  w.start_ = t0;
  return w;
}

void Worldline::require(double t) const {
  if (!std::isfinite(t) || !contains(t))
    throw std::out_of_range("worldline parameter " + std::to_string(t) + " outside [" +
                            std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
}

Vec3 Worldline::position(double t) const {
  switch (kind_) {
    case WorldlineKind::straight:
      return origin_ + velocity_ * (t - t0_);
    case WorldlineKind::circular:
    case WorldlineKind::helical: {
      const double th = rate_ * t + phase_;
      return origin_ + Vec3(radius_ * std::sin(th), -radius_ * std::cos(th), axial_ * t);
    }
    case WorldlineKind::sampled: {
      require(t);
      const auto it = std::upper_bound(times_.begin(), times_.end(), t);
      std::size_t i = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - times_.begin(), 1),
                                            times_.size() - 1);
      const double h = times_[i] - times_[i - 1];
      const double s = (t - times_[i - 1]) / h;
      const double s2 = s * s, s3 = s2 * s;
      return (2 * s3 - 3 * s2 + 1) * samples_[i - 1] + (s3 - 2 * s2 + s) * h * slopes_[i - 1] +
             (-2 * s3 + 3 * s2) * samples_[i] + (s3 - s2) * h * slopes_[i];
    }
  }
  return Vec3::Zero();
}

Vec3 Worldline::velocity(double t) const {
  switch (kind_) {
    case WorldlineKind::straight:
      return velocity_;
    case WorldlineKind::circular:
    case WorldlineKind::helical: {
      const double th = rate_ * t + phase_;
      return Vec3(radius_ * rate_ * std::cos(th), radius_ * rate_ * std::sin(th), axial_);
    }
    case WorldlineKind::sampled: {
      require(t);
      const auto it = std::upper_bound(times_.begin(), times_.end(), t);
      std::size_t i = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - times_.begin(), 1),
                                            times_.size() - 1);
      const double h = times_[i] - times_[i - 1];
      const double s = (t - times_[i - 1]) / h;
      const double s2 = s * s;
      return ((6 * s2 - 6 * s) * samples_[i - 1] + (-6 * s2 + 6 * s) * samples_[i]) / h +
             (3 * s2 - 4 * s + 1) * slopes_[i - 1] + (3 * s2 - 2 * s) * slopes_[i];
    }
  }
  return Vec3::Zero();
}

Vec4 Worldline::tangent(double t) const {
  const Vec3 v = velocity(t);
  return {1.0, v.x(), v.y(), v.z()};
}

}  // namespace nispin
