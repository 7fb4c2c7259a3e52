#pragma once

// Classical worldlines z^mu(lambda), parametrized by coordinate time
// (lambda = t), used as integration contours for the path phases.

#include "nispin/frame.hpp"

#include <limits>
#include <string>
#include <vector>

namespace nispin {

enum class WorldlineKind { straight, circular, helical, sampled };

std::string to_string(WorldlineKind kind);

class Worldline {
 public:
  /// x(t) = start.x + v (t - start.t).
  static Worldline straight(const SpacetimePoint& start, const Vec3& velocity);

  /// Circle of the given radius in the plane z = center.z, traversed
  /// counter-clockwise at angular_rate. The velocity direction is
  /// (cos(w t + phase), sin(w t + phase), 0), so a momentum k(cos wt, sin wt)
  /// is tangent to the orbit.
  static Worldline circular(const Vec3& center, double radius, double angular_rate,
                            double phase = 0.0);

  /// The circular orbit above, drifting along z at axial_speed.
  static Worldline helical(const Vec3& center, double radius, double angular_rate,
                           double axial_speed, double phase = 0.0);

  /// Cubic Hermite interpolation through (t_i, x_i); tangents from centered
  /// differences. Times must be strictly increasing, at least two samples.
  static Worldline sampled(std::vector<double> times, std::vector<Vec3> positions);

  WorldlineKind kind() const { return kind_; }

  Vec3 position(double t) const;
  Vec3 velocity(double t) const;
  SpacetimePoint point(double t) const { return {t, position(t)}; }
  /// dz^mu / dlambda = (1, v).
  Vec4 tangent(double t) const;

  /// The reference point P; phases are integrated from here.
  double start() const { return start_; }
  SpacetimePoint reference() const { return point(start_); }
  /// Worldline with the reference point moved to parameter t0.
  Worldline with_start(double t0) const;

  bool contains(double t) const { return t >= lo_ && t <= hi_; }
  /// Throws std::out_of_range unless t is a valid parameter.
  void require(double t) const;

 private:
  Worldline() = default;
  Worldline with_kind_circular() const;

  WorldlineKind kind_ = WorldlineKind::straight;
  double start_ = 0.0;
  double lo_ = -std::numeric_limits<double>::infinity();
  double hi_ = std::numeric_limits<double>::infinity();

  Vec3 origin_ = Vec3::Zero();  // straight: position at t0; circular/helical: center
  Vec3 velocity_ = Vec3::Zero();
  double t0_ = 0.0;
  double radius_ = 0.0;
  double rate_ = 0.0;
  double phase_ = 0.0;
  double axial_ = 0.0;

  std::vector<double> times_;
  std::vector<Vec3> samples_;
  std::vector<Vec3> slopes_;
};

}  // namespace nispin
