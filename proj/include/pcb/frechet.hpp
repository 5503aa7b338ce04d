#pragma once

#include <span>
#include <string>
#include <string_view>

#include "pcb/error.hpp"

namespace pcb {

/// Slack used when deciding whether candidate bounds cross.
inline constexpr double kIntervalEpsilon = 1e-9;

/// A probability interval with 0 <= lo <= hi <= 1.
class Interval {
 public:
  constexpr Interval() = default;

  /// Throws InfeasibleInterval unless 0 <= lo <= hi <= 1.
  Interval(double lo, double hi);

  static Interval point(double value) { return clamped(value, value); }
  static Interval unit() { return Interval(0.0, 1.0); }

  /// Clamps both ends into [0, 1]; a crossing pair collapses onto the upper end.
  static Interval clamped(double lo, double hi);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double width() const noexcept { return hi_ - lo_; }
  double midpoint() const noexcept { return 0.5 * (lo_ + hi_); }

  bool contains(double value, double slack = 0.0) const noexcept {
    return value >= lo_ - slack && value <= hi_ + slack;
  }
  bool contains(const Interval& inner, double slack = 0.0) const noexcept {
    return inner.lo_ >= lo_ - slack && inner.hi_ <= hi_ + slack;
  }

  /// Pointwise division by a positive scalar, clamped back into [0, 1].
  Interval scaled_down(double divisor) const;

  bool operator==(const Interval&) const = default;

 private:
  double lo_ = 0.0;
  double hi_ = 1.0;
};

std::string to_string(const Interval& interval, int precision = 6);

/// max{0, sum(ps) - (|ps| - 1)}
double frechet_lower(std::span<const double> ps);

/// min(ps)
double frechet_upper(std::span<const double> ps);

/// [max lo, min hi]. Crossings within kIntervalEpsilon collapse; larger ones
/// throw InfeasibleInterval naming the two witnesses (labels if given,
/// otherwise positions).
Interval intersect(std::span<const Interval> intervals,
                   std::span<const std::string_view> labels = {});

}  // namespace pcb
