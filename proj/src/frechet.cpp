#include "pcb/frechet.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace pcb {

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!(lo >= 0.0 && lo <= hi && hi <= 1.0)) {
    throw Error(ErrorCode::InfeasibleInterval, fmt::format("[{}, {}] is not a probability interval", lo, hi));
  }
}

Interval Interval::clamped(double lo, double hi) {
  lo = std::clamp(lo, 0.0, 1.0);
  hi = std::clamp(hi, 0.0, 1.0);
  if (lo > hi) lo = hi;
  return Interval(lo, hi);
}

Interval Interval::scaled_down(double divisor) const {
  return clamped(lo_ / divisor, hi_ / divisor);
}

std::string to_string(const Interval& interval, int precision) {
  return fmt::format("[{:.{}f}, {:.{}f}]", interval.lo(), precision, interval.hi(), precision);
}

double frechet_lower(std::span<const double> ps) {
  if (ps.empty()) throw Error(ErrorCode::EmptySequence, "Frechet lower bound of an empty conjunction");
  double sum = 0.0;
  for (double p : ps) sum += p;
  return std::max(0.0, sum - static_cast<double>(ps.size() - 1));
}

double frechet_upper(std::span<const double> ps) {
  if (ps.empty()) throw Error(ErrorCode::EmptySequence, "Frechet upper bound of an empty conjunction");
  return *std::min_element(ps.begin(), ps.end());
}

Interval intersect(std::span<const Interval> intervals, std::span<const std::string_view> labels) {
  if (intervals.empty()) throw Error(ErrorCode::EmptySequence, "intersection of no intervals");

  std::size_t loWitness = 0;
  std::size_t hiWitness = 0;
  for (std::size_t k = 1; k < intervals.size(); ++k) {
    if (intervals[k].lo() > intervals[loWitness].lo()) loWitness = k;
    if (intervals[k].hi() < intervals[hiWitness].hi()) hiWitness = k;
  }
  const double lo = intervals[loWitness].lo();
  const double hi = intervals[hiWitness].hi();
  if (lo > hi + kIntervalEpsilon) {
    auto name = [&](std::size_t k) {
      return k < labels.size() ? std::string(labels[k]) : fmt::format("#{}", k);
    };
    throw Error(ErrorCode::InfeasibleInterval,
                fmt::format("lower bound {} from {} exceeds upper bound {} from {}", lo, name(loWitness),
                            hi, name(hiWitness)));
  }
  return Interval::clamped(lo, hi);
}

}  // namespace pcb
