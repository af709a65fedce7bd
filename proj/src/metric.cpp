#include "scenefind/metric.hpp"

#include <cmath>
#include <limits>

#include "scenefind/error.hpp"

namespace scenefind {

namespace kernel {

namespace {

inline double squared_distance(const Point4& p, const Point4& q) {
  const double dx = p[0] - q[0];
  const double dy = p[1] - q[1];
  const double dvx = p[2] - q[2];
  const double dvy = p[3] - q[3];
  double s = dx * dx;
  s += dy * dy;
  s += dvx * dvx;
  s += dvy * dvy;
  return s;
}

// One directed pass in the squared domain. `running_max` carries over between the
// two directions of the symmetric distance.
inline void directed_pass(std::span<const Point4> a, std::span<const Point4> b, double& running_max) {
  for (const Point4& p : a) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const Point4& q : b) {
      const double d = squared_distance(p, q);
      if (d < nearest) {
        nearest = d;
        if (nearest <= running_max) break;  // p cannot raise the maximum
      }
    }
    if (nearest > running_max) running_max = nearest;
  }
}

}  // namespace

double point_distance(const Point4& p, const Point4& q) { return std::sqrt(squared_distance(p, q)); }

double directed_reference(std::span<const Point4> a, std::span<const Point4> b) {
  double worst = 0.0;
  for (const Point4& p : a) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const Point4& q : b) nearest = std::min(nearest, point_distance(p, q));
    worst = std::max(worst, nearest);
  }
  return worst;
}

double hausdorff_reference(std::span<const Point4> a, std::span<const Point4> b) {
  return std::max(directed_reference(a, b), directed_reference(b, a));
}

double directed(std::span<const Point4> a, std::span<const Point4> b) {
  double running_max = 0.0;
  directed_pass(a, b, running_max);
  return std::sqrt(running_max);
}

double hausdorff(std::span<const Point4> a, std::span<const Point4> b) {
  double running_max = 0.0;
  directed_pass(a, b, running_max);
  directed_pass(b, a, running_max);
  return std::sqrt(running_max);
}

std::optional<double> hausdorff_bounded(std::span<const Point4> a, std::span<const Point4> b, double cutoff) {
  double running_max = 0.0;
  // sqrt is monotone and correctly rounded, so testing sqrt(running_max) > cutoff
  // each time the maximum grows decides the <= cutoff predicate exactly.
  auto pass = [&](std::span<const Point4> from, std::span<const Point4> to) {
    for (const Point4& p : from) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const Point4& q : to) {
        const double d = squared_distance(p, q);
        if (d < nearest) {
          nearest = d;
          if (nearest <= running_max) break;
        }
      }
      if (nearest > running_max) {
        running_max = nearest;
        if (std::sqrt(running_max) > cutoff) return false;
      }
    }
    return true;
  };
  if (!pass(a, b) || !pass(b, a)) return std::nullopt;
  return std::sqrt(running_max);
}

}  // namespace kernel

namespace {

void check_pair(const ContextSet& a, const ContextSet& b) {
  if (a.points.empty() || b.points.empty()) throw Error(Errc::EmptySet, "Hausdorff distance needs non-empty sets");
  if (a.lambda != b.lambda) {
    throw Error(Errc::LambdaMismatch, "context sets were built with different lambda values");
  }
}

}  // namespace

double directed_hausdorff(const ContextSet& a, const ContextSet& b) {
  check_pair(a, b);
  return kernel::directed(a.scaled_points(), b.scaled_points());
}

double hausdorff(const ContextSet& a, const ContextSet& b) {
  check_pair(a, b);
  return kernel::hausdorff(a.scaled_points(), b.scaled_points());
}

std::optional<double> hausdorff_bounded(const ContextSet& a, const ContextSet& b, double cutoff) {
  check_pair(a, b);
  if (!(cutoff >= 0.0)) throw Error(Errc::InvalidArgument, "cutoff must be non-negative");
  return kernel::hausdorff_bounded(a.scaled_points(), b.scaled_points(), cutoff);
}

}  // namespace scenefind
