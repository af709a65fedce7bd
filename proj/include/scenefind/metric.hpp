#pragma once

#include <optional>
#include <span>

#include "scenefind/context.hpp"

namespace scenefind {

// Hausdorff distance between context sets. Point-pair distances are Euclidean over
// the scaled 4-vectors with squared terms accumulated in field order (x, y, vx, vy)
// before the square root. Every kernel below follows that order, so the reference
// and optimized kernels agree bitwise.

namespace kernel {

double point_distance(const Point4& p, const Point4& q);

/// Brute force: every pair distance is formed and reduced.
double directed_reference(std::span<const Point4> a, std::span<const Point4> b);
double hausdorff_reference(std::span<const Point4> a, std::span<const Point4> b);

/// Works on squared distances, breaks out of the inner scan once a point cannot
/// raise the running maximum, and takes one square root at the end.
double directed(std::span<const Point4> a, std::span<const Point4> b);
double hausdorff(std::span<const Point4> a, std::span<const Point4> b);

/// Exact value when it is <= cutoff, nullopt otherwise. Stops as soon as the running
/// maximum exceeds cutoff.
std::optional<double> hausdorff_bounded(std::span<const Point4> a, std::span<const Point4> b,
                                        double cutoff);

}  // namespace kernel

/// Throws Errc::EmptySet or Errc::LambdaMismatch.
double directed_hausdorff(const ContextSet& a, const ContextSet& b);
double hausdorff(const ContextSet& a, const ContextSet& b);
std::optional<double> hausdorff_bounded(const ContextSet& a, const ContextSet& b, double cutoff);

}  // namespace scenefind
