#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "scenefind/context.hpp"

namespace scenefind {

enum class TacticalLabel { LaneKeep, LaneChangeLeft, LaneChangeRight, Truncated };
std::string_view to_string(TacticalLabel label);

struct ResponseSample {
  double t = 0.0;         // s since the scene frame
  double long_pos = 0.0;  // m, forward from the ego position at the scene frame
  double lat_pos = 0.0;   // m, leftward from the origin lane center
  double speed = 0.0;     // m/s
};

struct ResponseTrajectory {
  SceneKey key;
  std::vector<ResponseSample> samples;
  double horizon = 0.0;
  double lane_width = 0.0;  // origin lane, from the lane markings
  /// Truncated iff the track ends before the horizon; otherwise equals `maneuver`.
  TacticalLabel label = TacticalLabel::LaneKeep;
  /// Classification on the available samples (never Truncated).
  TacticalLabel maneuver = TacticalLabel::LaneKeep;
  /// First sample time beyond the lane-change threshold.
  std::optional<double> crossing_time;

  bool truncated() const { return label == TacticalLabel::Truncated; }
};

struct ResponseOptions {
  double horizon = 5.0;
  /// Lane change when |lat_pos| exceeds this fraction of the origin lane width.
  double threshold_fraction = 0.5;
};

/// Throws Errc::UnknownScene, Errc::InvalidArgument (horizon <= 0).
std::vector<ResponseTrajectory> extract_responses(std::span<const Recording> dataset,
                                                  std::span<const SceneKey> keys,
                                                  const ResponseOptions& options = {});

/// LaneChangeLeft once lat_pos > threshold_fraction * lane_width, LaneChangeRight once
/// below the negative threshold (whichever happens first), LaneKeep otherwise.
TacticalLabel classify_tactical(const ResponseTrajectory& trajectory, double lane_width,
                                double threshold_fraction = 0.5);

enum class Axis { Longitudinal, Lateral };
std::string_view to_string(Axis axis);

struct BehaviorDistribution {
  double t = 0.0;
  Axis axis = Axis::Longitudinal;
  std::vector<double> evaluation_grid;
  std::vector<double> density;
  double bandwidth = 0.0;
};

/// 0.9 * min(sd, IQR/1.34) * n^(-1/5); falls back to sd when the IQR is zero.
/// Throws Errc::DegenerateSample when all values coincide.
double silverman_bandwidth(std::span<const double> values);

/// Gaussian KDE renormalized so the trapezoidal integral over `grid` is 1.
BehaviorDistribution estimate_density(std::span<const double> values, std::span<const double> grid);

/// Uniform grid spanning the sample padded by `pad_bandwidths` bandwidths.
std::vector<double> make_grid(std::span<const double> values, std::size_t points,
                              double pad_bandwidths = 3.0);

double trapezoid(std::span<const double> grid, std::span<const double> density);

/// Densities of long_pos and lat_pos at each snapshot time over all trajectories that
/// reach it. Snapshots with fewer than two values or a degenerate sample are skipped.
std::vector<BehaviorDistribution> snapshot_densities(std::span<const ResponseTrajectory> trajectories,
                                                     std::span<const double> times,
                                                     std::size_t grid_points = 256);

void write_responses_csv(std::ostream& out, std::span<const ResponseTrajectory> trajectories);

}  // namespace scenefind
