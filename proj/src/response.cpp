#include "scenefind/response.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>

#include "csv.hpp"
#include "scenefind/error.hpp"
#include "scenefind/search.hpp"

namespace scenefind {

std::string_view to_string(TacticalLabel label) {
  switch (label) {
    case TacticalLabel::LaneKeep: return "LaneKeep";
    case TacticalLabel::LaneChangeLeft: return "LaneChangeLeft";
    case TacticalLabel::LaneChangeRight: return "LaneChangeRight";
    case TacticalLabel::Truncated: return "Truncated";
  }
  return "?";
}

std::string_view to_string(Axis axis) { return axis == Axis::Longitudinal ? "longitudinal" : "lateral"; }

namespace {

struct Classification {
  TacticalLabel label = TacticalLabel::LaneKeep;
  std::optional<double> crossing_time;
};

Classification classify(std::span<const ResponseSample> samples, double lane_width, double fraction) {
  const double threshold = fraction * lane_width;
  for (const ResponseSample& s : samples) {
    if (s.lat_pos > threshold) return {TacticalLabel::LaneChangeLeft, s.t};
    if (s.lat_pos < -threshold) return {TacticalLabel::LaneChangeRight, s.t};
  }
  return {};
}

}  // namespace

TacticalLabel classify_tactical(const ResponseTrajectory& trajectory, double lane_width, double threshold_fraction) {
  return classify(trajectory.samples, lane_width, threshold_fraction).label;
}

std::vector<ResponseTrajectory> extract_responses(std::span<const Recording> dataset, std::span<const SceneKey> keys,
                                                  const ResponseOptions& options) {
  if (!(options.horizon > 0.0)) throw Error(Errc::InvalidArgument, "horizon must be positive");
  if (!(options.threshold_fraction > 0.0)) throw Error(Errc::InvalidArgument, "threshold fraction must be positive");

  std::vector<ResponseTrajectory> out;
  out.reserve(keys.size());
  for (const SceneKey& key : keys) {
    const Recording& rec = find_recording(dataset, key.recording_id);
    const VehicleState& origin = rec.at(key.ego_id, key.frame);
    const TrackMeta& track = rec.track(key.ego_id);
    const LaneGeometry lane = lane_geometry(rec.meta(), origin.lane_id);
    const double sign = travel_sign(track.driving_direction);
    const double fps = rec.meta().frame_rate;
    const auto horizon_frames = static_cast<FrameIndex>(std::llround(options.horizon * fps));

    ResponseTrajectory traj;
    traj.key = key;
    traj.horizon = options.horizon;
    traj.lane_width = lane.width();
    const FrameIndex last = std::min(track.final_frame, key.frame + horizon_frames);
    for (FrameIndex f = key.frame; f <= last; ++f) {
      const VehicleState& s = rec.at(key.ego_id, f);
      traj.samples.push_back({static_cast<double>(f - key.frame) / fps, sign * (s.center_x - origin.center_x),
                              -sign * (s.center_y - lane.center()), std::hypot(s.x_velocity, s.y_velocity)});
    }
    const Classification c = classify(traj.samples, traj.lane_width, options.threshold_fraction);
    traj.maneuver = c.label;
    traj.crossing_time = c.crossing_time;
    traj.label = key.frame + horizon_frames > track.final_frame ? TacticalLabel::Truncated : c.label;
    out.push_back(std::move(traj));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

void check_sample(std::span<const double> values) {
  if (values.size() < 2) throw Error(Errc::InvalidArgument, "density estimation needs at least two values");
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(Errc::InvalidArgument, "density estimation needs finite values");
  }
}

}  // namespace

double silverman_bandwidth(std::span<const double> values) {
  check_sample(values);
  const auto n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  if (!(sd > 0.0)) throw Error(Errc::DegenerateSample, "all values are identical; bandwidth would be zero");

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  return 0.9 * spread * std::pow(n, -0.2);
}

double trapezoid(std::span<const double> grid, std::span<const double> density) {
  double total = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) total += 0.5 * (density[i] + density[i - 1]) * (grid[i] - grid[i - 1]);
  return total;
}

BehaviorDistribution estimate_density(std::span<const double> values, std::span<const double> grid) {
  const double h = silverman_bandwidth(values);
  if (grid.size() < 2) throw Error(Errc::InvalidArgument, "evaluation grid needs at least two points");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw Error(Errc::InvalidArgument, "evaluation grid must be strictly increasing");
  }

  BehaviorDistribution out;
  out.bandwidth = h;
  out.evaluation_grid.assign(grid.begin(), grid.end());
  out.density.resize(grid.size());
  const double norm = 1.0 / (static_cast<double>(values.size()) * h * std::sqrt(2.0 * std::numbers::pi));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double sum = 0.0;
    for (double v : values) {
      const double u = (grid[i] - v) / h;
      sum += std::exp(-0.5 * u * u);
    }
    out.density[i] = norm * sum;
  }
  const double area = trapezoid(out.evaluation_grid, out.density);
  if (!(area > 0.0)) throw Error(Errc::InvalidArgument, "evaluation grid does not cover the sample");
  for (double& d : out.density) d /= area;
  return out;
}

std::vector<double> make_grid(std::span<const double> values, std::size_t points, double pad_bandwidths) {
  if (points < 2) throw Error(Errc::InvalidArgument, "grid needs at least two points");
  const double h = silverman_bandwidth(values);
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it - pad_bandwidths * h;
  const double hi = *hi_it + pad_bandwidths * h;
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return grid;
}

std::vector<BehaviorDistribution> snapshot_densities(std::span<const ResponseTrajectory> trajectories,
                                                     std::span<const double> times, std::size_t grid_points) {
  std::vector<BehaviorDistribution> out;
  for (double t : times) {
    std::vector<double> longitudinal, lateral;
    for (const ResponseTrajectory& traj : trajectories) {
      // samples sit on the native frame grid; take the first at or after t
      auto it = std::find_if(traj.samples.begin(), traj.samples.end(),
                             [t](const ResponseSample& s) { return s.t >= t - 1e-9; });
      if (it == traj.samples.end()) continue;
      longitudinal.push_back(it->long_pos);
      lateral.push_back(it->lat_pos);
    }
    for (auto [axis, values] : {std::pair{Axis::Longitudinal, &longitudinal}, std::pair{Axis::Lateral, &lateral}}) {
      if (values->size() < 2) continue;
      try {
        BehaviorDistribution d = estimate_density(*values, make_grid(*values, grid_points));
        d.t = t;
        d.axis = axis;
        out.push_back(std::move(d));
      } catch (const Error& e) {
        if (e.code() != Errc::DegenerateSample) throw;
      }
    }
  }
  return out;
}

void write_responses_csv(std::ostream& out, std::span<const ResponseTrajectory> trajectories) {
  const auto fmt = csv::format_double;
  out << "recording,ego,frame0,t,long_pos,lat_pos,speed,label\n";
  for (const ResponseTrajectory& traj : trajectories) {
    for (const ResponseSample& s : traj.samples) {
      out << traj.key.recording_id << ',' << traj.key.ego_id << ',' << traj.key.frame << ',' << fmt(s.t) << ','
          << fmt(s.long_pos) << ',' << fmt(s.lat_pos) << ',' << fmt(s.speed) << ',' << to_string(traj.label) << '\n';
    }
  }
}

}  // namespace scenefind
