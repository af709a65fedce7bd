#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "scenefind/context.hpp"
#include "scenefind/dataset.hpp"
#include "scenefind/error.hpp"
#include "scenefind/metric.hpp"
#include "scenefind/response.hpp"
#include "scenefind/result_io.hpp"
#include "scenefind/search.hpp"
#include "scenefind/synthetic.hpp"

namespace py = pybind11;
using namespace scenefind;

namespace {

/// Owns the recordings so repeated searches do not copy them across the boundary.
struct Dataset {
  std::vector<Recording> recordings;
};

LaneOverrides overrides_from(const std::optional<std::filesystem::path>& path) {
  return path ? LaneOverrides::load(*path) : LaneOverrides{};
}

}  // namespace

PYBIND11_MODULE(_scenefind, m) {
  m.doc() = "Hausdorff-distance traffic scene search over highD-format recordings";

  static py::exception<Error> error(m, "ScenefindError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::handle(error.ptr())(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::enum_<DrivingDirection>(m, "DrivingDirection")
      .value("Upper", DrivingDirection::Upper)
      .value("Lower", DrivingDirection::Lower);
  py::enum_<VehicleClass>(m, "VehicleClass").value("Car", VehicleClass::Car).value("Truck", VehicleClass::Truck);
  py::enum_<RelativeLane>(m, "RelativeLane")
      .value("Left", RelativeLane::Left)
      .value("Center", RelativeLane::Center)
      .value("Right", RelativeLane::Right)
      .value("Merging", RelativeLane::Merging);
  py::enum_<TacticalLabel>(m, "TacticalLabel")
      .value("LaneKeep", TacticalLabel::LaneKeep)
      .value("LaneChangeLeft", TacticalLabel::LaneChangeLeft)
      .value("LaneChangeRight", TacticalLabel::LaneChangeRight)
      .value("Truncated", TacticalLabel::Truncated);

  py::class_<SceneKey>(m, "SceneKey")
      .def(py::init([](int recording, VehicleId ego, FrameIndex frame) { return SceneKey{recording, ego, frame}; }),
           py::arg("recording_id"), py::arg("ego_id"), py::arg("frame"))
      .def_readwrite("recording_id", &SceneKey::recording_id)
      .def_readwrite("ego_id", &SceneKey::ego_id)
      .def_readwrite("frame", &SceneKey::frame)
      .def(py::self == py::self)
      .def("__hash__", [](const SceneKey& k) { return py::hash(py::make_tuple(k.recording_id, k.ego_id, k.frame)); })
      .def("__repr__", [](const SceneKey& k) {
        std::ostringstream s;
        s << "SceneKey(" << k.recording_id << ", " << k.ego_id << ", " << k.frame << ")";
        return s.str();
      });

  py::class_<TrackMeta>(m, "TrackMeta")
      .def_readonly("vehicle_id", &TrackMeta::vehicle_id)
      .def_readonly("initial_frame", &TrackMeta::initial_frame)
      .def_readonly("final_frame", &TrackMeta::final_frame)
      .def_readonly("width", &TrackMeta::width)
      .def_readonly("height", &TrackMeta::height)
      .def_readonly("driving_direction", &TrackMeta::driving_direction)
      .def_readonly("vehicle_class", &TrackMeta::vehicle_class);

  py::class_<Recording>(m, "Recording")
      .def_property_readonly("id", &Recording::id)
      .def_property_readonly("frame_rate", [](const Recording& r) { return r.meta().frame_rate; })
      .def_property_readonly("location_id", [](const Recording& r) { return r.meta().location_id; })
      .def_property_readonly("upper_lane_markings", [](const Recording& r) { return r.meta().upper_lane_markings; })
      .def_property_readonly("lower_lane_markings", [](const Recording& r) { return r.meta().lower_lane_markings; })
      .def_property_readonly("tracks", [](const Recording& r) {
        return std::vector<TrackMeta>(r.tracks().begin(), r.tracks().end());
      })
      .def("track", &Recording::track, py::arg("vehicle_id"), py::return_value_policy::copy)
      .def("vehicles_at", [](const Recording& r, FrameIndex f) {
        const auto ids = r.vehicles_at(f);
        return std::vector<VehicleId>(ids.begin(), ids.end());
      })
      .def("__len__", [](const Recording& r) { return r.states().size(); });

  py::class_<Dataset>(m, "Dataset")
      .def(py::init([](std::vector<Recording> recordings) { return Dataset{std::move(recordings)}; }))
      .def("__len__", [](const Dataset& d) { return d.recordings.size(); })
      .def("__getitem__", [](const Dataset& d, std::size_t i) -> const Recording& {
        if (i >= d.recordings.size()) throw py::index_error();
        return d.recordings[i];
      }, py::return_value_policy::reference_internal);

  py::class_<LaneChangeScript>(m, "LaneChangeScript")
      .def(py::init<>())
      .def_readwrite("start_time", &LaneChangeScript::start_time)
      .def_readwrite("duration", &LaneChangeScript::duration)
      .def_readwrite("direction", &LaneChangeScript::direction);

  py::class_<ScriptedVehicle>(m, "ScriptedVehicle")
      .def(py::init<>())
      .def_readwrite("direction", &ScriptedVehicle::direction)
      .def_readwrite("lane_from_right", &ScriptedVehicle::lane_from_right)
      .def_readwrite("start_frame", &ScriptedVehicle::start_frame)
      .def_readwrite("start_position", &ScriptedVehicle::start_position)
      .def_readwrite("speed", &ScriptedVehicle::speed)
      .def_readwrite("lateral_offset", &ScriptedVehicle::lateral_offset)
      .def_readwrite("length", &ScriptedVehicle::length)
      .def_readwrite("height", &ScriptedVehicle::height)
      .def_readwrite("vehicle_class", &ScriptedVehicle::vehicle_class)
      .def_readwrite("lane_change", &ScriptedVehicle::lane_change);

  py::class_<SynthConfig>(m, "SynthConfig")
      .def(py::init<>())
      .def_readwrite("recording_id", &SynthConfig::recording_id)
      .def_readwrite("location_id", &SynthConfig::location_id)
      .def_readwrite("lanes_per_carriageway", &SynthConfig::lanes_per_carriageway)
      .def_readwrite("vehicles", &SynthConfig::vehicles)
      .def_readwrite("duration", &SynthConfig::duration)
      .def_readwrite("frame_rate", &SynthConfig::frame_rate)
      .def_readwrite("min_speed", &SynthConfig::min_speed)
      .def_readwrite("max_speed", &SynthConfig::max_speed)
      .def_readwrite("lane_change_probability", &SynthConfig::lane_change_probability)
      .def_readwrite("lane_width", &SynthConfig::lane_width)
      .def_readwrite("road_length", &SynthConfig::road_length)
      .def_readwrite("truck_fraction", &SynthConfig::truck_fraction)
      .def_readwrite("scripted", &SynthConfig::scripted);

  py::class_<ContextPoint>(m, "ContextPoint")
      .def_readonly("x", &ContextPoint::x)
      .def_readonly("y", &ContextPoint::y)
      .def_readonly("vx", &ContextPoint::vx)
      .def_readonly("vy", &ContextPoint::vy)
      .def_readonly("y_scaled", &ContextPoint::y_scaled)
      .def_readonly("vy_scaled", &ContextPoint::vy_scaled)
      .def_readonly("source_vehicle_id", &ContextPoint::source_vehicle_id)
      .def_property_readonly("slot", [](const ContextPoint& p) -> std::optional<std::string> {
        if (!p.slot) return std::nullopt;
        return std::string(to_string(*p.slot));
      });

  py::class_<ContextSet>(m, "ContextSet")
      .def_readonly("key", &ContextSet::key)
      .def_readonly("lambda_", &ContextSet::lambda)
      .def_readonly("points", &ContextSet::points)
      .def_readonly("relative_lane", &ContextSet::relative_lane)
      .def("with_lambda", &ContextSet::with_lambda, py::arg("lam"))
      .def("scaled_points", &ContextSet::scaled_points)
      .def("__len__", [](const ContextSet& s) { return s.points.size(); });

  py::class_<SearchStats>(m, "SearchStats")
      .def_readonly("candidates_enumerated", &SearchStats::candidates_enumerated)
      .def_readonly("candidates_after_lane_filter", &SearchStats::candidates_after_lane_filter)
      .def_readonly("empty_contexts_skipped", &SearchStats::empty_contexts_skipped)
      .def_readonly("distances_computed", &SearchStats::distances_computed)
      .def_readonly("distances_pruned", &SearchStats::distances_pruned)
      .def_readonly("wall_time", &SearchStats::wall_time);

  py::class_<SearchEntry>(m, "SearchEntry")
      .def_readonly("key", &SearchEntry::key)
      .def_readonly("distance", &SearchEntry::distance)
      .def_readonly("context", &SearchEntry::context);

  py::class_<SearchResult>(m, "SearchResult")
      .def_readonly("query_context", &SearchResult::query_context)
      .def_readonly("entries", &SearchResult::entries)
      .def_readonly("stats", &SearchResult::stats)
      .def("to_json", [](const SearchResult& r) { return result_to_json(r).dump(2); });

  py::class_<ResponseSample>(m, "ResponseSample")
      .def_readonly("t", &ResponseSample::t)
      .def_readonly("long_pos", &ResponseSample::long_pos)
      .def_readonly("lat_pos", &ResponseSample::lat_pos)
      .def_readonly("speed", &ResponseSample::speed);

  py::class_<ResponseTrajectory>(m, "ResponseTrajectory")
      .def_readonly("key", &ResponseTrajectory::key)
      .def_readonly("samples", &ResponseTrajectory::samples)
      .def_readonly("horizon", &ResponseTrajectory::horizon)
      .def_readonly("lane_width", &ResponseTrajectory::lane_width)
      .def_readonly("label", &ResponseTrajectory::label)
      .def_readonly("maneuver", &ResponseTrajectory::maneuver)
      .def_readonly("crossing_time", &ResponseTrajectory::crossing_time);

  py::class_<BehaviorDistribution>(m, "BehaviorDistribution")
      .def_readonly("t", &BehaviorDistribution::t)
      .def_readonly("evaluation_grid", &BehaviorDistribution::evaluation_grid)
      .def_readonly("density", &BehaviorDistribution::density)
      .def_readonly("bandwidth", &BehaviorDistribution::bandwidth);

  m.attr("DEFAULT_LAMBDA") = kDefaultLambda;
  m.attr("__version__") = kToolVersion;

  m.def("generate_synthetic", &generate_synthetic, py::arg("config"), py::arg("seed"));
  m.def("write_recording", &write_recording, py::arg("recording"), py::arg("data_dir"));
  m.def("load_recording", &load_recording, py::arg("data_dir"), py::arg("recording_id"));
  m.def("load_dataset", [](const std::filesystem::path& dir, unsigned threads) {
    return Dataset{load_dataset(dir, threads)};
  }, py::arg("data_dir"), py::arg("threads") = 0);
  m.def("dataset_digest", &dataset_digest, py::arg("data_dir"));

  m.def("extract_context_set",
        [](const Recording& r, const SceneKey& key, double lambda, bool include_ego,
           const std::optional<std::filesystem::path>& overrides) {
          return extract_context_set(r, key, lambda, include_ego, overrides_from(overrides));
        },
        py::arg("recording"), py::arg("key"), py::arg("lam") = kDefaultLambda, py::arg("include_ego") = false,
        py::arg("lane_overrides") = py::none());
  m.def("relative_lane",
        [](const Recording& r, VehicleId vehicle, FrameIndex frame,
           const std::optional<std::filesystem::path>& overrides) {
          return relative_lane(r, vehicle, frame, overrides_from(overrides));
        },
        py::arg("recording"), py::arg("vehicle_id"), py::arg("frame"), py::arg("lane_overrides") = py::none());

  m.def("hausdorff", py::overload_cast<const ContextSet&, const ContextSet&>(&hausdorff), py::arg("a"),
        py::arg("b"));
  m.def("hausdorff_points",
        [](const std::vector<Point4>& a, const std::vector<Point4>& b) {
          if (a.empty() || b.empty()) throw Error(Errc::EmptySet, "hausdorff of an empty point set");
          return kernel::hausdorff(a, b);
        },
        py::arg("a"), py::arg("b"));

  m.def("search",
        [](const Dataset& d, const SceneKey& example, double lambda, std::size_t top_n, int frame_stride,
           bool include_ego, bool exclude_query_vehicle, unsigned threads, bool prune,
           const std::optional<std::filesystem::path>& overrides) {
          const SearchQuery q{example, lambda, top_n, frame_stride, include_ego, exclude_query_vehicle};
          SearchOptions o;
          o.threads = threads;
          o.prune = prune;
          o.overrides = overrides_from(overrides);
          py::gil_scoped_release release;
          return search(d.recordings, q, o);
        },
        py::arg("dataset"), py::arg("example"), py::arg("lam") = kDefaultLambda, py::arg("top_n") = 250,
        py::arg("frame_stride") = 1, py::arg("include_ego") = false, py::arg("exclude_query_vehicle") = false,
        py::arg("threads") = 0, py::arg("prune") = true, py::arg("lane_overrides") = py::none());

  m.def("extract_responses",
        [](const Dataset& d, const std::vector<SceneKey>& keys, double horizon, double threshold_fraction) {
          return extract_responses(d.recordings, keys, ResponseOptions{horizon, threshold_fraction});
        },
        py::arg("dataset"), py::arg("keys"), py::arg("horizon") = 5.0, py::arg("threshold_fraction") = 0.5);

  m.def("silverman_bandwidth",
        [](const std::vector<double>& values) { return silverman_bandwidth(values); }, py::arg("values"));
  m.def("estimate_density",
        [](const std::vector<double>& values, const std::vector<double>& grid) {
          return estimate_density(values, grid);
        },
        py::arg("values"), py::arg("grid"));
}
