#pragma once
/**
 * @file io.hpp
 * @brief JSON config parsing and JSON/CSV exports of the computed objects.
 *
 * Exports are deterministic: objects are written with sorted keys and
 * round-trip double formatting, and nothing time-dependent is embedded.
 */

#include <cstdint>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "rotset/flow_sim.hpp"
#include "rotset/rotation_set.hpp"
#include "rotset/square_rotation.hpp"
#include "rotset/tracking.hpp"

namespace rotset {

using Json = nlohmann::json;

std::string_view library_version();

/// Accepts {"geometry": "torus"|"square", "dim", "radius", "center": [x, y]}.
/// Missing keys keep the defaults (torus, m = 2, r = 0.2, center 0).
BilliardConfig config_from_json(const Json& j);
BilliardConfig load_config(const std::string& path);
Json to_json(const BilliardConfig& cfg);

struct RunManifest {
  std::string command;
  Json parameters = Json::object();
  std::uint64_t seed = 0;
  BilliardConfig config;
};
Json to_json(const RunManifest& m);

Json to_json(const Vec& v);
Json to_json(const LatticeIndex& k);
Vec vec_from_json(const Json& j);
LatticeIndex index_from_json(const Json& j);

Json to_json(const TorusGraph& g);
Json to_json(const SquareGraph& g);
Json to_json(const AdmissibleType& t);
Json to_json(const PeriodicOrbit& o);
Json to_json(const ConstrainedPath& p);
Json to_json(const AnalyticBounds& b);
Json to_json(const OuterBound& b);
Json to_json(const RotationSetEstimate& e);
Json to_json(const SquareInterval& s);
Json to_json(const TrackingRun& t);
Json trajectory_summary(const TrajectoryRecord& rec);

/// Writes `time,x,y,...,k0,k1,...,kind` rows, one per recorded event.
void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec);

/// Stable text form of a double (shortest round-trip representation).
std::string format_double(double x);

}  // namespace rotset
