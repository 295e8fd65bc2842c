#pragma once

#include <filesystem>

#include <json.hpp>

#include "pose_ik/chain.hpp"
#include "pose_ik/constraints.hpp"
#include "pose_ik/metrics.hpp"
#include "pose_ik/solver.hpp"

namespace pose_ik {

using Json = nlohmann::ordered_json;

Json to_json(const Vec3& v);
Vec3 vec3_from_json(const Json& j, const std::string& what);

/// {"name", "base", "link_lengths", "constrained_joints": {"shoulder","elbow","wrist"}}
/// plus optional "rest_directions" and "transform": {"axis_signs","offset","scale"}.
Json to_json(const RobotDefinition& def);
RobotDefinition robot_from_json(const Json& j);
RobotDefinition load_robot(const std::filesystem::path& path);

/// {"pairs": [{"out_joint", "out_octant", "in_joint", "in_octant"}, ...]}
Json to_json(const PoseConstraintSet& set);
PoseConstraintSet constraints_from_json(const Json& j);

Json to_json(const ConstraintCheck& c);
Json to_json(const Solution& s);
Json to_json(const ROI& roi);
ROI roi_from_json(const Json& j);

Json to_json(const MetricsReport& r);

/// Reads a whole JSON document, wrapping parse errors as ConfigError.
Json read_json_file(const std::filesystem::path& path);

}  // namespace pose_ik
