#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pose_ik/chain.hpp"
#include "pose_ik/geometry.hpp"

namespace pose_ik {

enum class TaskLabel { IncisionStraight, IncisionCurve, Assembly1, Assembly2, Assembly3, Other };
enum class Arm { Left, Right };

std::string_view to_string(TaskLabel task);
std::string_view to_string(Arm arm);
TaskLabel parse_task_label(std::string_view s);
Arm parse_arm(std::string_view s);

struct SkeletonFrame {
  double t = 0.0;
  Vec3 shoulder = Vec3::Zero();
  Vec3 elbow = Vec3::Zero();
  Vec3 wrist = Vec3::Zero();
};

struct SkeletonTrajectory {
  std::vector<SkeletonFrame> frames;
  TaskLabel task = TaskLabel::Other;
  Arm arm = Arm::Right;
  std::string units = "cm";

  /// Non-empty, finite, strictly increasing timestamps.
  void validate() const;
};

/**
 * JSON Lines trajectory. An optional first line {"task": ..., "units": ...}
 * is followed by one frame per line:
 * {"t": 0.033, "arm": "right", "shoulder": [x,y,z], "elbow": [...], "wrist": [...]}
 */
SkeletonTrajectory load_trajectory(const std::filesystem::path& path);
SkeletonTrajectory parse_trajectory(std::istream& in, const std::string& source = "<stream>");
void save_trajectory(const SkeletonTrajectory& traj, const std::filesystem::path& path);
void write_trajectory(const SkeletonTrajectory& traj, std::ostream& out);

inline constexpr double kDefaultSmoothing = 0.3;

/// s_0 = x_0, s_t = alpha * x_t + (1 - alpha) * s_{t-1}, per joint and coordinate.
SkeletonTrajectory exponential_smooth(const SkeletonTrajectory& traj, double alpha = kDefaultSmoothing);

SkeletonTrajectory to_robot_frame(const SkeletonTrajectory& traj, const WorkspaceTransform& tf);

/// Human upper-arm and forearm lengths of synthetic demonstrations.
inline constexpr double kSynthUpperArm = 30.0;
inline constexpr double kSynthForearm = 28.0;

/**
 * Seeded synthetic right-arm demonstration in a depth-camera frame (y up,
 * the demonstrator faces -z, units cm). Incision tasks sweep the wrist over
 * an upright pad along a line or an arc; assembly tasks carry the wrist from a pick
 * pose to one of three alignment planes and align within it.
 */
SkeletonTrajectory synth_demo(TaskLabel kind, int n_frames, std::uint64_t seed);

/// Fixed shoulder position used by every synthetic demonstration.
Vec3 synth_shoulder();

}  // namespace pose_ik
