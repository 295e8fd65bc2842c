#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pose_ik/geometry.hpp"

namespace pose_ik {

/// Serial chain stored as joint positions. joints[0] is the base.
struct KinematicChain {
  std::string name;
  Vec3 base = Vec3::Zero();
  std::vector<Vec3> joints;
  std::vector<double> link_lengths;

  std::size_t joint_count() const { return joints.size(); }
  std::size_t link_count() const { return link_lengths.size(); }
};

/// Robot joints that play shoulder, elbow and wrist. 1-based, strictly increasing.
struct ConstrainedJoints {
  int shoulder = 1;
  int elbow = 2;
  int wrist = 3;
  friend bool operator==(const ConstrainedJoints&, const ConstrainedJoints&) = default;
};

/// Axis flips, uniform scale and offset taking capture coordinates to robot coordinates.
struct WorkspaceTransform {
  std::array<int, 3> axis_signs{1, 1, 1};
  Vec3 offset = Vec3::Zero();
  double scale = 1.0;

  Vec3 apply(const Vec3& p) const;
  /// Applies only the axis flips and scale (for directions).
  Vec3 apply_linear(const Vec3& d) const;
  void validate() const;
};

struct RobotDefinition {
  std::string name;
  Vec3 base = Vec3::Zero();
  std::vector<double> link_lengths;
  ConstrainedJoints constrained;
  /// Rest pose link directions; empty means every link along +z.
  std::vector<Vec3> rest_directions;
  WorkspaceTransform transform;

  std::size_t joint_count() const { return link_lengths.size() + 1; }
  /// Throws ConfigError on any broken invariant.
  void validate() const;
};

/// Places joints[i+1] = joints[i] + link_lengths[i] * directions[i] from the base.
KinematicChain assemble(const RobotDefinition& def, const std::vector<Vec3>& directions);
KinematicChain assemble(const Vec3& base, const std::vector<double>& link_lengths,
                        const std::vector<Vec3>& directions, std::string name = {});

/// Rest configuration of a robot (rest_directions, or all links along +z).
KinematicChain rest_chain(const RobotDefinition& def);

/// Unit link directions of an assembled chain.
std::vector<Vec3> link_directions(const KinematicChain& chain);

const Vec3& end_effector(const KinematicChain& chain);
double max_reach(const KinematicChain& chain);
double max_reach(const RobotDefinition& def);

/// Largest | |joints[i+1]-joints[i]| - link_lengths[i] | over the chain.
double max_link_length_error(const KinematicChain& chain);
bool is_assembled(const KinematicChain& chain, double tol = 1e-6);

}  // namespace pose_ik
