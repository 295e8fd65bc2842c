#pragma once

#include <array>

#include "pose_ik/chain.hpp"
#include "pose_ik/geometry.hpp"

namespace pose_ik {

/**
 * An (OUT, IN) octant pair on consecutive constrained joints.
 *
 * OUT restricts the direction joints[out_joint] -> joints[out_joint + 1];
 * IN restricts joints[in_joint] -> joints[in_joint - 1]. Both directions are
 * expressed in world-aligned frames centered on the joint. Joint indices are
 * 1-based.
 */
struct ConstraintPair {
  int out_joint = 1;
  OctantId out_octant = OctantId::from_index(1);
  int in_joint = 2;
  OctantId in_octant = OctantId::from_index(1);
  friend bool operator==(const ConstraintPair&, const ConstraintPair&) = default;
};

/// Two pairs sharing the elbow: [(shoulder OUT, elbow IN), (elbow OUT, wrist IN)].
struct PoseConstraintSet {
  std::array<ConstraintPair, 2> pairs;

  void validate() const;
  friend bool operator==(const PoseConstraintSet&, const PoseConstraintSet&) = default;
};

/// Softening factor: maximum Hamming distance admitted around a constraint octant.
class Softening {
 public:
  constexpr Softening() = default;
  explicit Softening(int eta);
  int eta() const { return eta_; }
  friend bool operator==(Softening, Softening) = default;

 private:
  int eta_ = 0;
};

/// Octant constraints of a human arm frame (joints 1, 2, 3).
PoseConstraintSet extract_human_pose(const Vec3& shoulder, const Vec3& elbow, const Vec3& wrist);

/// Re-addresses human constraints onto the robot's shoulder/elbow/wrist joints.
PoseConstraintSet map_to_robot(const PoseConstraintSet& human, const RobotDefinition& def);
/// Inverse of map_to_robot: restores human addressing (1, 2, 3).
PoseConstraintSet unmap_from_robot(const PoseConstraintSet& robot, const RobotDefinition& def);

OctantSet neighbor_octants(OctantId o, Softening eta);
/// Region a constrained link may occupy under softening eta.
OctantSet admissible_set(OctantId o, Softening eta);

bool in_set_closure(const OctantSet& s, const Vec3& v, double tol = 0.0);

/// Closest unit direction to v inside the union of the octants in s.
Vec3 project_into_set(const Vec3& v, const OctantSet& s);

}  // namespace pose_ik
