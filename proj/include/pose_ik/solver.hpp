#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "pose_ik/chain.hpp"
#include "pose_ik/constraints.hpp"
#include "pose_ik/trajectory.hpp"

namespace pose_ik {

enum class Method { Fabrik, Pic, Pics };

std::string_view to_string(Method m);
Method parse_method(std::string_view s);

struct SolverConfig {
  int max_iterations = 20;
  double position_tolerance = 1e-3;
  Softening eta;
  Method method = Method::Pic;

  void validate() const;
  /// Softening actually used: 0 for PIC, eta for PICs, none for FABRIK.
  std::optional<Softening> effective_softening() const;
};

enum class ConstraintKind { Out, In };
enum class ConstraintStatus {
  Satisfied,          // inside the original octant
  SoftenedSatisfied,  // outside the octant but inside its softened neighborhood
  Violated,           // outside the admissible region; see deviation
};

std::string_view to_string(ConstraintKind k);
std::string_view to_string(ConstraintStatus s);

struct ConstraintCheck {
  ConstraintKind kind = ConstraintKind::Out;
  int joint = 1;
  OctantId octant = OctantId::from_index(1);
  OctantSet admissible;
  ConstraintStatus status = ConstraintStatus::Satisfied;
  /// Angle (radians) between the link direction and its admissible region.
  double deviation = 0.0;

  bool satisfied() const { return status != ConstraintStatus::Violated; }
};

struct Solution {
  KinematicChain chain;
  int iterations_used = 0;
  double residual = 0.0;
  bool converged = false;
  std::vector<ConstraintCheck> constraint_report;
};

enum class PassKind { Backward, Forward, Stretch };
/// Called after every pass with the 1-based iteration number.
using PassObserver = std::function<void(PassKind, int iteration, const KinematicChain&)>;

/// Boundary tolerance used when classifying a link as inside its admissible region.
inline constexpr double kConstraintTolerance = 1e-9;

/// End effector to target, then walks toward the base enforcing IN constraints.
KinematicChain backward_pass(const KinematicChain& chain, const Vec3& target,
                             const PoseConstraintSet* constraints, std::optional<Softening> eta);

/// Base to its fixed position, then walks outward enforcing OUT constraints.
KinematicChain forward_pass(const KinematicChain& chain, const Vec3& base,
                            const PoseConstraintSet* constraints, std::optional<Softening> eta);

/// Report of each constrained link against its admissible region.
std::vector<ConstraintCheck> check_constraints(const KinematicChain& chain, const PoseConstraintSet& constraints,
                                               Softening eta, double tol = kConstraintTolerance);

/**
 * FABRIK / PIC / PICs iteration. FABRIK ignores the constraints; PIC uses
 * the exact octants; PICs softens every octant to its Hamming neighborhood.
 */
Solution solve(const KinematicChain& chain, const Vec3& target, const PoseConstraintSet* constraints,
               const SolverConfig& cfg, const PassObserver& observer = {});

/**
 * Solves every frame with the retargeted wrist as target, warm-starting from
 * the previous frame's chain. The first frame starts at the rest pose.
 * constraints must be empty (FABRIK) or hold one robot-addressed set per frame.
 */
std::vector<Solution> solve_trajectory(const RobotDefinition& def, const SkeletonTrajectory& traj,
                                       const std::vector<PoseConstraintSet>& constraints,
                                       const SolverConfig& cfg);

}  // namespace pose_ik
