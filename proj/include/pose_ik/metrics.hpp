#pragma once

#include <utility>
#include <vector>

#include "pose_ik/chain.hpp"
#include "pose_ik/geometry.hpp"
#include "pose_ik/solver.hpp"
#include "pose_ik/trajectory.hpp"

namespace pose_ik {

/// (10 degrees)^2 in radians^2.
inline constexpr double kDefaultPoseDelta = 0.030461741978670857;

/// Angle between the upper-arm link and the forearm link.
double pose_angle(const Vec3& shoulder, const Vec3& elbow, const Vec3& wrist);

/// Fraction of frames whose squared angle difference is below delta.
double pose_accuracy(const std::vector<double>& human, const std::vector<double>& robot, double delta);

std::vector<double> human_angle_series(const SkeletonTrajectory& traj);
/// Robot pose angles measured at the definition's shoulder/elbow/wrist joints.
std::vector<double> robot_angle_series(const RobotDefinition& def, const std::vector<Solution>& solutions);
double robot_pose_angle(const ConstrainedJoints& joints, const KinematicChain& chain);

/**
 * Rectangle on a plane. x runs along `u`, the height coordinate y along
 * v = normal x u; the rectangle spans [0, width] x [0, height] from `origin`.
 */
struct ROI {
  Vec3 origin = Vec3::Zero();
  Vec3 u = Vec3::UnitX();
  Vec3 normal = Vec3::UnitZ();
  double width = 1.0;
  double height = 1.0;

  Vec3 v() const { return normal.cross(u); }
  void validate() const;
  /// Plane coordinates (x, y) of a 3D point (orthographic along the normal).
  Eigen::Vector2d to_plane(const Vec3& p) const;
  /// Same rectangle after a capture-to-robot workspace transform.
  ROI transformed(const WorkspaceTransform& tf) const;
};

using Segment2 = std::pair<Eigen::Vector2d, Eigen::Vector2d>;
using Segment3 = std::pair<Vec3, Vec3>;

Segment2 project_link(const Vec3& p1, const Vec3& p2, const ROI& roi);

/// Integral over [x0, x1] of the line through (a, b) clamped to [0, height].
double clamped_line_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double x0, double x1, double height);

/// Sum of clamped areas under every projected link, divided by the ROI area.
double occlusion_percentage(const std::vector<Segment3>& links, const ROI& roi);

std::vector<Segment3> chain_links(const KinematicChain& chain);
std::vector<Segment3> arm_links(const SkeletonFrame& frame);

/// Frames whose wrist projects inside the closed ROI rectangle.
std::vector<bool> gate_frames(const SkeletonTrajectory& traj, const ROI& roi);

/// Mean robot PO over gated frames. Throws "no frames over ROI" when none are gated.
double task_po(const std::vector<Solution>& solutions, const SkeletonTrajectory& traj, const ROI& roi);
/// Mean PO of the human arm (two links) over gated frames.
double human_task_po(const SkeletonTrajectory& traj, const ROI& roi);

struct FrameMetrics {
  double human_angle = 0.0;
  double robot_angle = 0.0;
  bool accurate = false;
  bool gated = false;
  double po = 0.0;
};

struct MetricsReport {
  double pacc = 0.0;
  double po = 0.0;
  int frames_evaluated = 0;
  int frames_gated = 0;
  std::vector<FrameMetrics> frames;
};

/// Pacc over all frames and, when an ROI is given, PO over gated frames.
MetricsReport evaluate(const RobotDefinition& def, const SkeletonTrajectory& traj,
                       const std::vector<Solution>& solutions, double delta, const ROI* roi);

}  // namespace pose_ik
