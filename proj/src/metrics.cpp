#include "pose_ik/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pose_ik {

double pose_angle(const Vec3& shoulder, const Vec3& elbow, const Vec3& wrist) {
  if ((elbow - shoulder).norm() <= 1e-12 || (wrist - elbow).norm() <= 1e-12 ||
      (wrist - shoulder).norm() <= 1e-12)
    throw Error("degenerate arm: coincident joints");
  return angle_between(elbow - shoulder, wrist - elbow);
}

double pose_accuracy(const std::vector<double>& human, const std::vector<double>& robot, double delta) {
  if (human.empty()) throw Error("pose accuracy of an empty series");
  if (human.size() != robot.size()) throw Error("pose accuracy: series length mismatch");
  if (!(delta > 0.0)) throw Error("pose accuracy: delta must be > 0");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < human.size(); ++i) {
    const double e = human[i] - robot[i];
    if (e * e < delta) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(human.size());
}

std::vector<double> human_angle_series(const SkeletonTrajectory& traj) {
  std::vector<double> out;
  out.reserve(traj.frames.size());
  for (const auto& f : traj.frames) out.push_back(pose_angle(f.shoulder, f.elbow, f.wrist));
  return out;
}

double robot_pose_angle(const ConstrainedJoints& joints, const KinematicChain& chain) {
  const auto& j = chain.joints;
  return pose_angle(j.at(joints.shoulder - 1), j.at(joints.elbow - 1), j.at(joints.wrist - 1));
}

std::vector<double> robot_angle_series(const RobotDefinition& def, const std::vector<Solution>& solutions) {
  std::vector<double> out;
  out.reserve(solutions.size());
  for (const auto& s : solutions) out.push_back(robot_pose_angle(def.constrained, s.chain));
  return out;
}

void ROI::validate() const {
  if (!is_finite(origin) || !is_finite(u) || !is_finite(normal)) throw ConfigError("ROI must be finite");
  if (std::abs(u.norm() - 1.0) > 1e-9 || std::abs(normal.norm() - 1.0) > 1e-9 || std::abs(u.dot(normal)) > 1e-9)
    throw ConfigError("ROI axes must be orthonormal");
  if (!(width > 0.0) || !(height > 0.0)) throw ConfigError("ROI width and height must be positive");
}

Eigen::Vector2d ROI::to_plane(const Vec3& p) const {
  const Vec3 d = p - origin;
  return {d.dot(u), d.dot(v())};
}

ROI ROI::transformed(const WorkspaceTransform& tf) const {
  // Map both in-plane axes so the height axis keeps pointing the same way
  // under reflections, then rebuild the normal from them.
  const Vec3 u2 = tf.apply_linear(u).normalized();
  const Vec3 v2 = tf.apply_linear(v()).normalized();
  ROI out;
  out.origin = tf.apply(origin);
  out.u = u2;
  out.normal = u2.cross(v2);
  out.width = width * tf.scale;
  out.height = height * tf.scale;
  return out;
}

Segment2 project_link(const Vec3& p1, const Vec3& p2, const ROI& roi) {
  return {roi.to_plane(p1), roi.to_plane(p2)};
}

double clamped_line_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double x0, double x1, double height) {
  if (!(x1 > x0) || a.x() == b.x()) return 0.0;
  const double m = (b.y() - a.y()) / (b.x() - a.x());
  const double c = a.y() - m * a.x();
  auto f = [&](double x) { return m * x + c; };

  // Split at the crossings with y = 0 and y = height; the clamped line is
  // linear on every piece.
  std::vector<double> cuts{x0, x1};
  if (m != 0.0) {
    for (double level : {0.0, height}) {
      const double xc = (level - c) / m;
      if (xc > x0 && xc < x1) cuts.push_back(xc);
    }
  }
  std::sort(cuts.begin(), cuts.end());

  double area = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double l = cuts[i], r = cuts[i + 1];
    if (!(r > l)) continue;
    const double mid = f(0.5 * (l + r));
    if (mid <= 0.0) continue;
    if (mid >= height) {
      area += height * (r - l);
    } else {
      const double fl = std::clamp(f(l), 0.0, height), fr = std::clamp(f(r), 0.0, height);
      area += 0.5 * (fl + fr) * (r - l);
    }
  }
  return area;
}

double occlusion_percentage(const std::vector<Segment3>& links, const ROI& roi) {
  double sum = 0.0;
  for (const auto& [p1, p2] : links) {
    const auto [a, b] = project_link(p1, p2, roi);
    const double x0 = std::max(std::min(a.x(), b.x()), 0.0);
    const double x1 = std::min(std::max(a.x(), b.x()), roi.width);
    sum += clamped_line_area(a, b, x0, x1, roi.height);
  }
  return sum / (roi.width * roi.height);
}

std::vector<Segment3> chain_links(const KinematicChain& chain) {
  std::vector<Segment3> out;
  for (std::size_t i = 0; i + 1 < chain.joints.size(); ++i) out.emplace_back(chain.joints[i], chain.joints[i + 1]);
  return out;
}

std::vector<Segment3> arm_links(const SkeletonFrame& frame) {
  return {{frame.shoulder, frame.elbow}, {frame.elbow, frame.wrist}};
}

std::vector<bool> gate_frames(const SkeletonTrajectory& traj, const ROI& roi) {
  std::vector<bool> mask;
  mask.reserve(traj.frames.size());
  for (const auto& f : traj.frames) {
    const auto p = roi.to_plane(f.wrist);
    mask.push_back(p.x() >= 0.0 && p.x() <= roi.width && p.y() >= 0.0 && p.y() <= roi.height);
  }
  return mask;
}

double task_po(const std::vector<Solution>& solutions, const SkeletonTrajectory& traj, const ROI& roi) {
  if (solutions.size() != traj.frames.size()) throw Error("task_po: solutions and frames differ in length");
  const auto mask = gate_frames(traj, roi);
  double sum = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    sum += occlusion_percentage(chain_links(solutions[i].chain), roi);
    ++count;
  }
  if (count == 0) throw Error("no frames over ROI");
  return sum / count;
}

double human_task_po(const SkeletonTrajectory& traj, const ROI& roi) {
  const auto mask = gate_frames(traj, roi);
  double sum = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    sum += occlusion_percentage(arm_links(traj.frames[i]), roi);
    ++count;
  }
  if (count == 0) throw Error("no frames over ROI");
  return sum / count;
}

MetricsReport evaluate(const RobotDefinition& def, const SkeletonTrajectory& traj,
                       const std::vector<Solution>& solutions, double delta, const ROI* roi) {
  if (solutions.size() != traj.frames.size()) throw Error("metrics: solutions and frames differ in length");
  MetricsReport rep;
  const auto human = human_angle_series(traj);
  const auto robot = robot_angle_series(def, solutions);
  rep.pacc = pose_accuracy(human, robot, delta);
  rep.frames_evaluated = static_cast<int>(human.size());
  std::vector<bool> mask(traj.frames.size(), false);
  if (roi) mask = gate_frames(traj, *roi);
  rep.frames.resize(human.size());
  double po_sum = 0.0;
  for (std::size_t i = 0; i < human.size(); ++i) {
    auto& fm = rep.frames[i];
    fm.human_angle = human[i];
    fm.robot_angle = robot[i];
    const double e = human[i] - robot[i];
    fm.accurate = e * e < delta;
    fm.gated = mask[i];
    if (fm.gated) {
      fm.po = occlusion_percentage(chain_links(solutions[i].chain), *roi);
      po_sum += fm.po;
      ++rep.frames_gated;
    }
  }
  if (roi) {
    if (rep.frames_gated == 0) throw Error("no frames over ROI");
    rep.po = po_sum / rep.frames_gated;
  }
  return rep;
}

}  // namespace pose_ik
