#include "pose_ik/constraints.hpp"

#include <string>

namespace pose_ik {

Softening::Softening(int eta) : eta_(eta) {
  if (eta < 0 || eta > 3) throw ConfigError("softening factor must be in [0, 3], got " + std::to_string(eta));
}

void PoseConstraintSet::validate() const {
  for (const auto& p : pairs)
    if (p.in_joint <= p.out_joint) throw Error("constraint pair needs in_joint > out_joint");
  if (pairs[0].in_joint != pairs[1].out_joint)
    throw Error("constraint pairs must share the elbow joint");
}

PoseConstraintSet extract_human_pose(const Vec3& shoulder, const Vec3& elbow, const Vec3& wrist) {
  for (const Vec3* p : {&shoulder, &elbow, &wrist})
    if (!is_finite(*p)) throw Error("degenerate skeleton frame: non-finite joint");
  if ((elbow - shoulder).norm() <= 1e-6 || (wrist - elbow).norm() <= 1e-6 ||
      (wrist - shoulder).norm() <= 1e-6)
    throw Error("degenerate skeleton frame");
  PoseConstraintSet set;
  set.pairs[0] = {1, octant_index(elbow - shoulder), 2, octant_index(shoulder - elbow)};
  set.pairs[1] = {2, octant_index(wrist - elbow), 3, octant_index(elbow - wrist)};
  return set;
}

namespace {

PoseConstraintSet readdress(const PoseConstraintSet& in, int s, int e, int w) {
  PoseConstraintSet out = in;
  out.pairs[0].out_joint = s;
  out.pairs[0].in_joint = e;
  out.pairs[1].out_joint = e;
  out.pairs[1].in_joint = w;
  return out;
}

}  // namespace

PoseConstraintSet map_to_robot(const PoseConstraintSet& human, const RobotDefinition& def) {
  human.validate();
  const int n = static_cast<int>(def.joint_count());
  const auto& c = def.constrained;
  if (!(1 <= c.shoulder && c.shoulder < c.elbow && c.elbow < c.wrist && c.wrist <= n))
    throw Error("constrained joint indices out of chain bounds");
  return readdress(human, c.shoulder, c.elbow, c.wrist);
}

PoseConstraintSet unmap_from_robot(const PoseConstraintSet& robot, const RobotDefinition& def) {
  const auto& c = def.constrained;
  if (robot.pairs[0].out_joint != c.shoulder || robot.pairs[0].in_joint != c.elbow ||
      robot.pairs[1].in_joint != c.wrist)
    throw Error("constraint set is not addressed to this robot");
  return readdress(robot, 1, 2, 3);
}

OctantSet neighbor_octants(OctantId o, Softening eta) {
  OctantSet s;
  for (int k = 1; k <= 8; ++k) {
    const auto q = OctantId::from_index(k);
    if (hamming_distance(o, q) <= eta.eta()) s.insert(q);
  }
  return s;
}

OctantSet admissible_set(OctantId o, Softening eta) { return neighbor_octants(o, eta); }

bool in_set_closure(const OctantSet& s, const Vec3& v, double tol) {
  for (auto o : s.members())
    if (in_octant_closure(o, v, tol)) return true;
  return false;
}

Vec3 project_into_set(const Vec3& v, const OctantSet& s) {
  if (s.empty()) throw Error("empty octant set");
  require_direction(v);
  if (in_set_closure(s, v)) return v / v.norm();
  // Members are visited in ascending index, so strict improvement keeps the lowest index on ties.
  const Vec3 unit = v / v.norm();
  Vec3 best;
  double best_cos = -2.0;
  for (auto o : s.members()) {
    const Vec3 p = project_into_octant(v, o);
    const double c = unit.dot(p);
    if (c > best_cos) {
      best_cos = c;
      best = p;
    }
  }
  return best;
}

}  // namespace pose_ik
