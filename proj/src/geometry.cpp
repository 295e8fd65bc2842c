#include "pose_ik/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pose_ik {

bool is_finite(const Vec3& v) {
  return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z());
}

void require_direction(const Vec3& v) {
  if (!is_finite(v)) throw Error("non-finite vector");
  if (v.x() == 0.0 && v.y() == 0.0 && v.z() == 0.0) throw Error("degenerate direction");
}

Vec3 normalized(const Vec3& v) {
  require_direction(v);
  return v / v.norm();
}

double angle_between(const Vec3& u, const Vec3& v) {
  require_direction(u);
  require_direction(v);
  // atan2 keeps full precision near 0 and pi, where acos of the dot product does not.
  return std::atan2(u.cross(v).norm(), u.dot(v));
}

OctantId OctantId::from_index(int index) {
  if (index < 1 || index > 8) throw Error("octant index out of range: " + std::to_string(index));
  return OctantId(index);
}

OctantId OctantId::from_signs(int sx, int sy, int sz) {
  return OctantId(1 + 4 * (sx < 0) + 2 * (sy < 0) + (sz < 0));
}

Vec3 OctantId::diagonal() const {
  const double c = 1.0 / std::sqrt(3.0);
  return {sign(0) * c, sign(1) * c, sign(2) * c};
}

int hamming_distance(OctantId a, OctantId b) {
  return static_cast<int>(std::bitset<3>((a.index() - 1) ^ (b.index() - 1)).count());
}

OctantSet OctantSet::all() {
  OctantSet s;
  s.bits_.set();
  return s;
}

OctantSet OctantSet::single(OctantId o) {
  OctantSet s;
  s.insert(o);
  return s;
}

std::vector<OctantId> OctantSet::members() const {
  std::vector<OctantId> out;
  for (int i = 0; i < 8; ++i)
    if (bits_.test(i)) out.push_back(OctantId::from_index(i + 1));
  return out;
}

OctantSet OctantSet::operator|(const OctantSet& o) const {
  OctantSet s;
  s.bits_ = bits_ | o.bits_;
  return s;
}

OctantSet OctantSet::operator&(const OctantSet& o) const {
  OctantSet s;
  s.bits_ = bits_ & o.bits_;
  return s;
}

OctantId octant_index(const Vec3& v) {
  require_direction(v);
  return OctantId::from_signs(v.x() < 0 ? -1 : 1, v.y() < 0 ? -1 : 1, v.z() < 0 ? -1 : 1);
}

bool octant_contains(OctantId o, const Vec3& v) { return octant_index(v) == o; }

bool in_octant_closure(OctantId o, const Vec3& v, double tol) {
  for (int k = 0; k < 3; ++k)
    if (o.sign(k) * v[k] < -tol) return false;
  return true;
}

Vec3 project_into_octant(const Vec3& v, OctantId o) {
  require_direction(v);
  if (in_octant_closure(o, v)) return v / v.norm();

  // Zeroing the sign-violating components is the Euclidean projection onto
  // the closed octant cone.
  Vec3 clamped = v;
  for (int k = 0; k < 3; ++k)
    if (o.sign(k) * v[k] < 0.0) clamped[k] = 0.0;
  if (clamped.squaredNorm() > 0.0) return clamped / clamped.norm();

  // Cone projection collapses to the origin: the angularly closest closure
  // direction is the axis whose signed component is largest.
  int best = 0;
  for (int k = 1; k < 3; ++k)
    if (o.sign(k) * v[k] > o.sign(best) * v[best]) best = k;
  Vec3 axis = Vec3::Zero();
  axis[best] = o.sign(best);
  return axis;
}

}  // namespace pose_ik
