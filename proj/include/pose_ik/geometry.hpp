#pragma once

#include <array>
#include <bitset>
#include <cstdint>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "pose_ik/error.hpp"

namespace pose_ik {

using Vec3 = Eigen::Vector3d;

/// Default absolute tolerance for geometric equality.
inline constexpr double kGeomTolerance = 1e-9;

/// Throws "degenerate direction" for zero vectors and "non-finite vector" for NaN/Inf.
void require_direction(const Vec3& v);
bool is_finite(const Vec3& v);
Vec3 normalized(const Vec3& v);

/// Angle in [0, pi] between two non-zero vectors.
double angle_between(const Vec3& u, const Vec3& v);

/**
 * One of the 8 sign regions of a world-aligned frame.
 *
 * Index encoding: index = 1 + 4*[x<0] + 2*[y<0] + [z<0], so index 1 is
 * (+,+,+) and index 8 is (-,-,-). A component equal to zero classifies as +.
 */
class OctantId {
 public:
  static OctantId from_index(int index);
  static OctantId from_signs(int sx, int sy, int sz);

  int index() const { return index_; }
  /// +1 or -1 per axis.
  int sign(int axis) const { return ((index_ - 1) >> (2 - axis)) & 1 ? -1 : 1; }
  std::array<int, 3> signs() const { return {sign(0), sign(1), sign(2)}; }

  /// Unit vector along the octant's diagonal.
  Vec3 diagonal() const;

  friend bool operator==(OctantId a, OctantId b) { return a.index_ == b.index_; }
  friend auto operator<=>(OctantId a, OctantId b) { return a.index_ <=> b.index_; }

 private:
  explicit OctantId(int index) : index_(index) {}
  int index_;
};

/// Number of mismatched sign positions between two octants.
int hamming_distance(OctantId a, OctantId b);

/// Subset of the 8 octants with bitset semantics.
class OctantSet {
 public:
  OctantSet() = default;
  static OctantSet all();
  static OctantSet single(OctantId o);

  void insert(OctantId o) { bits_.set(o.index() - 1); }
  bool contains(OctantId o) const { return bits_.test(o.index() - 1); }
  bool empty() const { return bits_.none(); }
  bool full() const { return bits_.all(); }
  std::size_t size() const { return bits_.count(); }
  /// Members in ascending index order.
  std::vector<OctantId> members() const;

  bool is_subset_of(const OctantSet& other) const { return (bits_ & ~other.bits_).none(); }
  OctantSet operator|(const OctantSet& o) const;
  OctantSet operator&(const OctantSet& o) const;
  friend bool operator==(const OctantSet&, const OctantSet&) = default;

 private:
  std::bitset<8> bits_;
};

OctantId octant_index(const Vec3& v);
bool octant_contains(OctantId o, const Vec3& v);

/// True when no component of v has a sign opposite to o (beyond tol).
bool in_octant_closure(OctantId o, const Vec3& v, double tol = 0.0);

/// Closest unit direction to v inside the closure of octant o.
Vec3 project_into_octant(const Vec3& v, OctantId o);

}  // namespace pose_ik
