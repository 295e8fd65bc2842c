#include "pose_ik/chain.hpp"

#include <cmath>
#include <string>

namespace pose_ik {

Vec3 WorkspaceTransform::apply_linear(const Vec3& d) const {
  return {axis_signs[0] * scale * d.x(), axis_signs[1] * scale * d.y(), axis_signs[2] * scale * d.z()};
}

Vec3 WorkspaceTransform::apply(const Vec3& p) const { return apply_linear(p) + offset; }

void WorkspaceTransform::validate() const {
  for (int s : axis_signs)
    if (s != 1 && s != -1) throw ConfigError("transform axis signs must be +1 or -1");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("transform scale must be positive");
  if (!is_finite(offset)) throw ConfigError("transform offset must be finite");
}

void RobotDefinition::validate() const {
  const std::string who = "robot '" + name + "': ";
  if (link_lengths.size() < 2) throw ConfigError(who + "needs at least 3 joints");
  for (double l : link_lengths)
    if (!(l > 0.0) || !std::isfinite(l)) throw ConfigError(who + "link lengths must be positive");
  if (!is_finite(base)) throw ConfigError(who + "base must be finite");
  const int n = static_cast<int>(joint_count());
  const auto& c = constrained;
  if (!(1 <= c.shoulder && c.shoulder < c.elbow && c.elbow < c.wrist && c.wrist <= n))
    throw ConfigError(who + "constrained joints must satisfy 1 <= shoulder < elbow < wrist <= " +
                      std::to_string(n));
  if (!rest_directions.empty() && rest_directions.size() != link_lengths.size())
    throw ConfigError(who + "rest_directions must have one entry per link");
  transform.validate();
}

KinematicChain assemble(const Vec3& base, const std::vector<double>& link_lengths,
                        const std::vector<Vec3>& directions, std::string name) {
  if (directions.size() != link_lengths.size())
    throw Error("assemble: expected " + std::to_string(link_lengths.size()) + " directions, got " +
                std::to_string(directions.size()));
  if (link_lengths.empty()) throw Error("assemble: chain needs at least one link");
  KinematicChain chain;
  chain.name = std::move(name);
  chain.base = base;
  chain.link_lengths = link_lengths;
  chain.joints.reserve(link_lengths.size() + 1);
  chain.joints.push_back(base);
  for (std::size_t i = 0; i < directions.size(); ++i) {
    if (!(link_lengths[i] > 0.0)) throw Error("assemble: link lengths must be positive");
    if (!is_finite(directions[i]) || std::abs(directions[i].norm() - 1.0) > 1e-6)
      throw Error("assemble: direction " + std::to_string(i) + " is not a unit vector");
    chain.joints.push_back(chain.joints.back() + link_lengths[i] * directions[i]);
  }
  return chain;
}

KinematicChain assemble(const RobotDefinition& def, const std::vector<Vec3>& directions) {
  return assemble(def.base, def.link_lengths, directions, def.name);
}

KinematicChain rest_chain(const RobotDefinition& def) {
  if (!def.rest_directions.empty()) {
    std::vector<Vec3> dirs;
    for (const auto& d : def.rest_directions) dirs.push_back(normalized(d));
    return assemble(def, dirs);
  }
  return assemble(def, std::vector<Vec3>(def.link_lengths.size(), Vec3::UnitZ()));
}

std::vector<Vec3> link_directions(const KinematicChain& chain) {
  std::vector<Vec3> dirs;
  dirs.reserve(chain.link_count());
  for (std::size_t i = 0; i + 1 < chain.joints.size(); ++i)
    dirs.push_back(normalized(chain.joints[i + 1] - chain.joints[i]));
  return dirs;
}

const Vec3& end_effector(const KinematicChain& chain) { return chain.joints.back(); }

double max_reach(const KinematicChain& chain) {
  double sum = 0.0;
  for (double l : chain.link_lengths) sum += l;
  return sum;
}

double max_reach(const RobotDefinition& def) {
  double sum = 0.0;
  for (double l : def.link_lengths) sum += l;
  return sum;
}

double max_link_length_error(const KinematicChain& chain) {
  double worst = 0.0;
  for (std::size_t i = 0; i < chain.link_lengths.size(); ++i) {
    const double len = (chain.joints[i + 1] - chain.joints[i]).norm();
    worst = std::max(worst, std::abs(len - chain.link_lengths[i]));
  }
  return worst;
}

bool is_assembled(const KinematicChain& chain, double tol) {
  if (chain.link_lengths.empty() || chain.joints.size() != chain.link_lengths.size() + 1) return false;
  for (const auto& j : chain.joints)
    if (!is_finite(j)) return false;
  return max_link_length_error(chain) <= tol;
}

}  // namespace pose_ik
