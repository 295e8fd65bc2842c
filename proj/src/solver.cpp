#include "pose_ik/solver.hpp"

#include <cmath>
#include <string>

namespace pose_ik {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Fabrik: return "FABRIK";
    case Method::Pic: return "PIC";
    case Method::Pics: return "PICS";
  }
  return "?";
}

Method parse_method(std::string_view s) {
  std::string up(s);
  for (auto& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (up == "FABRIK") return Method::Fabrik;
  if (up == "PIC") return Method::Pic;
  if (up == "PICS") return Method::Pics;
  throw ConfigError("unknown method '" + std::string(s) + "' (expected fabrik, pic or pics)");
}

std::string_view to_string(ConstraintKind k) { return k == ConstraintKind::Out ? "OUT" : "IN"; }

std::string_view to_string(ConstraintStatus s) {
  switch (s) {
    case ConstraintStatus::Satisfied: return "satisfied";
    case ConstraintStatus::SoftenedSatisfied: return "softened";
    case ConstraintStatus::Violated: return "violated";
  }
  return "?";
}

void SolverConfig::validate() const {
  if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (!(position_tolerance > 0.0) || !std::isfinite(position_tolerance))
    throw ConfigError("position_tolerance must be > 0");
}

std::optional<Softening> SolverConfig::effective_softening() const {
  switch (method) {
    case Method::Fabrik: return std::nullopt;
    case Method::Pic: return Softening(0);
    case Method::Pics: return eta;
  }
  return std::nullopt;
}

namespace {

// Admissible region per 1-based joint for IN and OUT constraints.
struct JointRegions {
  std::vector<std::optional<OctantSet>> in;
  std::vector<std::optional<OctantSet>> out;

  JointRegions(std::size_t joint_count, const PoseConstraintSet* constraints, std::optional<Softening> eta)
      : in(joint_count + 1), out(joint_count + 1) {
    if (!constraints || !eta) return;
    const int n = static_cast<int>(joint_count);
    for (const auto& p : constraints->pairs) {
      if (p.out_joint < 1 || p.out_joint >= n || p.in_joint < 2 || p.in_joint > n)
        throw Error("constraint joint index out of chain bounds");
      out[p.out_joint] = admissible_set(p.out_octant, *eta);
      in[p.in_joint] = admissible_set(p.in_octant, *eta);
    }
  }

  // A full set admits every direction, so such constraints never act.
  bool any_active() const {
    for (const auto* v : {&in, &out})
      for (const auto& s : *v)
        if (s && !s->full()) return true;
    return false;
  }
};

Vec3 direction_or(const Vec3& raw, const Vec3& fallback) {
  const double n = raw.norm();
  // Coincident joints: nudge along the previous direction instead of dividing by zero.
  if (!(n > 1e-12)) return fallback;
  return raw / n;
}

Vec3 restrict(const Vec3& d, const std::optional<OctantSet>& region) {
  if (!region || in_set_closure(*region, d)) return d;
  return project_into_set(d, *region);
}

void require_chain(const KinematicChain& chain) {
  if (chain.link_lengths.empty() || chain.joints.size() != chain.link_lengths.size() + 1)
    throw Error("chain joints and link lengths do not match");
}

KinematicChain backward_impl(const KinematicChain& chain, const Vec3& target, const JointRegions& regions) {
  KinematicChain out = chain;
  auto& j = out.joints;
  const std::size_t n = j.size();
  Vec3 prev = direction_or(chain.joints[n - 2] - chain.joints[n - 1], -Vec3::UnitZ());
  j[n - 1] = target;
  for (std::size_t i = n - 1; i >= 1; --i) {
    Vec3 d = direction_or(j[i - 1] - j[i], prev);
    d = restrict(d, regions.in[i + 1]);
    j[i - 1] = j[i] + out.link_lengths[i - 1] * d;
    prev = d;
  }
  return out;
}

KinematicChain forward_impl(const KinematicChain& chain, const Vec3& base, const JointRegions& regions) {
  KinematicChain out = chain;
  auto& j = out.joints;
  Vec3 prev = direction_or(chain.joints[1] - chain.joints[0], Vec3::UnitZ());
  j[0] = base;
  for (std::size_t i = 0; i + 1 < j.size(); ++i) {
    Vec3 d = direction_or(j[i + 1] - j[i], prev);
    d = restrict(d, regions.out[i + 1]);
    j[i + 1] = j[i] + out.link_lengths[i] * d;
    prev = d;
  }
  return out;
}

KinematicChain stretch_toward(const KinematicChain& chain, const Vec3& target) {
  KinematicChain out = chain;
  auto& j = out.joints;
  j[0] = chain.base;
  for (std::size_t i = 0; i + 1 < j.size(); ++i)
    j[i + 1] = j[i] + out.link_lengths[i] * direction_or(target - j[i], Vec3::UnitZ());
  return out;
}

}  // namespace

KinematicChain backward_pass(const KinematicChain& chain, const Vec3& target, const PoseConstraintSet* constraints,
                             std::optional<Softening> eta) {
  require_chain(chain);
  if (!is_finite(target)) throw Error("target must be finite");
  return backward_impl(chain, target, JointRegions(chain.joint_count(), constraints, eta));
}

KinematicChain forward_pass(const KinematicChain& chain, const Vec3& base, const PoseConstraintSet* constraints,
                            std::optional<Softening> eta) {
  require_chain(chain);
  if (!is_finite(base)) throw Error("base must be finite");
  return forward_impl(chain, base, JointRegions(chain.joint_count(), constraints, eta));
}

std::vector<ConstraintCheck> check_constraints(const KinematicChain& chain, const PoseConstraintSet& constraints,
                                               Softening eta, double tol) {
  require_chain(chain);
  const int n = static_cast<int>(chain.joint_count());
  std::vector<ConstraintCheck> report;
  auto check = [&](ConstraintKind kind, int joint, OctantId octant) {
    ConstraintCheck c;
    c.kind = kind;
    c.joint = joint;
    c.octant = octant;
    c.admissible = admissible_set(octant, eta);
    const Vec3 d = kind == ConstraintKind::Out ? chain.joints[joint] - chain.joints[joint - 1]
                                               : chain.joints[joint - 2] - chain.joints[joint - 1];
    if (in_octant_closure(octant, d, tol)) {
      c.status = ConstraintStatus::Satisfied;
    } else if (in_set_closure(c.admissible, d, tol)) {
      c.status = ConstraintStatus::SoftenedSatisfied;
    } else {
      c.status = ConstraintStatus::Violated;
      c.deviation = angle_between(d, project_into_set(d, c.admissible));
    }
    report.push_back(c);
  };
  for (const auto& p : constraints.pairs) {
    if (p.out_joint < 1 || p.out_joint >= n || p.in_joint < 2 || p.in_joint > n)
      throw Error("constraint joint index out of chain bounds");
    check(ConstraintKind::Out, p.out_joint, p.out_octant);
    check(ConstraintKind::In, p.in_joint, p.in_octant);
  }
  return report;
}

Solution solve(const KinematicChain& chain, const Vec3& target, const PoseConstraintSet* constraints,
               const SolverConfig& cfg, const PassObserver& observer) {
  cfg.validate();
  if (!is_assembled(chain)) throw Error("chain is not assembled");
  if (!is_finite(target)) throw Error("target must be finite");

  const auto eta = cfg.effective_softening();
  const JointRegions regions(chain.joint_count(), constraints, eta);
  const bool active = regions.any_active();
  const double tol = cfg.position_tolerance;

  auto holds = [&](const KinematicChain& c) {
    for (const auto& r : check_constraints(c, *constraints, *eta))
      if (!r.satisfied()) return false;
    return true;
  };

  Solution sol;
  sol.chain = chain;
  sol.residual = (end_effector(chain) - target).norm();

  if (!active && (target - chain.base).norm() > max_reach(chain)) {
    sol.chain = stretch_toward(chain, target);
    sol.iterations_used = 1;
    if (observer) observer(PassKind::Stretch, 1, sol.chain);
  } else {
    bool done = sol.residual <= tol && (!active || holds(sol.chain));
    while (!done && sol.iterations_used < cfg.max_iterations) {
      const int it = ++sol.iterations_used;
      sol.chain = backward_impl(sol.chain, target, regions);
      if (observer) observer(PassKind::Backward, it, sol.chain);
      sol.chain = forward_impl(sol.chain, chain.base, regions);
      if (observer) observer(PassKind::Forward, it, sol.chain);
      done = (end_effector(sol.chain) - target).norm() <= tol;
    }
  }

  sol.residual = (end_effector(sol.chain) - target).norm();
  sol.converged = sol.residual <= tol;
  if (constraints) sol.constraint_report = check_constraints(sol.chain, *constraints, eta.value_or(Softening(0)));
  return sol;
}

std::vector<Solution> solve_trajectory(const RobotDefinition& def, const SkeletonTrajectory& traj,
                                       const std::vector<PoseConstraintSet>& constraints, const SolverConfig& cfg) {
  if (traj.frames.empty()) throw Error("empty trajectory");
  if (!constraints.empty() && constraints.size() != traj.frames.size())
    throw Error("need one constraint set per frame");
  def.validate();
  std::vector<Solution> out;
  out.reserve(traj.frames.size());
  KinematicChain current = rest_chain(def);
  for (std::size_t f = 0; f < traj.frames.size(); ++f) {
    const PoseConstraintSet* c = constraints.empty() ? nullptr : &constraints[f];
    out.push_back(solve(current, traj.frames[f].wrist, c, cfg));
    current = out.back().chain;
  }
  return out;
}

}  // namespace pose_ik
