#include <cmath>
#include <numbers>
#include <random>

#include "pose_ik/trajectory.hpp"

namespace pose_ik {

namespace {

constexpr double kFrameRate = 30.0;
constexpr double kDeg = std::numbers::pi / 180.0;

// The incision pad stands upright facing the demonstrator; the wrist traces
// in a parallel plane 5 units in front of it.
const Vec3 kPadCenter(-22.0, 9.5, 158.0);

// Portable uniform draws: std distributions are implementation-defined.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : gen_(seed) {}
  double operator()(double lo, double hi) {
    const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

 private:
  std::mt19937_64 gen_;
};

double min_jerk(double tau) { return tau * tau * tau * (10.0 - 15.0 * tau + 6.0 * tau * tau); }

// Elbow on the circle of points 30 from the shoulder and 28 from the wrist,
// rotated by `swivel` about the shoulder-wrist axis away from hanging down.
Vec3 place_elbow(const Vec3& shoulder, const Vec3& wrist, double swivel) {
  const Vec3 axis = wrist - shoulder;
  const double d = axis.norm();
  const Vec3 dir = axis / d;
  const double a = (kSynthUpperArm * kSynthUpperArm - kSynthForearm * kSynthForearm + d * d) / (2.0 * d);
  const double r = std::sqrt(std::max(0.0, kSynthUpperArm * kSynthUpperArm - a * a));
  Vec3 down = -Vec3::UnitY();
  Vec3 e1 = down - down.dot(dir) * dir;
  if (e1.norm() < 1e-6) e1 = Vec3::UnitZ() - Vec3::UnitZ().dot(dir) * dir;
  e1.normalize();
  const Vec3 e2 = dir.cross(e1);
  return shoulder + a * dir + r * (std::cos(swivel) * e1 + std::sin(swivel) * e2);
}

}  // namespace

Vec3 synth_shoulder() { return {-18.0, 40.0, 200.0}; }

SkeletonTrajectory synth_demo(TaskLabel kind, int n_frames, std::uint64_t seed) {
  if (n_frames < 2) throw ConfigError("synthetic demonstrations need at least 2 frames");
  if (kind == TaskLabel::Other) throw ConfigError("cannot synthesize task 'other'");

  // Mix the task into the seed so every task draws an independent stream.
  Uniform rng(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(kind) + 1);
  const Vec3 shoulder = synth_shoulder();
  const double swivel0 = rng(10.0, 35.0) * kDeg;
  const double swivel_amp = rng(0.0, 10.0) * kDeg;
  const double swivel_phase = rng(0.0, 2.0 * std::numbers::pi);
  const Vec3 jitter(rng(-3.0, 3.0), 0.0, rng(-3.0, 3.0));

  std::vector<Vec3> wrists(static_cast<std::size_t>(n_frames));
  const double last = n_frames - 1;
  switch (kind) {
    case TaskLabel::IncisionStraight: {
      const Vec3 center = kPadCenter + Vec3(jitter.x(), jitter.z(), 0.0);
      const double heading = rng(-30.0, 30.0) * kDeg;
      const double half = rng(7.0, 9.0);
      const Vec3 dir(std::cos(heading), std::sin(heading), 0.0);
      for (int i = 0; i < n_frames; ++i) wrists[i] = center + (2.0 * min_jerk(i / last) - 1.0) * half * dir;
      break;
    }
    case TaskLabel::IncisionCurve: {
      const Vec3 center = kPadCenter + Vec3(jitter.x(), jitter.z(), 0.0);
      const double radius = rng(5.0, 6.5);
      const double start = rng(0.0, 360.0) * kDeg;
      const double sweep = rng(120.0, 180.0) * kDeg;
      for (int i = 0; i < n_frames; ++i) {
        const double a = start + sweep * min_jerk(i / last);
        wrists[i] = center + radius * Vec3(std::cos(a), std::sin(a), 0.0);
      }
      break;
    }
    default: {
      // Transit from the pick pose, then align within the target plane.
      Vec3 align, e1, e2;
      if (kind == TaskLabel::Assembly1) {
        align = {-15.0, 20.0, 160.0};
        e1 = Vec3::UnitX();
        e2 = Vec3::UnitY();
      } else if (kind == TaskLabel::Assembly2) {
        align = {-10.0, 10.0, 170.0};
        e1 = Vec3::UnitX();
        e2 = Vec3::UnitZ();
      } else {
        align = {-30.0, 18.0, 172.0};
        e1 = Vec3::UnitY();
        e2 = Vec3::UnitZ();
      }
      align += Vec3(jitter.x() * e1.x() + jitter.z() * e2.x(), jitter.x() * e1.y() + jitter.z() * e2.y(),
                    jitter.x() * e1.z() + jitter.z() * e2.z());
      const Vec3 pick = Vec3(-35.0 + rng(-2.0, 2.0), 8.0, 175.0 + rng(-2.0, 2.0));
      const double a1 = rng(2.0, 4.0), a2 = rng(2.0, 4.0);
      const double cycles = rng(1.0, 2.0);
      const int transit = std::max(1, n_frames / 2);
      for (int i = 0; i < n_frames; ++i) {
        if (i < transit) {
          wrists[i] = pick + min_jerk(i / static_cast<double>(transit)) * (align - pick);
        } else {
          const double tau = (i - transit) / std::max(1.0, last - transit);
          const double w = 2.0 * std::numbers::pi * cycles * tau;
          wrists[i] = align + a1 * std::sin(w) * e1 + a2 * (1.0 - std::cos(w)) * 0.5 * e2;
        }
      }
      break;
    }
  }

  SkeletonTrajectory traj;
  traj.task = kind;
  traj.arm = Arm::Right;
  traj.units = "cm";
  traj.frames.reserve(wrists.size());
  for (int i = 0; i < n_frames; ++i) {
    SkeletonFrame f;
    f.t = i / kFrameRate;
    f.shoulder = shoulder;
    f.wrist = wrists[i];
    const double swivel = swivel0 + swivel_amp * std::sin(2.0 * std::numbers::pi * i / last + swivel_phase);
    f.elbow = place_elbow(shoulder, f.wrist, swivel);
    traj.frames.push_back(f);
  }
  return traj;
}

}  // namespace pose_ik
