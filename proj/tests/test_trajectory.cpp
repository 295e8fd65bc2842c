#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pose_ik/constraints.hpp"
#include "pose_ik/trajectory.hpp"
#include "support/oracles.hpp"

using namespace pose_ik;

namespace {

const char* kThreeFrames =
    R"({"task": "incision-straight", "units": "cm"}
{"t": 0.0, "arm": "right", "shoulder": [0, 0, 0], "elbow": [1, 0, 0], "wrist": [1, 1, 0]}
{"t": 0.033, "arm": "right", "shoulder": [0, 0, 0], "elbow": [1, 0, 0], "wrist": [1, 1, 0.5]}
{"t": 0.066, "arm": "right", "shoulder": [0, 0, 0], "elbow": [1, 0, 0], "wrist": [1, 1, 1]}
)";

SkeletonTrajectory parse(const std::string& text) {
  std::istringstream in(text);
  return parse_trajectory(in, "mem");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

SkeletonTrajectory series(const std::vector<double>& xs) {
  SkeletonTrajectory traj;
  for (std::size_t i = 0; i < xs.size(); ++i)
    traj.frames.push_back({0.1 * i, Vec3(xs[i], 0, 0), Vec3(xs[i], 1, 0), Vec3(xs[i], 2, 1)});
  return traj;
}

}  // namespace

TEST(LoadTrajectory, ValidFile) {
  const auto traj = parse(kThreeFrames);
  EXPECT_EQ(traj.frames.size(), 3u);
  EXPECT_EQ(traj.task, TaskLabel::IncisionStraight);
  EXPECT_EQ(traj.arm, Arm::Right);
  EXPECT_EQ(traj.frames[1].wrist, Vec3(1, 1, 0.5));
}

TEST(LoadTrajectory, HeaderIsOptional) {
  const auto traj = parse(R"({"t": 0.0, "shoulder": [0, 0, 0], "elbow": [1, 0, 0], "wrist": [1, 1, 0]})");
  EXPECT_EQ(traj.frames.size(), 1u);
  EXPECT_EQ(traj.task, TaskLabel::Other);
}

TEST(LoadTrajectory, NanNamesFrameAndField) {
  const std::string msg =
      error_of("{\"t\": 0.0, \"shoulder\": [0, 0, 0], \"elbow\": [1, 0, 0], \"wrist\": [1, 1, 0]}\n"
               "{\"t\": 0.1, \"shoulder\": [0, 0, 0], \"elbow\": [1, NaN, 0], \"wrist\": [1, 1, 0]}\n");
  EXPECT_NE(msg.find("frame 1"), std::string::npos) << msg;
  EXPECT_NE(msg.find("elbow"), std::string::npos) << msg;
}

TEST(LoadTrajectory, NonMonotoneTimestamps) {
  const std::string msg =
      error_of("{\"t\": 0.5, \"shoulder\": [0, 0, 0], \"elbow\": [1, 0, 0], \"wrist\": [1, 1, 0]}\n"
               "{\"t\": 0.1, \"shoulder\": [0, 0, 0], \"elbow\": [1, 0, 0], \"wrist\": [1, 1, 0]}\n");
  EXPECT_NE(msg.find("non-monotone timestamps"), std::string::npos) << msg;
}

TEST(LoadTrajectory, OtherErrors) {
  EXPECT_NE(error_of("").find("empty"), std::string::npos);
  EXPECT_NE(error_of("{\"task\": \"incision-straight\"}\n").find("empty"), std::string::npos);
  EXPECT_NE(error_of("{\"t\": 0.0, \"shoulder\": [0, 0], \"elbow\": [1, 0, 0], \"wrist\": [1, 1, 0]}")
                .find("shoulder"),
            std::string::npos);
  EXPECT_NE(error_of("{\"t\": 0.0, \"elbow\": [1, 0, 0], \"wrist\": [1, 1, 0]}").find("missing"), std::string::npos);
  EXPECT_NE(error_of("not json").find("mem:1"), std::string::npos);
  EXPECT_NE(error_of("{\"task\": \"juggling\"}\n").find("juggling"), std::string::npos);
  EXPECT_THROW(load_trajectory("/nonexistent/file.jsonl"), ConfigError);
}

TEST(LoadTrajectory, SaveRoundTripIsBitwise) {
  const auto traj = synth_demo(TaskLabel::IncisionCurve, 40, 9);
  const auto dir = std::filesystem::temp_directory_path() / "pose_ik_traj_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "a.jsonl";
  save_trajectory(traj, path);
  const auto back = load_trajectory(path);
  ASSERT_EQ(back.frames.size(), traj.frames.size());
  for (std::size_t i = 0; i < traj.frames.size(); ++i) {
    EXPECT_EQ(back.frames[i].t, traj.frames[i].t);
    EXPECT_EQ(back.frames[i].shoulder, traj.frames[i].shoulder);
    EXPECT_EQ(back.frames[i].elbow, traj.frames[i].elbow);
    EXPECT_EQ(back.frames[i].wrist, traj.frames[i].wrist);
  }
  EXPECT_EQ(back.task, traj.task);
  std::ostringstream a, b;
  write_trajectory(traj, a);
  write_trajectory(back, b);
  EXPECT_EQ(a.str(), b.str());
  std::filesystem::remove_all(dir);
}

TEST(ExponentialSmooth, Examples) {
  const auto s = exponential_smooth(series({0, 1, 1}), 0.5);
  EXPECT_EQ(s.frames[0].shoulder.x(), 0.0);
  EXPECT_EQ(s.frames[1].shoulder.x(), 0.5);
  EXPECT_EQ(s.frames[2].shoulder.x(), 0.75);

  const auto traj = synth_demo(TaskLabel::Assembly2, 30, 2);
  const auto id = exponential_smooth(traj, 1.0);
  for (std::size_t i = 0; i < traj.frames.size(); ++i) EXPECT_EQ(id.frames[i].wrist, traj.frames[i].wrist);

  const auto flat = exponential_smooth(series({3, 3, 3, 3}), 0.2);
  for (const auto& f : flat.frames) EXPECT_DOUBLE_EQ(f.elbow.x(), 3.0);

  EXPECT_THROW(exponential_smooth(traj, 0.0), Error);
  EXPECT_THROW(exponential_smooth(traj, 1.5), Error);
}

TEST(ExponentialSmooth, MatchesRecurrenceOracle) {
  oracle::Rng rng(97);
  std::vector<double> xs;
  for (int i = 0; i < 60; ++i) xs.push_back(rng.uniform(-10, 10));
  for (double a : {0.1, 0.3, 0.77}) {
    const auto s = exponential_smooth(series(xs), a);
    const auto ref = oracle::smooth(xs, a);
    for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_NEAR(s.frames[i].wrist.x(), ref[i], 1e-12);
  }
}

TEST(ExponentialSmooth, ShiftEquivariantAndBounded) {
  oracle::Rng rng(101);
  std::vector<double> xs;
  for (int i = 0; i < 60; ++i) xs.push_back(rng.uniform(-10, 10));
  const double lo = *std::min_element(xs.begin(), xs.end()), hi = *std::max_element(xs.begin(), xs.end());
  std::vector<double> shifted = xs;
  for (auto& x : shifted) x += 7.25;
  const auto s = exponential_smooth(series(xs), 0.3);
  const auto t = exponential_smooth(series(shifted), 0.3);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    EXPECT_NEAR(t.frames[i].shoulder.x(), s.frames[i].shoulder.x() + 7.25, 1e-12);
    EXPECT_GE(s.frames[i].shoulder.x(), lo - 1e-12);
    EXPECT_LE(s.frames[i].shoulder.x(), hi + 1e-12);
  }
}

TEST(ToRobotFrame, Examples) {
  SkeletonTrajectory traj;
  traj.frames.push_back({0.0, {1, 2, 3}, {1, 2, 3}, {1, 2, 3}});
  EXPECT_EQ(to_robot_frame(traj, WorkspaceTransform{}).frames[0].wrist, Vec3(1, 2, 3));
  WorkspaceTransform flip;
  flip.axis_signs = {-1, 1, -1};
  EXPECT_EQ(to_robot_frame(traj, flip).frames[0].wrist, Vec3(-1, 2, -3));
}

TEST(ToRobotFrame, ConstraintExtractionIsEquivariant) {
  oracle::Rng rng(103);
  for (int trial = 0; trial < 300; ++trial) {
    WorkspaceTransform tf;
    for (auto& s : tf.axis_signs) s = rng.integer(0, 1) ? 1 : -1;
    tf.scale = rng.uniform(0.2, 3.0);
    tf.offset = {rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(-50, 50)};
    SkeletonFrame f{0.0, Vec3(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)), {}, {}};
    f.elbow = f.shoulder + rng.unit() * 3.0;
    f.wrist = f.elbow + rng.unit() * 3.0;
    if ((f.wrist - f.shoulder).norm() < 0.1) continue;
    SkeletonTrajectory traj;
    traj.frames.push_back(f);
    const auto g = to_robot_frame(traj, tf).frames[0];
    const auto before = extract_human_pose(f.shoulder, f.elbow, f.wrist);
    const auto after = extract_human_pose(g.shoulder, g.elbow, g.wrist);
    auto flip = [&](OctantId o) {
      const auto s = o.signs();
      return OctantId::from_signs(s[0] * tf.axis_signs[0], s[1] * tf.axis_signs[1], s[2] * tf.axis_signs[2]);
    };
    // Random directions have no zero components, so the sign flip is exact.
    for (int k = 0; k < 2; ++k) {
      EXPECT_EQ(after.pairs[k].out_octant, flip(before.pairs[k].out_octant));
      EXPECT_EQ(after.pairs[k].in_octant, flip(before.pairs[k].in_octant));
    }
  }
}

TEST(SynthDemo, DeterministicAndWellFormed) {
  for (TaskLabel kind : {TaskLabel::IncisionStraight, TaskLabel::IncisionCurve, TaskLabel::Assembly1,
                         TaskLabel::Assembly2, TaskLabel::Assembly3}) {
    const auto a = synth_demo(kind, 90, 42);
    const auto b = synth_demo(kind, 90, 42);
    std::ostringstream sa, sb;
    write_trajectory(a, sa);
    write_trajectory(b, sb);
    EXPECT_EQ(sa.str(), sb.str());
    EXPECT_NO_THROW(a.validate());
    EXPECT_EQ(a.task, kind);
    for (const auto& f : a.frames) {
      EXPECT_NEAR((f.elbow - f.shoulder).norm(), kSynthUpperArm, 1e-9);
      EXPECT_NEAR((f.wrist - f.elbow).norm(), kSynthForearm, 1e-9);
    }
    std::ostringstream sc;
    write_trajectory(synth_demo(kind, 90, 43), sc);
    EXPECT_NE(sa.str(), sc.str());
  }
  EXPECT_THROW(synth_demo(TaskLabel::Other, 10, 1), ConfigError);
  EXPECT_THROW(synth_demo(TaskLabel::IncisionCurve, 1, 1), ConfigError);
}

TEST(SynthDemo, StraightIncisionIsCollinear) {
  const auto traj = synth_demo(TaskLabel::IncisionStraight, 90, 5);
  const Vec3 a = traj.frames.front().wrist, b = traj.frames.back().wrist;
  const Vec3 dir = (b - a).normalized();
  for (const auto& f : traj.frames) EXPECT_LE((f.wrist - a).cross(dir).norm(), 1e-9);
}

TEST(TaskLabel, ParseRoundTrip) {
  for (const char* s : {"incision-straight", "incision-curve", "assembly-1", "assembly-2", "assembly-3", "other"})
    EXPECT_EQ(to_string(parse_task_label(s)), s);
  EXPECT_THROW(parse_task_label("assembly-4"), ConfigError);
  EXPECT_EQ(parse_arm("left"), Arm::Left);
  EXPECT_THROW(parse_arm("both"), ConfigError);
}
