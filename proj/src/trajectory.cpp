#include "pose_ik/trajectory.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pose_ik {

using nlohmann::json;

namespace {

constexpr std::pair<TaskLabel, std::string_view> kTaskNames[] = {
    {TaskLabel::IncisionStraight, "incision-straight"}, {TaskLabel::IncisionCurve, "incision-curve"},
    {TaskLabel::Assembly1, "assembly-1"},               {TaskLabel::Assembly2, "assembly-2"},
    {TaskLabel::Assembly3, "assembly-3"},               {TaskLabel::Other, "other"},
};

// JSON has no NaN/Infinity literals. Rewrite bare tokens to null so the
// validator can name the offending field instead of failing in the parser.
std::string neutralize_nonfinite_tokens(const std::string& line) {
  std::string out;
  out.reserve(line.size());
  bool in_string = false;
  for (std::size_t i = 0; i < line.size();) {
    const char c = line[i];
    if (in_string) {
      out += c;
      if (c == '\\' && i + 1 < line.size()) {
        out += line[i + 1];
        i += 2;
        continue;
      }
      if (c == '"') in_string = false;
      ++i;
      continue;
    }
    if (c == '"') {
      in_string = true;
      out += c;
      ++i;
      continue;
    }
    bool replaced = false;
    for (std::string_view tok : {"-Infinity", "Infinity", "-inf", "inf", "NaN", "nan", "-nan"}) {
      if (line.compare(i, tok.size(), tok) == 0) {
        out += "null";
        i += tok.size();
        replaced = true;
        break;
      }
    }
    if (!replaced) {
      out += c;
      ++i;
    }
  }
  return out;
}

Vec3 read_point(const json& obj, const char* field, std::size_t frame, const std::string& where) {
  const std::string ctx = where + ": frame " + std::to_string(frame) + ": field '" + field + "'";
  if (!obj.contains(field)) throw ConfigError(ctx + " is missing");
  const auto& a = obj.at(field);
  if (!a.is_array() || a.size() != 3) throw ConfigError(ctx + " must be an array of 3 numbers");
  Vec3 p;
  for (int k = 0; k < 3; ++k) {
    if (!a[k].is_number() || !std::isfinite(a[k].get<double>()))
      throw ConfigError(ctx + " component " + std::to_string(k) + " is not a finite number (NaN)");
    p[k] = a[k].get<double>();
  }
  return p;
}

}  // namespace

std::string_view to_string(TaskLabel task) {
  for (const auto& [t, name] : kTaskNames)
    if (t == task) return name;
  return "other";
}

std::string_view to_string(Arm arm) { return arm == Arm::Left ? "left" : "right"; }

TaskLabel parse_task_label(std::string_view s) {
  for (const auto& [t, name] : kTaskNames)
    if (name == s) return t;
  throw ConfigError("unknown task label '" + std::string(s) + "'");
}

Arm parse_arm(std::string_view s) {
  if (s == "left") return Arm::Left;
  if (s == "right") return Arm::Right;
  throw ConfigError("unknown arm '" + std::string(s) + "'");
}

void SkeletonTrajectory::validate() const {
  if (frames.empty()) throw Error("empty trajectory");
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto& f = frames[i];
    if (!std::isfinite(f.t) || !is_finite(f.shoulder) || !is_finite(f.elbow) || !is_finite(f.wrist))
      throw Error("frame " + std::to_string(i) + ": non-finite value");
    if (i > 0 && !(f.t > frames[i - 1].t))
      throw Error("non-monotone timestamps at frame " + std::to_string(i));
  }
}

SkeletonTrajectory parse_trajectory(std::istream& in, const std::string& source) {
  SkeletonTrajectory traj;
  std::string line;
  int line_no = 0;
  bool arm_seen = false;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    json obj;
    try {
      obj = json::parse(neutralize_nonfinite_tokens(line));
    } catch (const json::parse_error& e) {
      throw ConfigError(where + ": parse error: " + e.what());
    }
    if (!obj.is_object()) throw ConfigError(where + ": expected a JSON object");
    if (header_allowed && !obj.contains("t")) {
      header_allowed = false;
      try {
        if (obj.contains("task")) traj.task = parse_task_label(obj.at("task").get<std::string>());
        if (obj.contains("units")) traj.units = obj.at("units").get<std::string>();
      } catch (const json::exception& e) {
        throw ConfigError(where + ": bad header: " + e.what());
      }
      continue;
    }
    header_allowed = false;
    const std::size_t frame = traj.frames.size();
    SkeletonFrame f;
    if (!obj.contains("t") || !obj.at("t").is_number() || !std::isfinite(obj.at("t").get<double>()))
      throw ConfigError(where + ": frame " + std::to_string(frame) + ": field 't' is not a finite number");
    f.t = obj.at("t").get<double>();
    f.shoulder = read_point(obj, "shoulder", frame, where);
    f.elbow = read_point(obj, "elbow", frame, where);
    f.wrist = read_point(obj, "wrist", frame, where);
    if (obj.contains("arm")) {
      if (!obj.at("arm").is_string()) throw ConfigError(where + ": field 'arm' must be a string");
      const Arm arm = parse_arm(obj.at("arm").get<std::string>());
      if (arm_seen && arm != traj.arm) throw ConfigError(where + ": trajectory mixes left and right arm frames");
      traj.arm = arm;
      arm_seen = true;
    }
    if (!traj.frames.empty() && !(f.t > traj.frames.back().t))
      throw ConfigError(where + ": frame " + std::to_string(frame) + ": non-monotone timestamps");
    traj.frames.push_back(f);
  }
  if (traj.frames.empty()) throw ConfigError(source + ": empty trajectory file");
  return traj;
}

SkeletonTrajectory load_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trajectory file " + path.string());
  return parse_trajectory(in, path.string());
}

void write_trajectory(const SkeletonTrajectory& traj, std::ostream& out) {
  nlohmann::ordered_json header;
  header["task"] = to_string(traj.task);
  header["units"] = traj.units;
  out << header.dump() << '\n';
  auto arr = [](const Vec3& p) { return nlohmann::ordered_json::array({p.x(), p.y(), p.z()}); };
  for (const auto& f : traj.frames) {
    nlohmann::ordered_json j;
    j["t"] = f.t;
    j["arm"] = to_string(traj.arm);
    j["shoulder"] = arr(f.shoulder);
    j["elbow"] = arr(f.elbow);
    j["wrist"] = arr(f.wrist);
    out << j.dump() << '\n';
  }
}

void save_trajectory(const SkeletonTrajectory& traj, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write trajectory file " + path.string());
  write_trajectory(traj, out);
  if (!out) throw Error("failed writing " + path.string());
}

SkeletonTrajectory exponential_smooth(const SkeletonTrajectory& traj, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error("smoothing factor must be in (0, 1]");
  SkeletonTrajectory out = traj;
  for (std::size_t i = 1; i < out.frames.size(); ++i) {
    auto& s = out.frames[i];
    const auto& prev = out.frames[i - 1];
    const auto& x = traj.frames[i];
    s.shoulder = alpha * x.shoulder + (1.0 - alpha) * prev.shoulder;
    s.elbow = alpha * x.elbow + (1.0 - alpha) * prev.elbow;
    s.wrist = alpha * x.wrist + (1.0 - alpha) * prev.wrist;
  }
  return out;
}

SkeletonTrajectory to_robot_frame(const SkeletonTrajectory& traj, const WorkspaceTransform& tf) {
  tf.validate();
  SkeletonTrajectory out = traj;
  for (auto& f : out.frames) {
    f.shoulder = tf.apply(f.shoulder);
    f.elbow = tf.apply(f.elbow);
    f.wrist = tf.apply(f.wrist);
  }
  return out;
}

}  // namespace pose_ik
