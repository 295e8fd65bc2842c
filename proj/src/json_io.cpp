#include "pose_ik/json_io.hpp"

#include <cmath>
#include <fstream>

namespace pose_ik {

Json to_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Vec3 vec3_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(what + ": expected [x, y, z]");
  Vec3 v;
  for (int k = 0; k < 3; ++k) {
    if (!j[k].is_number()) throw ConfigError(what + ": expected numbers");
    v[k] = j[k].get<double>();
  }
  if (!is_finite(v)) throw ConfigError(what + ": non-finite value");
  return v;
}

Json to_json(const RobotDefinition& def) {
  Json j;
  j["name"] = def.name;
  j["base"] = to_json(def.base);
  j["link_lengths"] = def.link_lengths;
  j["constrained_joints"] = {{"shoulder", def.constrained.shoulder},
                             {"elbow", def.constrained.elbow},
                             {"wrist", def.constrained.wrist}};
  if (!def.rest_directions.empty()) {
    Json dirs = Json::array();
    for (const auto& d : def.rest_directions) dirs.push_back(to_json(d));
    j["rest_directions"] = dirs;
  }
  j["transform"] = {{"axis_signs", def.transform.axis_signs},
                    {"offset", to_json(def.transform.offset)},
                    {"scale", def.transform.scale}};
  return j;
}

RobotDefinition robot_from_json(const Json& j) {
  RobotDefinition def;
  try {
    def.name = j.value("name", std::string("robot"));
    def.base = j.contains("base") ? vec3_from_json(j.at("base"), "base") : Vec3::Zero();
    def.link_lengths = j.at("link_lengths").get<std::vector<double>>();
    const auto& c = j.at("constrained_joints");
    def.constrained = {c.at("shoulder").get<int>(), c.at("elbow").get<int>(), c.at("wrist").get<int>()};
    if (j.contains("rest_directions"))
      for (const auto& d : j.at("rest_directions")) def.rest_directions.push_back(vec3_from_json(d, "rest_directions"));
    if (j.contains("transform")) {
      const auto& t = j.at("transform");
      if (t.contains("axis_signs")) def.transform.axis_signs = t.at("axis_signs").get<std::array<int, 3>>();
      if (t.contains("offset")) def.transform.offset = vec3_from_json(t.at("offset"), "transform.offset");
      if (t.contains("scale")) def.transform.scale = t.at("scale").get<double>();
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("robot definition: ") + e.what());
  }
  def.validate();
  return def;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

RobotDefinition load_robot(const std::filesystem::path& path) {
  try {
    return robot_from_json(read_json_file(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

Json to_json(const PoseConstraintSet& set) {
  Json pairs = Json::array();
  for (const auto& p : set.pairs)
    pairs.push_back({{"out_joint", p.out_joint},
                     {"out_octant", p.out_octant.index()},
                     {"in_joint", p.in_joint},
                     {"in_octant", p.in_octant.index()}});
  return {{"pairs", pairs}};
}

PoseConstraintSet constraints_from_json(const Json& j) {
  PoseConstraintSet set;
  try {
    const auto& pairs = j.at("pairs");
    if (!pairs.is_array() || pairs.size() != 2) throw ConfigError("constraint set needs exactly two pairs");
    for (std::size_t i = 0; i < 2; ++i) {
      const auto& p = pairs[i];
      set.pairs[i] = {p.at("out_joint").get<int>(), OctantId::from_index(p.at("out_octant").get<int>()),
                      p.at("in_joint").get<int>(), OctantId::from_index(p.at("in_octant").get<int>())};
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("constraint set: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("constraint set: ") + e.what());
  }
  try {
    set.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return set;
}

Json to_json(const ConstraintCheck& c) {
  Json adm = Json::array();
  for (auto o : c.admissible.members()) adm.push_back(o.index());
  return {{"kind", std::string(to_string(c.kind))},
          {"joint", c.joint},
          {"octant", c.octant.index()},
          {"admissible", adm},
          {"status", std::string(to_string(c.status))},
          {"deviation", c.deviation}};
}

Json to_json(const Solution& s) {
  Json joints = Json::array();
  for (const auto& p : s.chain.joints) joints.push_back(to_json(p));
  Json report = Json::array();
  for (const auto& c : s.constraint_report) report.push_back(to_json(c));
  return {{"joints", joints},
          {"iterations", s.iterations_used},
          {"residual", s.residual},
          {"converged", s.converged},
          {"constraints", report}};
}

Json to_json(const ROI& roi) {
  return {{"origin", to_json(roi.origin)},
          {"u", to_json(roi.u)},
          {"normal", to_json(roi.normal)},
          {"width", roi.width},
          {"height", roi.height}};
}

ROI roi_from_json(const Json& j) {
  ROI roi;
  try {
    roi.origin = vec3_from_json(j.at("origin"), "roi.origin");
    roi.u = vec3_from_json(j.at("u"), "roi.u");
    roi.normal = vec3_from_json(j.at("normal"), "roi.normal");
    roi.width = j.at("width").get<double>();
    roi.height = j.at("height").get<double>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("roi: ") + e.what());
  }
  roi.validate();
  return roi;
}

Json to_json(const MetricsReport& r) {
  Json frames = Json::array();
  for (const auto& f : r.frames)
    frames.push_back({{"human_angle", f.human_angle},
                      {"robot_angle", f.robot_angle},
                      {"accurate", f.accurate},
                      {"gated", f.gated},
                      {"po", f.po}});
  return {{"pacc", r.pacc},
          {"po", r.po},
          {"frames_evaluated", r.frames_evaluated},
          {"frames_gated", r.frames_gated},
          {"frames", frames}};
}

}  // namespace pose_ik
