// pose-ik: retarget human arm demonstrations onto robot chains and score them.
//
//   pose-ik run --config <path> [--seed N] [--out DIR]
//   pose-ik synth --task <label> --n 10 --out DIR
//   pose-ik solve --robot <path> --traj <path> --method pic --eta 2
//   pose-ik metrics --human <path> --robot-solution <path> --delta 0.0305

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "pose_ik/harness.hpp"

using namespace pose_ik;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> threads;
};

int cmd_run(const RunArgs& a) {
  auto cfg = load_experiment_config(a.config);
  if (a.seed) cfg.seed = *a.seed;
  if (a.out) cfg.output_dir = *a.out;
  if (a.threads) cfg.threads = *a.threads;
  const auto report = run_experiment(cfg);
  emit_report(report, cfg.output_dir);
  emit_plot_data(report, cfg.output_dir);

  std::printf("%-8s %4s %8s %8s %5s\n", "method", "eta", "pacc", "po", "rows");
  for (const auto& m : report.method_means) {
    std::printf("%-8s %4s %8.3f %8s %5d\n", std::string(to_string(m.method)).c_str(),
                m.eta ? std::to_string(*m.eta).c_str() : "-", m.pacc,
                m.po ? format_double(std::round(*m.po * 1000.0) / 1000.0).c_str() : "-", m.rows);
  }
  int failed = 0;
  for (const auto& r : report.rows)
    if (!r.ok) {
      ++failed;
      std::fprintf(stderr, "row failed: %s %s %s: %s\n", r.robot.c_str(), r.trajectory.c_str(),
                   std::string(to_string(r.method)).c_str(), r.failure.c_str());
    }
  std::printf("%zu rows (%d failed) written to %s\n", report.rows.size(), failed, cfg.output_dir.string().c_str());
  return report.all_failed() ? kExitRuntime : 0;
}

struct SynthArgs {
  std::string task;
  int n = 10;
  int frames = 90;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_synth(const SynthArgs& a) {
  const TaskLabel task = parse_task_label(a.task);
  if (a.n < 1) throw ConfigError("--n must be >= 1");
  std::filesystem::create_directories(a.out);
  for (int k = 0; k < a.n; ++k) {
    // Same seed schedule as the experiment runner's synthetic suite.
    const auto traj = synth_demo(task, a.frames, a.seed * 1000003ULL + static_cast<std::uint64_t>(k));
    char name[96];
    std::snprintf(name, sizeof name, "%s-%02d.jsonl", a.task.c_str(), k);
    save_trajectory(traj, std::filesystem::path(a.out) / name);
  }
  std::printf("wrote %d trajectories to %s\n", a.n, a.out.c_str());
  return 0;
}

struct SolveArgs {
  std::string robot;
  std::string traj;
  std::string method = "pic";
  int eta = 0;
  double alpha = kDefaultSmoothing;
  int max_iterations = 20;
  double tolerance = 1e-3;
};

int cmd_solve(const SolveArgs& a) {
  const auto def = load_robot(a.robot);
  const auto human = load_trajectory(a.traj);
  SolverConfig cfg;
  cfg.method = parse_method(a.method);
  cfg.eta = Softening(a.eta);
  cfg.max_iterations = a.max_iterations;
  cfg.position_tolerance = a.tolerance;
  cfg.validate();

  const auto robot_traj = to_robot_frame(exponential_smooth(human, a.alpha), def.transform);
  std::vector<PoseConstraintSet> constraints;
  for (const auto& f : robot_traj.frames)
    constraints.push_back(map_to_robot(extract_human_pose(f.shoulder, f.elbow, f.wrist), def));
  const auto sols = solve_trajectory(def, robot_traj, constraints, cfg);

  Json header;
  header["robot"] = to_json(def);
  header["method"] = std::string(to_string(cfg.method));
  header["eta"] = cfg.effective_softening() ? Json(cfg.effective_softening()->eta()) : Json(nullptr);
  header["smoothing_alpha"] = a.alpha;
  header["task"] = std::string(to_string(human.task));
  std::cout << header.dump() << '\n';
  for (std::size_t i = 0; i < sols.size(); ++i) {
    Json line;
    line["frame"] = i;
    line["t"] = robot_traj.frames[i].t;
    line["target"] = to_json(robot_traj.frames[i].wrist);
    line["constraint_set"] = to_json(constraints[i]);
    const Json sol = to_json(sols[i]);
    for (const auto& [k, v] : sol.items()) line[k] = v;
    std::cout << line.dump() << '\n';
  }
  return 0;
}

struct MetricsArgs {
  std::string human;
  std::string solution;
  double delta = kDefaultPoseDelta;
  std::optional<std::string> roi;
  bool csv = false;
};

int cmd_metrics(const MetricsArgs& a) {
  std::ifstream in(a.solution);
  if (!in) throw ConfigError("cannot open " + a.solution);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(a.solution + ": empty solution stream");
  Json header;
  try {
    header = Json::parse(line);
  } catch (const Json::parse_error& e) {
    throw ConfigError(a.solution + ":1: " + e.what());
  }
  const auto def = robot_from_json(header.at("robot"));
  const double alpha = header.value("smoothing_alpha", kDefaultSmoothing);

  std::vector<Solution> sols;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = Json::parse(line);
      Solution s;
      s.chain.base = def.base;
      s.chain.link_lengths = def.link_lengths;
      for (const auto& p : j.at("joints")) s.chain.joints.push_back(vec3_from_json(p, "joints"));
      s.iterations_used = j.at("iterations").get<int>();
      s.residual = j.at("residual").get<double>();
      s.converged = j.at("converged").get<bool>();
      sols.push_back(std::move(s));
    } catch (const Json::exception& e) {
      throw ConfigError(a.solution + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }

  const auto human = load_trajectory(a.human);
  const auto robot_traj = to_robot_frame(exponential_smooth(human, alpha), def.transform);
  std::optional<ROI> roi;
  if (a.roi) {
    Json rj = read_json_file(*a.roi);
    TaskRoi tr;
    if (rj.contains("size") && rj.at("size") == "max_reach") {
      tr.size_from_reach = true;
      rj["width"] = 1.0;
      rj["height"] = 1.0;
    }
    tr.roi = roi_from_json(rj);
    roi = tr.for_robot(def);
  }
  const auto report = evaluate(def, robot_traj, sols, a.delta, roi ? &*roi : nullptr);

  if (a.csv) {
    std::cout << "task,robot,method,eta,pacc,po,frames\n"
              << to_string(human.task) << ',' << def.name << ',' << header.value("method", std::string()) << ','
              << (header.contains("eta") && !header.at("eta").is_null() ? std::to_string(header.at("eta").get<int>())
                                                                        : std::string())
              << ',' << format_double(report.pacc) << ',' << (roi ? format_double(report.po) : std::string()) << ','
              << report.frames_evaluated << '\n';
  } else {
    Json out = to_json(report);
    if (!roi) {
      out.erase("po");
      for (auto& f : out["frames"]) f.erase("po");
    }
    out["task"] = std::string(to_string(human.task));
    out["robot"] = def.name;
    out["method"] = header.value("method", std::string());
    out["delta"] = a.delta;
    std::cout << out.dump(2) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pose-imitation IK: octant pose constraints, FABRIK/PIC/PICs solvers and metrics"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment described by a JSON config");
  run_cmd->add_option("--config", run.config, "Experiment config (JSON)")->required();
  run_cmd->add_option("--seed", run.seed, "Override the config seed");
  run_cmd->add_option("--out", run.out, "Override the output directory");
  run_cmd->add_option("--threads", run.threads, "Worker threads (0 = all cores)");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write seeded synthetic demonstrations");
  synth_cmd->add_option("--task", synth.task, "Task label (incision-straight, incision-curve, assembly-1..3)")
      ->required();
  synth_cmd->add_option("--n", synth.n, "Number of demonstrations");
  synth_cmd->add_option("--frames", synth.frames, "Frames per demonstration");
  synth_cmd->add_option("--seed", synth.seed, "Seed");
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one trajectory and print a JSON Lines solution stream");
  solve_cmd->add_option("--robot", solve.robot, "Robot definition (JSON)")->required();
  solve_cmd->add_option("--traj", solve.traj, "Trajectory (JSON Lines)")->required();
  solve_cmd->add_option("--method", solve.method, "fabrik, pic or pics");
  solve_cmd->add_option("--eta", solve.eta, "Softening factor for pics (0-3)");
  solve_cmd->add_option("--alpha", solve.alpha, "Exponential smoothing factor");
  solve_cmd->add_option("--max-iterations", solve.max_iterations, "Iterations per frame");
  solve_cmd->add_option("--tolerance", solve.tolerance, "Position tolerance");

  MetricsArgs metrics;
  auto* metrics_cmd = app.add_subcommand("metrics", "Score a solution stream against the human trajectory");
  metrics_cmd->add_option("--human", metrics.human, "Human trajectory (JSON Lines)")->required();
  metrics_cmd->add_option("--robot-solution", metrics.solution, "Output of `pose-ik solve`")->required();
  metrics_cmd->add_option("--delta", metrics.delta, "Pose accuracy threshold (rad^2)");
  metrics_cmd->add_option("--roi", metrics.roi, "ROI (JSON, capture coordinates) to compute PO");
  metrics_cmd->add_flag("--csv", metrics.csv, "Print a CSV row instead of JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*synth_cmd) return cmd_synth(synth);
    if (*solve_cmd) return cmd_solve(solve);
    if (*metrics_cmd) return cmd_metrics(metrics);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
