#include "pose_ik/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

namespace pose_ik {

bool operator==(const ReportRow& a, const ReportRow& b) {
  return std::tie(a.robot, a.task, a.trajectory, a.method, a.eta, a.pacc, a.po, a.human_po, a.mean_residual,
                  a.convergence_rate, a.mean_iterations, a.frames, a.frames_gated, a.ok, a.failure) ==
         std::tie(b.robot, b.task, b.trajectory, b.method, b.eta, b.pacc, b.po, b.human_po, b.mean_residual,
                  b.convergence_rate, b.mean_iterations, b.frames, b.frames_gated, b.ok, b.failure);
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error("cannot format number");
  return std::string(buf, end);
}

ROI TaskRoi::for_robot(const RobotDefinition& def) const {
  ROI capture = roi;
  if (size_from_reach) capture.width = capture.height = max_reach(def) / def.transform.scale;
  return capture.transformed(def.transform);
}

// ---------------------------------------------------------------- config

void ExperimentConfig::validate() const {
  if (methods.empty()) throw ConfigError("config: at least one method is required");
  if (robots.empty()) throw ConfigError("config: at least one robot is required");
  const bool has_synth = synth && !synth->tasks.empty() && synth->per_task > 0;
  if (trajectory_paths.empty() && !has_synth) throw ConfigError("config: at least one input trajectory is required");
  if (synth && synth->n_frames < 2) throw ConfigError("config: synth.n_frames must be >= 2");
  for (int e : etas)
    if (e < 1 || e > 3) throw ConfigError("config: etas must be within {1, 2, 3}");
  const bool has_pics = std::find(methods.begin(), methods.end(), Method::Pics) != methods.end();
  if (has_pics && etas.empty()) throw ConfigError("config: PICS requires at least one eta");
  if (!(delta > 0.0)) throw ConfigError("config: delta must be > 0");
  if (!(smoothing_alpha > 0.0 && smoothing_alpha <= 1.0)) throw ConfigError("config: smoothing_alpha must be in (0, 1]");
  solver.validate();
  for (const auto& r : robots) r.validate();
  for (const auto& [task, roi] : rois) roi.roi.validate();
}

ExperimentConfig experiment_config_from_json(const Json& j, const std::filesystem::path& base_dir) {
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  ExperimentConfig cfg;
  try {
    if (j.contains("robots"))
      for (const auto& r : j.at("robots"))
        cfg.robots.push_back(r.is_string() ? load_robot(resolve(r.get<std::string>())) : robot_from_json(r));
    if (j.contains("trajectories"))
      for (const auto& t : j.at("trajectories")) cfg.trajectory_paths.push_back(resolve(t.get<std::string>()));
    if (j.contains("synth")) {
      const auto& s = j.at("synth");
      SynthSpec spec;
      for (const auto& t : s.at("tasks")) spec.tasks.push_back(parse_task_label(t.get<std::string>()));
      spec.per_task = s.value("per_task", spec.per_task);
      spec.n_frames = s.value("n_frames", spec.n_frames);
      cfg.synth = spec;
    }
    if (j.contains("methods"))
      for (const auto& m : j.at("methods")) cfg.methods.push_back(parse_method(m.get<std::string>()));
    if (j.contains("etas")) cfg.etas = j.at("etas").get<std::vector<int>>();
    cfg.delta = j.value("delta", cfg.delta);
    cfg.smoothing_alpha = j.value("smoothing_alpha", cfg.smoothing_alpha);
    if (j.contains("solver")) {
      const auto& s = j.at("solver");
      cfg.solver.max_iterations = s.value("max_iterations", cfg.solver.max_iterations);
      cfg.solver.position_tolerance = s.value("position_tolerance", cfg.solver.position_tolerance);
    }
    if (j.contains("rois")) {
      for (const auto& [name, spec] : j.at("rois").items()) {
        TaskRoi tr;
        Json roi_json = spec;
        if (spec.contains("size") && spec.at("size") == "max_reach") {
          tr.size_from_reach = true;
          roi_json["width"] = 1.0;
          roi_json["height"] = 1.0;
        }
        tr.roi = roi_from_json(roi_json);
        cfg.rois[parse_task_label(name)] = tr;
      }
    }
    if (j.contains("output_dir")) cfg.output_dir = resolve(j.at("output_dir").get<std::string>());
    cfg.seed = j.value("seed", cfg.seed);
    cfg.threads = j.value("threads", cfg.threads);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return experiment_config_from_json(read_json_file(path), path.parent_path());
}

// ---------------------------------------------------------------- running

namespace {

struct Input {
  std::string id;
  SkeletonTrajectory traj;
};

struct Level {
  Method method;
  std::optional<int> eta;
};

std::vector<Level> levels_of(const ExperimentConfig& cfg) {
  std::vector<Level> out;
  auto has = [&](Method m) { return std::find(cfg.methods.begin(), cfg.methods.end(), m) != cfg.methods.end(); };
  if (has(Method::Fabrik)) out.push_back({Method::Fabrik, std::nullopt});
  if (has(Method::Pic)) out.push_back({Method::Pic, 0});
  if (has(Method::Pics)) {
    std::vector<int> etas = cfg.etas;
    std::sort(etas.begin(), etas.end());
    etas.erase(std::unique(etas.begin(), etas.end()), etas.end());
    for (int e : etas) out.push_back({Method::Pics, e});
  }
  return out;
}

std::vector<Input> gather_inputs(const ExperimentConfig& cfg) {
  std::vector<Input> inputs;
  for (const auto& p : cfg.trajectory_paths) inputs.push_back({p.stem().string(), load_trajectory(p)});
  if (cfg.synth) {
    for (auto task : cfg.synth->tasks) {
      for (int k = 0; k < cfg.synth->per_task; ++k) {
        char id[64];
        std::snprintf(id, sizeof id, "%s-%02d", std::string(to_string(task)).c_str(), k);
        const std::uint64_t seed = cfg.seed * 1000003ULL + static_cast<std::uint64_t>(k);
        inputs.push_back({id, synth_demo(task, cfg.synth->n_frames, seed)});
      }
    }
  }
  return inputs;
}

double mean_of(const std::vector<Solution>& sols, double (*field)(const Solution&)) {
  double s = 0.0;
  for (const auto& x : sols) s += field(x);
  return s / static_cast<double>(sols.size());
}

std::vector<ReportRow> run_unit(const ExperimentConfig& cfg, const RobotDefinition& def, const Input& input,
                                const std::vector<Level>& levels) {
  std::vector<ReportRow> rows;
  for (const auto& level : levels) {
    ReportRow row;
    row.robot = def.name;
    row.task = std::string(to_string(input.traj.task));
    row.trajectory = input.id;
    row.method = level.method;
    row.eta = level.eta;
    row.frames = static_cast<int>(input.traj.frames.size());
    rows.push_back(row);
  }
  try {
    const auto robot_traj = to_robot_frame(exponential_smooth(input.traj, cfg.smoothing_alpha), def.transform);
    std::vector<PoseConstraintSet> constraints;
    constraints.reserve(robot_traj.frames.size());
    for (const auto& f : robot_traj.frames)
      constraints.push_back(map_to_robot(extract_human_pose(f.shoulder, f.elbow, f.wrist), def));

    std::optional<ROI> roi;
    if (auto it = cfg.rois.find(input.traj.task); it != cfg.rois.end()) roi = it->second.for_robot(def);
    std::optional<double> human_po;
    if (roi) human_po = human_task_po(robot_traj, *roi);

    for (std::size_t li = 0; li < levels.size(); ++li) {
      auto& row = rows[li];
      try {
        SolverConfig sc = cfg.solver;
        sc.method = levels[li].method;
        if (levels[li].method == Method::Pics) sc.eta = Softening(*levels[li].eta);
        const auto t0 = std::chrono::steady_clock::now();
        const auto sols = solve_trajectory(def, robot_traj, constraints, sc);
        const auto t1 = std::chrono::steady_clock::now();
        row.wall_ms_per_frame =
            std::chrono::duration<double, std::milli>(t1 - t0).count() / static_cast<double>(sols.size());
        const auto m = evaluate(def, robot_traj, sols, cfg.delta, roi ? &*roi : nullptr);
        row.pacc = m.pacc;
        if (roi) row.po = m.po;
        row.human_po = human_po;
        row.frames_gated = m.frames_gated;
        row.mean_residual = mean_of(sols, [](const Solution& s) { return s.residual; });
        row.convergence_rate = mean_of(sols, [](const Solution& s) { return s.converged ? 1.0 : 0.0; });
        row.mean_iterations = mean_of(sols, [](const Solution& s) { return double(s.iterations_used); });
      } catch (const Error& e) {
        row.ok = false;
        row.failure = e.what();
      }
    }
  } catch (const Error& e) {
    for (auto& row : rows) {
      row.ok = false;
      row.failure = e.what();
    }
  }
  return rows;
}

}  // namespace

bool ExperimentReport::all_failed() const {
  return std::none_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.ok; });
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto inputs = gather_inputs(cfg);
  const auto levels = levels_of(cfg);

  const std::size_t units = cfg.robots.size() * inputs.size();
  std::vector<std::vector<ReportRow>> results(units);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t u = next++; u < units; u = next++)
      results[u] = run_unit(cfg, cfg.robots[u / inputs.size()], inputs[u % inputs.size()], levels);
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_threads = std::min<std::size_t>(units, cfg.threads > 0 ? cfg.threads : hw);
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
  }

  // Results are indexed by unit, so the row order is independent of scheduling.
  ExperimentReport report;
  for (auto& r : results) report.rows.insert(report.rows.end(), r.begin(), r.end());
  aggregate(report);
  return report;
}

void aggregate(ExperimentReport& report) {
  struct Acc {
    AggregateRow row;
    double pacc_sum = 0.0, po_sum = 0.0;
    int po_n = 0;
  };
  auto build = [&](bool per_cell) {
    std::vector<Acc> groups;
    for (const auto& r : report.rows) {
      if (!r.ok) continue;
      const std::string robot = per_cell ? r.robot : std::string();
      const std::string task = per_cell ? r.task : std::string();
      auto it = std::find_if(groups.begin(), groups.end(), [&](const Acc& a) {
        return a.row.robot == robot && a.row.task == task && a.row.method == r.method && a.row.eta == r.eta;
      });
      if (it == groups.end()) {
        Acc a;
        a.row.robot = robot;
        a.row.task = task;
        a.row.method = r.method;
        a.row.eta = r.eta;
        groups.push_back(a);
        it = groups.end() - 1;
      }
      it->pacc_sum += r.pacc;
      ++it->row.rows;
      if (r.po) {
        it->po_sum += *r.po;
        ++it->po_n;
      }
    }
    std::vector<AggregateRow> out;
    for (auto& a : groups) {
      a.row.pacc = a.pacc_sum / a.row.rows;
      if (a.po_n > 0) a.row.po = a.po_sum / a.po_n;
      out.push_back(a.row);
    }
    return out;
  };
  report.cells = build(true);
  report.method_means = build(false);
  std::stable_sort(report.method_means.begin(), report.method_means.end(), [](const auto& a, const auto& b) {
    return std::pair(a.method, a.eta.value_or(-1)) < std::pair(b.method, b.eta.value_or(-1));
  });
}

// ---------------------------------------------------------------- output

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }
std::string opt(const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Json opt_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }
Json opt_json(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }

template <class T>
std::optional<T> opt_from(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

Json to_json(const AggregateRow& a) {
  return {{"robot", a.robot},   {"task", a.task},       {"method", std::string(to_string(a.method))},
          {"eta", opt_json(a.eta)}, {"pacc", a.pacc}, {"po", opt_json(a.po)},
          {"rows", a.rows}};
}

AggregateRow aggregate_from_json(const Json& j) {
  AggregateRow a;
  a.robot = j.at("robot").get<std::string>();
  a.task = j.at("task").get<std::string>();
  a.method = parse_method(j.at("method").get<std::string>());
  a.eta = opt_from<int>(j, "eta");
  a.pacc = j.at("pacc").get<double>();
  a.po = opt_from<double>(j, "po");
  a.rows = j.at("rows").get<int>();
  return a;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace

std::string report_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "robot,task,trajectory,method,eta,pacc,po,human_po,mean_residual,convergence_rate,mean_iterations,"
        "frames,frames_gated,status,failure\n";
  for (const auto& r : report.rows) {
    os << csv_escape(r.robot) << ',' << csv_escape(r.task) << ',' << csv_escape(r.trajectory) << ','
       << to_string(r.method) << ',' << opt(r.eta) << ',' << format_double(r.pacc) << ',' << opt(r.po) << ','
       << opt(r.human_po) << ',' << format_double(r.mean_residual) << ',' << format_double(r.convergence_rate)
       << ',' << format_double(r.mean_iterations) << ',' << r.frames << ',' << r.frames_gated << ','
       << (r.ok ? "ok" : "failed") << ',' << csv_escape(r.failure) << '\n';
  }
  return os.str();
}

Json report_json(const ExperimentReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows)
    rows.push_back({{"robot", r.robot},
                    {"task", r.task},
                    {"trajectory", r.trajectory},
                    {"method", std::string(to_string(r.method))},
                    {"eta", opt_json(r.eta)},
                    {"pacc", r.pacc},
                    {"po", opt_json(r.po)},
                    {"human_po", opt_json(r.human_po)},
                    {"mean_residual", r.mean_residual},
                    {"convergence_rate", r.convergence_rate},
                    {"mean_iterations", r.mean_iterations},
                    {"frames", r.frames},
                    {"frames_gated", r.frames_gated},
                    {"status", r.ok ? "ok" : "failed"},
                    {"failure", r.failure}});
  Json cells = Json::array(), means = Json::array();
  for (const auto& c : report.cells) cells.push_back(to_json(c));
  for (const auto& m : report.method_means) means.push_back(to_json(m));
  return {{"rows", rows}, {"cells", cells}, {"method_means", means}};
}

ExperimentReport report_from_json(const Json& j) {
  ExperimentReport rep;
  try {
    for (const auto& r : j.at("rows")) {
      ReportRow row;
      row.robot = r.at("robot").get<std::string>();
      row.task = r.at("task").get<std::string>();
      row.trajectory = r.at("trajectory").get<std::string>();
      row.method = parse_method(r.at("method").get<std::string>());
      row.eta = opt_from<int>(r, "eta");
      row.pacc = r.at("pacc").get<double>();
      row.po = opt_from<double>(r, "po");
      row.human_po = opt_from<double>(r, "human_po");
      row.mean_residual = r.at("mean_residual").get<double>();
      row.convergence_rate = r.at("convergence_rate").get<double>();
      row.mean_iterations = r.at("mean_iterations").get<double>();
      row.frames = r.at("frames").get<int>();
      row.frames_gated = r.at("frames_gated").get<int>();
      row.ok = r.at("status").get<std::string>() == "ok";
      row.failure = r.at("failure").get<std::string>();
      rep.rows.push_back(row);
    }
    for (const auto& c : j.at("cells")) rep.cells.push_back(aggregate_from_json(c));
    for (const auto& m : j.at("method_means")) rep.method_means.push_back(aggregate_from_json(m));
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("report: ") + e.what());
  }
  return rep;
}

std::vector<std::filesystem::path> emit_report(const ExperimentReport& report, const std::filesystem::path& dir,
                                               const std::vector<ReportFormat>& formats) {
  if (report.rows.empty()) throw Error("cannot emit an empty report");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  for (auto f : formats) {
    if (f == ReportFormat::Csv) {
      written.push_back(dir / "report.csv");
      write_file(written.back(), report_csv(report));
    } else {
      written.push_back(dir / "report.json");
      write_file(written.back(), report_json(report).dump(2) + "\n");
    }
  }
  std::ostringstream timing;
  timing << "robot,task,trajectory,method,eta,wall_ms_per_frame\n";
  for (const auto& r : report.rows)
    timing << csv_escape(r.robot) << ',' << csv_escape(r.task) << ',' << csv_escape(r.trajectory) << ','
           << to_string(r.method) << ',' << opt(r.eta) << ',' << format_double(r.wall_ms_per_frame) << '\n';
  written.push_back(dir / "timing.csv");
  write_file(written.back(), timing.str());
  return written;
}

PlotSeries plot_series(const ExperimentReport& report, const std::string& metric) {
  if (metric != "pacc" && metric != "po") throw Error("unknown metric '" + metric + "'");
  PlotSeries series;
  series.metric = metric;
  auto point = [&](Method method, std::optional<int> eta, std::string label) {
    std::vector<double> values;
    for (const auto& r : report.rows) {
      if (!r.ok) continue;
      const bool match = method == Method::Fabrik ? r.method == Method::Fabrik
                                                  : (r.method != Method::Fabrik && r.eta == eta);
      if (!match) continue;
      if (metric == "pacc") {
        values.push_back(r.pacc);
      } else if (r.po) {
        values.push_back(*r.po);
      }
    }
    SeriesPoint p;
    p.label = std::move(label);
    p.method = method;
    p.eta = eta;
    p.n = static_cast<int>(values.size());
    if (!values.empty()) {
      double sum = 0.0;
      for (double v : values) sum += v;
      p.mean = sum / p.n;
      double sq = 0.0;
      for (double v : values) sq += (v - p.mean) * (v - p.mean);
      p.stddev = std::sqrt(sq / p.n);
    }
    return p;
  };
  auto fabrik = point(Method::Fabrik, std::nullopt, "FABRIK");
  if (fabrik.n > 0) series.points.push_back(fabrik);
  for (int eta = 0; eta <= 3; ++eta) {
    auto p = point(eta == 0 ? Method::Pic : Method::Pics, eta, "eta=" + std::to_string(eta));
    if (p.n > 0) {
      series.points.push_back(p);
    } else {
      series.missing_eta.push_back(eta);
    }
  }
  return series;
}

Json to_json(const PlotSeries& s) {
  Json points = Json::array();
  for (const auto& p : s.points)
    points.push_back({{"label", p.label},
                      {"method", std::string(to_string(p.method))},
                      {"eta", opt_json(p.eta)},
                      {"mean", p.mean},
                      {"std", p.stddev},
                      {"n", p.n}});
  return {{"metric", s.metric},
          {"complete", s.complete()},
          {"missing_eta", s.missing_eta},
          {"points", points}};
}

std::vector<std::filesystem::path> emit_plot_data(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  for (const std::string metric : {"pacc", "po"}) {
    written.push_back(dir / (metric + "_by_softening.json"));
    write_file(written.back(), to_json(plot_series(report, metric)).dump(2) + "\n");
  }
  return written;
}

}  // namespace pose_ik
