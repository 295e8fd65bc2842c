#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pose_ik/chain.hpp"
#include "pose_ik/json_io.hpp"
#include "pose_ik/metrics.hpp"
#include "pose_ik/solver.hpp"
#include "pose_ik/trajectory.hpp"

namespace pose_ik {

/// ROI given in capture coordinates; carried into each robot's frame by its transform.
struct TaskRoi {
  ROI roi;
  /// Width and height become the robot's max reach (in robot units).
  bool size_from_reach = false;

  ROI for_robot(const RobotDefinition& def) const;
};

struct SynthSpec {
  std::vector<TaskLabel> tasks;
  int per_task = 10;
  int n_frames = 90;
};

struct ExperimentConfig {
  std::vector<RobotDefinition> robots;
  std::vector<std::filesystem::path> trajectory_paths;
  std::optional<SynthSpec> synth;
  std::vector<Method> methods;
  /// Softening levels for PICs rows; PIC is always reported as eta = 0.
  std::vector<int> etas;
  double delta = kDefaultPoseDelta;
  std::map<TaskLabel, TaskRoi> rois;
  double smoothing_alpha = kDefaultSmoothing;
  SolverConfig solver;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = hardware concurrency

  void validate() const;
};

/// Parses a JSON config; relative paths resolve against the config's directory.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
ExperimentConfig experiment_config_from_json(const Json& j, const std::filesystem::path& base_dir);

struct ReportRow {
  std::string robot;
  std::string task;
  std::string trajectory;
  Method method = Method::Fabrik;
  std::optional<int> eta;  // empty for FABRIK
  double pacc = 0.0;
  std::optional<double> po;
  std::optional<double> human_po;
  double mean_residual = 0.0;
  double convergence_rate = 0.0;
  double mean_iterations = 0.0;
  int frames = 0;
  int frames_gated = 0;
  bool ok = true;
  std::string failure;
  /// Not part of the byte-stable outputs, and ignored by operator==.
  double wall_ms_per_frame = 0.0;

  friend bool operator==(const ReportRow& a, const ReportRow& b);
};

struct AggregateRow {
  std::string robot;  // empty for method-level means
  std::string task;   // empty for method-level means
  Method method = Method::Fabrik;
  std::optional<int> eta;
  double pacc = 0.0;
  std::optional<double> po;
  int rows = 0;

  friend bool operator==(const AggregateRow&, const AggregateRow&) = default;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
  /// Mean per (robot, task, method, eta): the cells of the result tables.
  std::vector<AggregateRow> cells;
  /// Mean per (method, eta): the "method mean" rows.
  std::vector<AggregateRow> method_means;

  bool all_failed() const;
  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Recomputes cells and method means from the successful rows.
void aggregate(ExperimentReport& report);

std::string report_csv(const ExperimentReport& report);
Json report_json(const ExperimentReport& report);
ExperimentReport report_from_json(const Json& j);

enum class ReportFormat { Csv, Json };
/// Writes report.csv / report.json (byte-stable) and timing.csv (wall clock) into dir.
std::vector<std::filesystem::path> emit_report(const ExperimentReport& report, const std::filesystem::path& dir,
                                               const std::vector<ReportFormat>& formats = {ReportFormat::Csv,
                                                                                           ReportFormat::Json});

struct SeriesPoint {
  std::string label;
  Method method = Method::Fabrik;
  std::optional<int> eta;
  double mean = 0.0;
  double stddev = 0.0;
  int n = 0;
};

struct PlotSeries {
  std::string metric;  // "pacc" or "po"
  std::vector<SeriesPoint> points;
  std::vector<int> missing_eta;
  bool complete() const { return missing_eta.empty(); }
};

/// Mean and population standard deviation per softening level (eta 0..3) plus FABRIK.
PlotSeries plot_series(const ExperimentReport& report, const std::string& metric);
Json to_json(const PlotSeries& s);
/// Writes pacc_by_softening.json and po_by_softening.json.
std::vector<std::filesystem::path> emit_plot_data(const ExperimentReport& report, const std::filesystem::path& dir);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace pose_ik
