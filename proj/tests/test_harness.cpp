#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "pose_ik/harness.hpp"

using namespace pose_ik;

namespace {

Json small_config() {
  return Json::parse(R"({
    "robots": ["robots/baxter.json", "robots/yumi.json"],
    "synth": {"tasks": ["incision-straight", "assembly-2"], "per_task": 2, "n_frames": 30},
    "methods": ["FABRIK", "PIC", "PICS"],
    "etas": [1, 2, 3],
    "rois": {
      "incision-straight": {"origin": [-32.0, 2.0, 153.0], "u": [1, 0, 0], "normal": [0, 0, 1],
                            "width": 20.0, "height": 15.0},
      "assembly-2": {"origin": [-47.0, 10.0, 199.0], "u": [1, 0, 0], "normal": [0, 1, 0], "size": "max_reach"}
    },
    "seed": 3
  })");
}

ExperimentConfig config_from(const Json& j) { return experiment_config_from_json(j, POSE_IK_DATA_DIR); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("pose_ik_harness_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST(ExperimentConfig, ParsesAndResolvesPaths) {
  const auto cfg = config_from(small_config());
  ASSERT_EQ(cfg.robots.size(), 2u);
  EXPECT_EQ(cfg.robots[0].name, "baxter");
  EXPECT_EQ(cfg.methods.size(), 3u);
  EXPECT_EQ(cfg.seed, 3u);
  EXPECT_EQ(cfg.delta, kDefaultPoseDelta);
  EXPECT_EQ(cfg.smoothing_alpha, 0.3);
  EXPECT_TRUE(cfg.rois.at(TaskLabel::Assembly2).size_from_reach);
  EXPECT_FALSE(cfg.rois.at(TaskLabel::IncisionStraight).size_from_reach);
}

TEST(ExperimentConfig, ShippedSuiteLoads) {
  const auto cfg = load_experiment_config(std::string(POSE_IK_DATA_DIR) + "/experiments/desk_suite.json");
  EXPECT_EQ(cfg.robots.size(), 2u);
  ASSERT_TRUE(cfg.synth);
  EXPECT_EQ(cfg.synth->tasks.size(), 5u);
  EXPECT_EQ(cfg.synth->per_task, 10);
  EXPECT_EQ(cfg.rois.size(), 5u);
}

TEST(ExperimentConfig, ValidationErrors) {
  auto j = small_config();
  j["methods"] = Json::array();
  EXPECT_THROW(config_from(j), ConfigError);

  j = small_config();
  j["etas"] = {0};
  EXPECT_THROW(config_from(j), ConfigError);

  j = small_config();
  j.erase("etas");
  EXPECT_THROW(config_from(j), ConfigError);

  j = small_config();
  j.erase("synth");
  EXPECT_THROW(config_from(j), ConfigError);

  j = small_config();
  j["methods"] = {"simplex"};
  EXPECT_THROW(config_from(j), ConfigError);

  j = small_config();
  j["robots"] = {"robots/missing.json"};
  EXPECT_THROW(config_from(j), ConfigError);

  j = small_config();
  j["smoothing_alpha"] = 0.0;
  EXPECT_THROW(config_from(j), ConfigError);

  j = small_config();
  j["rois"]["incision-straight"]["normal"] = {1, 0, 0};
  EXPECT_THROW(config_from(j), ConfigError);
}

TEST(TaskRoi, ReachSizedRoiFollowsRobotUnits) {
  const auto cfg = config_from(small_config());
  for (const auto& def : cfg.robots) {
    const auto roi = cfg.rois.at(TaskLabel::Assembly2).for_robot(def);
    EXPECT_NEAR(roi.width, max_reach(def), 1e-9);
    EXPECT_NEAR(roi.height, max_reach(def), 1e-9);
    EXPECT_NO_THROW(roi.validate());
  }
}

class SmallRun : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    auto cfg = config_from(small_config());
    cfg.threads = 1;
    serial_ = new ExperimentReport(run_experiment(cfg));
    cfg.threads = 4;
    parallel_ = new ExperimentReport(run_experiment(cfg));
  }
  static void TearDownTestSuite() {
    delete serial_;
    delete parallel_;
  }
  static ExperimentReport* serial_;
  static ExperimentReport* parallel_;
};

ExperimentReport* SmallRun::serial_ = nullptr;
ExperimentReport* SmallRun::parallel_ = nullptr;

TEST_F(SmallRun, RowLayout) {
  const auto& rep = *serial_;
  // 2 robots x 4 trajectories x (FABRIK, PIC, PICS 1..3)
  ASSERT_EQ(rep.rows.size(), 40u);
  EXPECT_FALSE(rep.all_failed());
  for (const auto& r : rep.rows) {
    EXPECT_TRUE(r.ok) << r.failure;
    EXPECT_EQ(r.frames, 30);
    EXPECT_TRUE(r.po.has_value());
    EXPECT_GE(r.pacc, 0.0);
    EXPECT_LE(r.pacc, 1.0);
    EXPECT_GT(r.frames_gated, 0);
    EXPECT_EQ(r.method == Method::Fabrik, !r.eta.has_value());
    if (r.method == Method::Pic) EXPECT_EQ(r.eta, 0);
  }
  EXPECT_EQ(rep.rows.front().robot, "baxter");
  EXPECT_EQ(rep.rows.front().trajectory, "incision-straight-00");
  EXPECT_EQ(rep.rows.back().robot, "yumi");
  EXPECT_EQ(rep.rows.back().trajectory, "assembly-2-01");
}

TEST_F(SmallRun, ThreadCountDoesNotChangeResults) {
  EXPECT_EQ(*serial_, *parallel_);
  EXPECT_EQ(report_csv(*serial_), report_csv(*parallel_));
  EXPECT_EQ(report_json(*serial_).dump(), report_json(*parallel_).dump());
}

TEST_F(SmallRun, AggregatesAreMeansOfRows) {
  const auto& rep = *serial_;
  for (const auto& cell : rep.cells) {
    double pacc = 0.0, po = 0.0;
    int n = 0;
    for (const auto& r : rep.rows)
      if (r.robot == cell.robot && r.task == cell.task && r.method == cell.method && r.eta == cell.eta) {
        pacc += r.pacc;
        po += *r.po;
        ++n;
      }
    ASSERT_EQ(n, cell.rows);
    EXPECT_NEAR(cell.pacc, pacc / n, 1e-12);
    EXPECT_NEAR(*cell.po, po / n, 1e-12);
  }
  ASSERT_EQ(rep.method_means.size(), 5u);
  for (const auto& m : rep.method_means) {
    double pacc = 0.0;
    int n = 0;
    for (const auto& r : rep.rows)
      if (r.method == m.method && r.eta == m.eta) {
        pacc += r.pacc;
        ++n;
      }
    EXPECT_EQ(m.rows, n);
    EXPECT_NEAR(m.pacc, pacc / n, 1e-12);
  }
}

TEST_F(SmallRun, FullSofteningMatchesFabrikRows) {
  const auto& rows = serial_->rows;
  for (std::size_t i = 0; i < rows.size(); i += 5) {
    ASSERT_EQ(rows[i].method, Method::Fabrik);
    ASSERT_EQ(rows[i + 4].eta, 3);
    EXPECT_EQ(rows[i].pacc, rows[i + 4].pacc);
    EXPECT_EQ(rows[i].po, rows[i + 4].po);
    EXPECT_EQ(rows[i].mean_residual, rows[i + 4].mean_residual);
  }
}

TEST_F(SmallRun, JsonRoundTrip) {
  const auto back = report_from_json(Json::parse(report_json(*serial_).dump()));
  EXPECT_EQ(back, *serial_);
}

TEST_F(SmallRun, EmitReportIsByteStable) {
  const auto a = scratch("a"), b = scratch("b");
  emit_report(*serial_, a);
  emit_report(*parallel_, b);
  for (const char* f : {"report.csv", "report.json"}) EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  EXPECT_TRUE(std::filesystem::exists(a / "timing.csv"));
  const std::string csv = slurp(a / "report.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "robot,task,trajectory,method,eta,pacc,po,human_po,mean_residual,convergence_rate,mean_iterations,"
            "frames,frames_gated,status,failure");
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
}

TEST_F(SmallRun, PlotSeriesMatchesRows) {
  for (const std::string metric : {"pacc", "po"}) {
    const auto s = plot_series(*serial_, metric);
    EXPECT_TRUE(s.complete());
    ASSERT_EQ(s.points.size(), 5u);
    EXPECT_EQ(s.points[0].label, "FABRIK");
    for (const auto& p : s.points) {
      std::vector<double> v;
      for (const auto& r : serial_->rows)
        if (r.method == p.method && r.eta == p.eta) v.push_back(metric == "pacc" ? r.pacc : *r.po);
      ASSERT_EQ(static_cast<int>(v.size()), p.n);
      double mean = 0.0;
      for (double x : v) mean += x;
      mean /= v.size();
      double var = 0.0;
      for (double x : v) var += (x - mean) * (x - mean);
      EXPECT_NEAR(p.mean, mean, 1e-12);
      EXPECT_NEAR(p.stddev, std::sqrt(var / v.size()), 1e-12);
    }
  }
  EXPECT_THROW(plot_series(*serial_, "speed"), Error);
}

TEST(ReportOutput, HeaderForSingleRowAndEmptyReport) {
  ExperimentReport rep;
  ReportRow row;
  row.robot = "r";
  row.task = "incision-curve";
  row.trajectory = "t,1";
  row.method = Method::Pics;
  row.eta = 2;
  row.pacc = 0.1;
  rep.rows.push_back(row);
  aggregate(rep);
  const std::string csv = report_csv(rep);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
  EXPECT_NE(csv.find("\"t,1\""), std::string::npos);
  EXPECT_EQ(report_from_json(report_json(rep)), rep);
  EXPECT_THROW(emit_report(ExperimentReport{}, scratch("empty")), Error);
}

TEST(PlotSeries, SingleRowAndMissingLevels) {
  ExperimentReport rep;
  ReportRow fabrik;
  fabrik.method = Method::Fabrik;
  fabrik.pacc = 0.25;
  ReportRow pic;
  pic.method = Method::Pic;
  pic.eta = 0;
  pic.pacc = 0.5;
  rep.rows = {fabrik, pic};
  const auto s = plot_series(rep, "pacc");
  EXPECT_FALSE(s.complete());
  EXPECT_EQ(s.missing_eta, (std::vector<int>{1, 2, 3}));
  ASSERT_EQ(s.points.size(), 2u);
  EXPECT_EQ(s.points[1].stddev, 0.0);
  EXPECT_EQ(s.points[1].mean, 0.5);
  const auto j = to_json(s);
  EXPECT_EQ(j.at("complete"), false);
}

TEST(RunExperiment, FailedRowsAreRecorded) {
  auto j = small_config();
  // A ROI far from every wrist: no frame is gated, so every row fails.
  j["rois"]["incision-straight"]["origin"] = {500.0, 500.0, 500.0};
  j["rois"]["assembly-2"]["origin"] = {500.0, 500.0, 500.0};
  j["methods"] = {"PIC"};
  j["synth"]["per_task"] = 1;
  auto cfg = config_from(j);
  const auto rep = run_experiment(cfg);
  ASSERT_FALSE(rep.rows.empty());
  for (const auto& r : rep.rows) {
    EXPECT_FALSE(r.ok);
    EXPECT_EQ(r.failure, "no frames over ROI");
  }
  EXPECT_TRUE(rep.all_failed());
  EXPECT_TRUE(rep.method_means.empty());
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1");
  const double x = 0.030461741978670857;
  EXPECT_EQ(std::stod(format_double(x)), x);
}
