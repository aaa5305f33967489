#include "ucplab/pipeline.hpp"
#include "ucplab/presets.hpp"
#include "ucplab/report.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>

using namespace ucplab;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  EXPECT_TRUE(f.good()) << p;
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::filesystem::path temp_dir(const std::string& tag) {
  auto d = std::filesystem::temp_directory_path() /
           ("ucplab_test_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(d);
  return d;
}

}  // namespace

TEST(Report, GatesDriveOk) {
  Report rep;
  EXPECT_TRUE(rep.ok());  // vacuously
  rep.gate("a", true);
  rep.gate("b", true);
  EXPECT_TRUE(rep.ok());
  rep.gate("c", false);
  EXPECT_FALSE(rep.ok());
}

TEST(Report, MetricsCsvFlattensSorted) {
  Json j;
  j["z"] = 2.5;
  j["a"]["nested"] = true;
  j["a"]["list"] = {1, 2};
  j["name"] = "skipped";  // strings carry no metric value
  std::string csv = metrics_csv(j);
  EXPECT_EQ(csv,
            "metric,value\n"
            "a.list[0],1\n"
            "a.list[1],2\n"
            "a.nested,true\n"
            "z,2.5\n");
}

TEST(Report, WriteReportRoundTrip) {
  namespace fs = std::filesystem;
  fs::path dir = temp_dir("write");

  Report rep;
  rep.summary["alpha"] = 1.5;
  rep.summary["beta"]["gamma"] = 7;
  rep.add_file("data.csv", "x,y\n1,2\n");
  rep.add_file("plots/fig.svg", "<svg/>\n");
  rep.gate("all_good", true);
  write_report(rep, dir.string());

  EXPECT_EQ(slurp(dir / "data.csv"), "x,y\n1,2\n");
  EXPECT_EQ(slurp(dir / "plots" / "fig.svg"), "<svg/>\n");

  Json summary = Json::parse(slurp(dir / "summary.json"));
  EXPECT_DOUBLE_EQ(summary["alpha"].get<double>(), 1.5);
  EXPECT_EQ(summary["beta"]["gamma"].get<int>(), 7);
  EXPECT_TRUE(summary["gates"]["all_good"].get<bool>());
  EXPECT_TRUE(summary["all_gates_passed"].get<bool>());

  std::string metrics = slurp(dir / "metrics.csv");
  EXPECT_NE(metrics.find("alpha,1.5"), std::string::npos);
  EXPECT_NE(metrics.find("gates.all_good,true"), std::string::npos);

  fs::remove_all(dir);
}

// Two runs of the same command must produce identical bytes everywhere:
// summaries, CSVs, plots. This is the cheap canary for hidden nondeterminism
// (thread scheduling, iteration order, uninitialized reads).
TEST(Report, PipelineRunsAreByteIdentical) {
  RunConfig cfg = preset_config("harmonic_m2");
  Report a = run_command("frequency", cfg);
  Report b = run_command("frequency", cfg);

  EXPECT_EQ(a.summary.dump(), b.summary.dump());
  ASSERT_EQ(a.files.size(), b.files.size());
  for (std::size_t i = 0; i < a.files.size(); ++i) {
    EXPECT_EQ(a.files[i].first, b.files[i].first);
    EXPECT_EQ(a.files[i].second, b.files[i].second) << a.files[i].first;
  }
  ASSERT_EQ(a.gates.size(), b.gates.size());
  for (std::size_t i = 0; i < a.gates.size(); ++i) {
    EXPECT_EQ(a.gates[i].first, b.gates[i].first);
    EXPECT_EQ(a.gates[i].second, b.gates[i].second);
  }

  // and the on-disk form matches too
  namespace fs = std::filesystem;
  fs::path d1 = temp_dir("rep1"), d2 = temp_dir("rep2");
  write_report(a, d1.string());
  write_report(b, d2.string());
  for (const auto& e : fs::recursive_directory_iterator(d1)) {
    if (!e.is_regular_file()) continue;
    fs::path rel = fs::relative(e.path(), d1);
    EXPECT_EQ(slurp(e.path()), slurp(d2 / rel)) << rel;
  }
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST(Report, SvgLinePlotShape) {
  SvgSeries s{"H(r)", {0.1, 0.2, 0.4}, {1.0, 4.0, 16.0}};
  std::string svg = svg_line_plot("height", "r", "H", {s}, true, true);
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(svg.find("height"), std::string::npos);
  EXPECT_NE(svg.find("log10 r"), std::string::npos);
  EXPECT_NE(svg.find("H(r)"), std::string::npos);
  EXPECT_EQ(svg.find("nan"), std::string::npos);

  // degenerate input must still produce a well-formed document
  std::string flat = svg_line_plot("flat", "x", "y", {{"c", {1.0}, {2.0}}});
  EXPECT_NE(flat.find("</svg>"), std::string::npos);
  EXPECT_EQ(flat.find("nan"), std::string::npos);
}

TEST(Core, ParallelForDeterministicAndOrdered) {
  const std::size_t n = 10000;
  std::vector<double> out1(n), out2(n);
  parallel_for(n, [&](std::size_t i) { out1[i] = std::sin(0.001 * i); });
  parallel_for(n, [&](std::size_t i) { out2[i] = std::sin(0.001 * i); });
  EXPECT_EQ(out1, out2);
  for (std::size_t i = 0; i < n; ++i) ASSERT_DOUBLE_EQ(out1[i], std::sin(0.001 * i));
}

TEST(Core, ParallelForPropagatesExceptions) {
  std::atomic<int> calls{0};
  EXPECT_THROW(parallel_for(1000,
                            [&](std::size_t i) {
                              calls.fetch_add(1);
                              if (i == 137) throw Error("boom");
                            }),
               Error);
  EXPECT_GT(calls.load(), 0);
}

TEST(Core, ThreadCapRespectsEnvironment) {
  EXPECT_GE(thread_cap(), 1);
  EXPECT_LE(thread_cap(), 64);
}
