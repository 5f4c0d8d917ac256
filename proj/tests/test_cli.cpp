#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "atten/report.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("atten_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(ATTEN_CLI) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

}  // namespace

TEST(Cli, PosteriorPrintsMean) {
  const auto dir = scratch_dir("posterior");
  ASSERT_EQ(run("posterior --prior 'normal(0,1)' --noise 'logistic(0,1)' --signal 2", dir / "log"), 0);
  EXPECT_NE(atten::read_text_file((dir / "log").string()).find("posterior_mean: 0.5555730886544"), std::string::npos);
}

TEST(Cli, SweepWritesCsv) {
  const auto dir = scratch_dir("sweep");
  const auto csv = dir / "sweep.csv";
  ASSERT_EQ(run("sweep --prior 'normal(0,1)' --noise 'normal(0,1)' --grid 'linear(-2,2,5)' --out " + csv.string(),
                dir / "log"),
            0);
  const auto t = atten::parse_csv(atten::read_text_file(csv.string()));
  EXPECT_EQ(t.columns, (std::vector<std::string>{"s", "posterior_mean", "Z", "status"}));
  ASSERT_EQ(t.rows.size(), 5u);
  EXPECT_DOUBLE_EQ(std::get<double>(t.rows[4][1]), 1.0);
}

TEST(Cli, FormatBothWritesSvg) {
  const auto dir = scratch_dir("both");
  ASSERT_EQ(run("--format both --out " + (dir / "s.csv").string() +
                    " sweep --prior 'logistic(0,1)' --noise 'normal(0,1)'",
                dir / "log"),
            0);
  EXPECT_TRUE(fs::exists(dir / "s.csv"));
  EXPECT_TRUE(fs::exists(dir / "s.svg"));
}

TEST(Cli, CompareConfidenceHeader) {
  const auto dir = scratch_dir("compare");
  const auto csv = dir / "cc.csv";
  ASSERT_EQ(run("compare-confidence --prior 'normal(0,1)' --believed-a 'normal(0,0.5)' --believed-b 'normal(0,1)' "
                "--objective 'normal(0,1)' --states 'linear(0,3,4)' --out " + csv.string(),
                dir / "log"),
            0);
  EXPECT_EQ(first_line(atten::read_text_file(csv.string())).substr(0, 2), "x,");
}

TEST(Cli, CheckPrecisionClassifies) {
  const auto dir = scratch_dir("check");
  ASSERT_EQ(run("check-precision --a 'normal(0,1.5)' --b 'normal(0,1)'", dir / "log"), 0);
  EXPECT_NE(atten::read_text_file((dir / "log").string()).find("relation: less-precise"), std::string::npos);
}

TEST(Cli, ConfigErrorsExitTwo) {
  const auto dir = scratch_dir("config");
  atten::write_text_file((dir / "empty.cfg").string(), "");
  EXPECT_EQ(run("--config " + (dir / "empty.cfg").string() + " sweep --prior a --noise b", dir / "log"), 2);
  const std::string log = atten::read_text_file((dir / "log").string());
  EXPECT_NE(log.find("[densities]"), std::string::npos);
  EXPECT_NE(log.find("[experiments]"), std::string::npos);
  EXPECT_EQ(run("posterior --prior 'normal(0,-1)' --noise 'normal(0,1)' --signal 0", dir / "log"), 2);
  EXPECT_EQ(run("verify --suite nonsense", dir / "log"), 2);
  EXPECT_EQ(run("--format pdf sweep --prior 'normal(0,1)' --noise 'normal(0,1)'", dir / "log"), 2);
}

TEST(Cli, NumericalFailureExitsThree) {
  const auto dir = scratch_dir("numeric");
  EXPECT_EQ(run("posterior --prior 'normal(0,0.01)' --noise 'normal(0,0.01)' --signal 1e6", dir / "log"), 3);
  EXPECT_EQ(run("counterexample --eps 'normal(0,1)' --eps-tilde 'normal(0,2)'", dir / "log"), 3);
}

TEST(Cli, PreconditionFailureExitsOne) {
  const auto dir = scratch_dir("precondition");
  EXPECT_EQ(run("compare-confidence --prior 'normal(0,1)' --believed-a 'normal(0,1)' --believed-b 'laplace(0,1)' "
                "--objective 'normal(0,1)'",
                dir / "log"),
            1);
}

TEST(Cli, VerifyWritesReports) {
  const auto dir = scratch_dir("verify");
  ASSERT_EQ(run("verify --suite ratio --out " + (dir / "out").string(), dir / "log"), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "summary.csv"));
  const auto summary = atten::parse_csv(atten::read_text_file((dir / "out" / "summary.csv").string()));
  EXPECT_EQ(summary.rows.size(), 4u);
  for (const auto& row : summary.rows) {
    EXPECT_TRUE(fs::exists(dir / "out" / (std::get<std::string>(row[0]) + ".csv")));
    EXPECT_EQ(std::get<std::string>(row[1]), "pass");
  }
}

TEST(Cli, PlotFromConfig) {
  const auto dir = scratch_dir("plot");
  ASSERT_EQ(run("--config " + std::string(ATTEN_SOURCE_DIR) + "/configs/figure1.cfg --out " + dir.string() + " plot",
                dir / "log"),
            0);
  EXPECT_TRUE(fs::exists(dir / "densities.svg"));
  EXPECT_TRUE(fs::exists(dir / "attenuation-figure1.svg"));
}
