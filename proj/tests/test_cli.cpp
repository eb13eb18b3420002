#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "lcea/cli.hpp"

using namespace lcea;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "lcea");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    root_ = fs::temp_directory_path() / (std::string("lcea-cli-") + info->name());
    fs::remove_all(root_);
    fs::create_directories(root_);
    results_ = (root_ / "results").string();
  }
  void TearDown() override { fs::remove_all(root_); }

  std::string write_config(const std::string& name, const std::string& text) {
    const auto path = root_ / name;
    write_file(path, text);
    return path.string();
  }

  fs::path root_;
  std::string results_;
};

const char* const small_config =
    "n = 30\nconstraint.kind = cardinality\nconstraint.B = 20\nmu = 2\nbudget = 100000\n"
    "repetitions = 5\nseed = 11\nlog_cadence = 10\nlo_targets = 10,20\n";

}  // namespace

TEST_F(CliTest, HelpAndUsageErrors) {
  EXPECT_EQ(invoke({"--help"}).code, 0);
  EXPECT_EQ(invoke({}).code, 1);
  EXPECT_EQ(invoke({"frobnicate"}).code, 1);
  EXPECT_EQ(invoke({"verify-lemma", "9.9"}).code, 1);
  EXPECT_EQ(invoke({"scaling-study", "--b-rule", "n/3"}).code, 1);
}

TEST_F(CliTest, MissingConfigFailsWithoutWriting) {
  const auto r = invoke({"--results", results_, "run", (root_ / "missing.cfg").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.err.empty());
  EXPECT_FALSE(fs::exists(results_));
}

TEST_F(CliTest, InvalidConfigNamesKey) {
  const auto path = write_config("bad.cfg",
                                 "n = 100\nconstraint.kind = normal\nconstraint.B = 85\nbudget = 10\n"
                                 "repetitions = 1\nseed = 1\n");
  const auto r = invoke({"--results", results_, "run", path});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("sigma"), std::string::npos);
  EXPECT_FALSE(fs::exists(results_));
}

TEST_F(CliTest, RunIsReproducibleAndPlotDataRegenerates) {
  const auto path = write_config("small.cfg", small_config);
  ASSERT_EQ(invoke({"--results", results_, "--workers", "2", "run", path}).code, 0);
  const auto dir = fs::path(results_) / config_hash_hex(parse_config(small_config));
  ASSERT_TRUE(fs::exists(dir / "config.cfg"));
  ASSERT_TRUE(fs::exists(dir / "traces" / "run-0004.csv"));
  const auto summary = read_file(dir / "summary.csv");
  const auto quantiles = read_file(dir / "quantiles.csv");
  const auto trace = read_file(dir / "traces" / "run-0000.csv");
  EXPECT_EQ(summary.substr(0, summary.find('\n')),
            "run_id,iterations,hitting_time_optimum,budget_exhausted,first_hit_10,first_hit_20");
  EXPECT_EQ(trace.substr(0, trace.find('\n')), std::string(trace_csv_header));
  EXPECT_EQ(quantiles.substr(0, quantiles.find('\n')), std::string(quantile_csv_header));

  ASSERT_EQ(invoke({"--results", results_, "--workers", "1", "run", path}).code, 0);
  EXPECT_EQ(read_file(dir / "summary.csv"), summary);
  EXPECT_EQ(read_file(dir / "quantiles.csv"), quantiles);
  EXPECT_EQ(read_file(dir / "traces" / "run-0000.csv"), trace);
  EXPECT_FALSE(fs::exists(dir.string() + ".partial"));

  fs::remove(dir / "quantiles.csv");
  ASSERT_EQ(invoke({"emit-plot", dir.string()}).code, 0);
  EXPECT_EQ(read_file(dir / "quantiles.csv"), quantiles);
  EXPECT_TRUE(ResultStore::revalidate(dir, 1));

  EXPECT_EQ(invoke({"emit-plot", (root_ / "nowhere").string()}).code, 1);
}

TEST_F(CliTest, ReplicateFigure) {
  EXPECT_EQ(invoke({"--results", results_, "replicate-figure", "9"}).code, 1);
  const auto r = invoke({"--results", results_, "replicate-figure", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto fig = fs::path(results_) / "figure-1";
  EXPECT_TRUE(fs::exists(fig / "trace.csv"));
  EXPECT_TRUE(fs::exists(fig / "quantiles_mu1.csv"));
  EXPECT_NE(read_file(fig / "summary.txt").find("lo_drops"), std::string::npos);
}

TEST_F(CliTest, ScalingStudy) {
  const auto r = invoke({"--results", results_, "scaling-study", "--n", "10,20", "--b-rule", "n-1", "--reps", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = read_file(fs::path(results_) / "scaling-n-1-penalized.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,B,median_T,mean_T,predicted,ratio,exhausted");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_EQ(invoke({"--results", results_, "scaling-study", "--n", "2"}).code, 1);
}

TEST_F(CliTest, VerificationCommands) {
  const auto lemma = invoke({"verify-lemma", "5.1"});
  EXPECT_EQ(lemma.code, 0) << lemma.out;
  EXPECT_NE(lemma.out.find("k=20"), std::string::npos);
  for (const char* which : {"3.1", "3.2"}) {
    const auto r = invoke({"verify-lemma", which, "--runs", "10", "--iterations", "2000"});
    EXPECT_NE(r.code, 1) << r.err;
    EXPECT_TRUE(r.out.find("PASS") != std::string::npos || r.out.find("FAIL") != std::string::npos);
  }
  for (const char* which : {"upper", "lower"}) {
    const auto r = invoke({"verify-drift", which, "--runs", "10", "--iterations", "3000"});
    EXPECT_NE(r.code, 1) << r.err;
    EXPECT_NE(r.out.find("transitions"), std::string::npos);
  }
  const auto lex = invoke({"verify-drift", "lex", "--runs", "5"});
  EXPECT_EQ(lex.code, 0) << lex.out;
}

TEST(Csv, TraceShapes) {
  Trace empty;
  EXPECT_EQ(trace_csv(0, empty), std::string(trace_csv_header) + "\n");
  Trace one;
  one.rows = {{0, 1, std::nullopt, 3, 1}};
  EXPECT_EQ(trace_csv(0, one), std::string(trace_csv_header) + "\n0,0,1,,3,1\n");
  Trace two;
  two.rows = {{5, 4, 2, 6, 3}};
  const auto text = trace_csv(7, two);
  EXPECT_EQ(text, std::string(trace_csv_header) + "\n7,5,4,2,6,3\n");
  const auto parsed = parse_trace_csv(text);
  ASSERT_EQ(parsed.size(), 1u);
  EXPECT_EQ(parsed[0].run_id, 7u);
  EXPECT_EQ(parsed[0].row, two.rows[0]);
}

TEST(Csv, QuantileLayout) {
  std::vector<QuantileSeries> s{{"best_lo", {{0, 1, 2, 3}, {100, 4, 5, 6}}},
                                {"second_worst_lo", {{0, 0, 1, 1}, {100, 2, 3, 3}}}};
  EXPECT_EQ(quantile_csv(s), std::string(quantile_csv_header) +
                                 "\n0,best_lo,1,2,3\n0,second_worst_lo,0,1,1\n100,best_lo,4,5,6\n"
                                 "100,second_worst_lo,2,3,3\n");
}

TEST(Csv, WriteFileFailsOnBadPath) {
  EXPECT_THROW(write_file("/nonexistent-dir/x/y.csv", "a"), std::runtime_error);
}
