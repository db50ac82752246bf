#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "thinplate/cli/app.hpp"
#include "thinplate/cli/config.hpp"
#include "thinplate/cli/output.hpp"

namespace fs = std::filesystem;
using namespace thinplate::cli;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_args(std::vector<std::string> args) {
  args.insert(args.begin(), "thinplate");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("thinplate_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::vector<std::string> files() const {
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(dir_)) names.push_back(e.path().filename().string());
    return names;
  }

  fs::path dir_;
};

std::vector<double> parse_row(const std::string& line) {
  std::vector<double> v;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
  return v;
}

}  // namespace

TEST(Output, Fmt17RoundTrips) {
  EXPECT_EQ(fmt17(0.1), "0.10000000000000001");
  EXPECT_EQ(fmt17(-0.6), "-0.59999999999999998");
  EXPECT_EQ(fmt17(2.0), "2");
  for (double v : {1.0 / 3.0, 1e-300, 6.02214076e23, -2.5e-7}) EXPECT_EQ(std::stod(fmt17(v)), v);
}

TEST(Output, CsvRejectsWrongWidth) {
  CsvTable t({"a", "b"});
  t.add_row({1.0, 2.5});
  EXPECT_EQ(t.str(), "a,b\n1,2.5\n");
  EXPECT_THROW(t.add_row({1.0}), std::logic_error);
}

TEST(Output, GitBlobHash) {
  EXPECT_EQ(git_blob_sha1("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
  EXPECT_EQ(git_blob_sha1(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST(Config, UnknownKeyRejected) {
  ExperimentConfig c;
  EXPECT_THROW(merge_json_text(c, R"({"mu": 2, "bogus": 1})"), std::invalid_argument);
  EXPECT_THROW(merge_json_text(c, R"({"mu": "two"})"), std::invalid_argument);
  EXPECT_THROW(merge_json_text(c, "{not json"), std::invalid_argument);
}

TEST(Config, MergeOverridesFields) {
  ExperimentConfig c;
  merge_json_text(c, R"({"mu": 2.5, "h_list": [0.5, 0.25], "density": "svk"})");
  EXPECT_EQ(c.mu, 2.5);
  EXPECT_EQ(c.h_list, (std::vector<double>{0.5, 0.25}));
  EXPECT_EQ(c.density, "svk");
  EXPECT_EQ(c.lambda, 1.0);
}

TEST(Config, ValidationPerSubcommand) {
  ExperimentConfig c;
  EXPECT_NO_THROW(validate(c, "reduce"));
  c.h_list = {0.1, 0.2};
  EXPECT_THROW(validate(c, "gamma-sweep"), std::invalid_argument);
  c = {};
  c.density = "membrane-cubic";
  EXPECT_THROW(validate(c, "reduce"), std::invalid_argument);
  EXPECT_NO_THROW(validate(c, "check-assumptions"));
  c = {};
  c.grid = {3, 16, 4};
  EXPECT_THROW(validate(c, "minimize2d"), std::invalid_argument);
  c = {};
  c.pi = -1.0;
  EXPECT_THROW(validate(c, "membrane-envelope"), std::invalid_argument);
}

TEST(Config, SnapshotOmitsOutputDir) {
  ExperimentConfig a, b;
  b.output_dir = "/somewhere/else";
  b.timing = true;
  EXPECT_EQ(to_json(a, "reduce"), to_json(b, "reduce"));
  b.mu = 3.0;
  EXPECT_NE(to_json(a, "reduce"), to_json(b, "reduce"));
}

TEST_F(CliTest, ReduceWritesExpectedRow) {
  const RunResult r = run_args({"--output-dir", dir_.string(), "reduce"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream csv(slurp(dir_ / "reduce.csv"));
  std::string header, row;
  std::getline(csv, header);
  std::getline(csv, row);
  EXPECT_EQ(header, "mu,lambda,pi,q2_11,q2_22,q2_33,q2_12,q2_13,q2_23,L1,L2,L3,kappa,m_pi");
  const auto v = parse_row(row);
  ASSERT_EQ(v.size(), 14u);
  EXPECT_NEAR(v[12], -1.0 / 3.0, 1e-12);
  EXPECT_NEAR(v[13], -0.6, 1e-12);
  EXPECT_TRUE(fs::exists(dir_ / "run.json"));
}

TEST_F(CliTest, MalformedConfigLeavesNoFiles) {
  const fs::path cfg = dir_ / "bad.json";
  std::ofstream(cfg) << "{\"mu\": [1, 2";
  const fs::path out = dir_ / "out";
  const RunResult r = run_args({"--config", cfg.string(), "--output-dir", out.string(), "reduce"});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(fs::exists(out));
}

TEST_F(CliTest, UnknownSubcommandIsInvalidInput) {
  EXPECT_EQ(run_args({"--output-dir", dir_.string(), "frobnicate"}).code, 1);
  EXPECT_EQ(run_args({"--output-dir", dir_.string(), "reduce", "--mu", "-1"}).code, 1);
  EXPECT_TRUE(files().empty());
}

TEST_F(CliTest, ConfigThenFlagPrecedence) {
  const fs::path cfg = dir_ / "c.json";
  std::ofstream(cfg) << R"({"mu": 2.0, "lambda": 3.0})";
  const fs::path out = dir_ / "out";
  ASSERT_EQ(run_args({"--config", cfg.string(), "--output-dir", out.string(), "reduce", "--mu", "4"}).code, 0);
  std::istringstream csv(slurp(out / "reduce.csv"));
  std::string header, row;
  std::getline(csv, header);
  std::getline(csv, row);
  const auto v = parse_row(row);
  EXPECT_EQ(v[0], 4.0);
  EXPECT_EQ(v[1], 3.0);
}

TEST_F(CliTest, EnvironmentSuppliesOutputDir) {
  ::setenv("THINPLATE_OUTPUT_DIR", dir_.string().c_str(), 1);
  const RunResult r = run_args({"reduce"});
  ::unsetenv("THINPLATE_OUTPUT_DIR");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "reduce.csv"));
}

TEST_F(CliTest, MembraneEnvelopeConstant) {
  const RunResult r = run_args({"--output-dir", dir_.string(), "membrane-envelope", "--pi", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream csv(slurp(dir_ / "membrane_summary.csv"));
  std::string header, row;
  std::getline(csv, header);
  std::getline(csv, row);
  EXPECT_EQ(header, "pi,c_pi,deviation,envelope_constant,target");
  const auto v = parse_row(row);
  EXPECT_NEAR(v[1], 2.0, 1e-3);
}

TEST_F(CliTest, EnvelopeFailureIsNumerical) {
  const fs::path out = dir_ / "out";
  const RunResult r = run_args(
      {"--output-dir", out.string(), "membrane-envelope", "--pi", "1", "--xmax", "10", "--tolerance", "1e-12"});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(fs::exists(out / "membrane_summary.csv"));
}

TEST_F(CliTest, RerunsAreByteIdentical) {
  const fs::path a = dir_ / "a", b = dir_ / "b";
  const std::vector<std::string> tail{"minimize2d", "--grid", "8", "8", "--pi", "1"};
  auto args_for = [&](const fs::path& d) {
    std::vector<std::string> v{"--output-dir", d.string()};
    v.insert(v.end(), tail.begin(), tail.end());
    return v;
  };
  ASSERT_EQ(run_args(args_for(a)).code, 0);
  ASSERT_EQ(run_args(args_for(b)).code, 0);
  for (const char* name : {"minimize2d_history.csv", "minimize2d_fields.csv", "run.json"})
    EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
}

TEST_F(CliTest, RunRecordHashesConfig) {
  ASSERT_EQ(run_args({"--output-dir", dir_.string(), "reduce"}).code, 0);
  const std::string record = slurp(dir_ / "run.json");
  EXPECT_NE(record.find(git_blob_sha1(to_json(ExperimentConfig{}, "reduce"))), std::string::npos);
  EXPECT_NE(record.find("\"reduce.csv\""), std::string::npos);
}
