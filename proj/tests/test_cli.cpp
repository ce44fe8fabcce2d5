#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <unistd.h>

#include "cli.hpp"
#include "json.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using qgs::testing::data_path;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = qgs::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qgs_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& contents) const {
    const auto path = (dir_ / name).string();
    std::ofstream(path, std::ios::binary) << contents;
    return path;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_F(CliTest, ToCnfWritesDimacsAndMap) {
  const auto out = path("car.dimacs");
  const auto map = path("car.map");
  const auto r = run({"to-cnf", data_path("car.fm"), "-o", out, "--map", map});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto dimacs = slurp(out);
  EXPECT_EQ(dimacs.substr(0, dimacs.find('\n')), "p cnf 10 17");
  const auto lines = slurp(map);
  EXPECT_EQ(std::count(lines.begin(), lines.end(), '\n'), 10);
  EXPECT_EQ(lines.substr(0, 6), "1 car\n");
}

TEST_F(CliTest, ToCnfReportsToStderrWithoutMap) {
  const auto r = run({"to-cnf", data_path("car.fm")});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, 11), "p cnf 10 17");
  EXPECT_NE(r.err.find("variables 10"), std::string::npos);
  EXPECT_NE(r.err.find("clauses 17"), std::string::npos);
  EXPECT_NE(r.err.find("10 keyless_entry"), std::string::npos);
}

TEST_F(CliTest, ToCnfErrors) {
  EXPECT_EQ(run({"to-cnf", file("empty.fm", "")}).code, 2);
  std::string doc = "r\n";
  std::string constraint;
  for (int i = 0; i < 7; ++i) {
    doc += "  o a" + std::to_string(i) + "\n  o b" + std::to_string(i) + "\n";
    constraint += (i ? " | " : "") + std::string("(a") + std::to_string(i) + " & b" + std::to_string(i) + ")";
  }
  EXPECT_EQ(run({"to-cnf", file("blowup.fm", doc + "constraints:\n  " + constraint + "\n")}).code, 3);
  EXPECT_EQ(run({"to-cnf", path("missing.fm")}).code, 1);
}

TEST_F(CliTest, Count) {
  EXPECT_EQ(run({"count", data_path("car_minimal.dimacs")}).out, "18\n");
  EXPECT_EQ(run({"count", data_path("car.fm")}).out, "18\n");
  EXPECT_EQ(run({"count", data_path("unsat.dimacs")}).out, "0\n");
  std::string pairs = "p cnf 40 20\n";
  for (int i = 1; i <= 40; i += 2) pairs += std::to_string(i) + " " + std::to_string(i + 1) + " 0\n";
  EXPECT_EQ(run({"count", file("pairs.dimacs", pairs)}).out, "3486784401\n");
  EXPECT_EQ(run({"count", file("bad.dimacs", "p cnf 2 1\n1 3 0\n")}).code, 2);
}

TEST_F(CliTest, CountTimeout) {
  std::mt19937_64 rng(8);
  const auto hard = file("hard.dimacs", qgs::emit_dimacs(qgs::testing::random_3cnf(rng, 60, 150)));
  EXPECT_EQ(run({"count", hard, "--budget", "10"}).code, 4);
}

TEST_F(CliTest, CircuitMetrics) {
  const auto r = run({"circuit", data_path("car_minimal.dimacs"), "--metrics", "-o", path("c.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("width=19 "), std::string::npos);
  EXPECT_NE(r.err.find(" k=5 "), std::string::npos);
  const auto doc = nlohmann::json::parse(slurp(path("c.json")));
  EXPECT_EQ(doc["num_qubits"], 19);
}

TEST_F(CliTest, CircuitSingleIteration) {
  const auto r = run({"circuit", data_path("car_minimal.dimacs"), "--iterations", "1"});
  ASSERT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  int mcz = 0;
  for (const auto& g : doc["gates"]) mcz += g["g"] == "mcz";
  EXPECT_EQ(mcz, 1);
}

TEST_F(CliTest, CircuitQasm) {
  const auto r = run({"circuit", data_path("car_minimal.dimacs"), "--format", "qasm3", "-k", "2"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("OPENQASM 3.0;", 0), 0u);
}

TEST_F(CliTest, CircuitErrors) {
  EXPECT_EQ(run({"circuit", data_path("unsat.dimacs")}).code, 5);
  EXPECT_EQ(run({"circuit", data_path("car_minimal.dimacs"), "--iterations", "many"}).code, 1);
  EXPECT_EQ(run({"circuit", data_path("car_minimal.dimacs"), "--format", "svg"}).code, 1);
}

TEST_F(CliTest, SampleReport) {
  const auto r = run({"sample", data_path("car_minimal.dimacs"), "--shots", "10000", "--seed", "7", "--backend",
                      "fast", "--reject"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  std::uint64_t valid = 0;
  for (const auto& [key, value] : doc["valid"].items()) valid += value.get<std::uint64_t>();
  EXPECT_NEAR(valid / 10000.0, 0.988, 0.01);
  EXPECT_EQ(doc["rejected"].get<std::uint64_t>(), 10000 - valid);
  EXPECT_EQ(doc["k"], 5);
  EXPECT_EQ(doc["seed"], 7);
}

TEST_F(CliTest, SampleSingleShot) {
  const auto r = run({"sample", data_path("car_minimal.dimacs"), "--shots", "1"});
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["valid"].size() + doc["invalid"].size(), 1u);
}

TEST_F(CliTest, SampleIsByteIdenticalAcrossRunsAndThreads) {
  const std::vector<std::string> base{"sample", data_path("car.fm"), "--shots", "5000", "--seed", "3", "--reject",
                                      "--distinct"};
  const auto a = run(base);
  const auto b = run(base);
  auto threaded = base;
  threaded.insert(threaded.end(), {"--threads", "4"});
  const auto c = run(threaded);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
}

TEST_F(CliTest, SampleHumanFormat) {
  const auto r = run({"sample", data_path("car_minimal.dimacs"), "--format", "human", "--shots", "50"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("car_minimal"), std::string::npos);
}

TEST_F(CliTest, SampleErrors) {
  EXPECT_EQ(run({"sample", data_path("unsat.dimacs")}).code, 5);
  EXPECT_EQ(run({"sample", data_path("car.fm"), "--backend", "gate"}).code, 6);  // width 28 > 26
  EXPECT_EQ(run({"sample", data_path("car_minimal.dimacs"), "--backend", "gate", "--gate-cap", "18"}).code, 6);
  EXPECT_EQ(run({"sample", file("wide.dimacs", "p cnf 30 1\n1 0\n")}).code, 6);
  EXPECT_EQ(run({"sample", data_path("car_minimal.dimacs"), "--shots", "0"}).code, 1);
}

TEST_F(CliTest, GateCapFromEnvironment) {
  ::setenv("QGS_GATE_CAP", "18", 1);
  const auto blocked = run({"sample", data_path("car_minimal.dimacs"), "--backend", "gate", "--shots", "10"});
  ::setenv("QGS_GATE_CAP", "19", 1);
  const auto allowed = run({"sample", data_path("car_minimal.dimacs"), "--backend", "gate", "--shots", "10"});
  ::unsetenv("QGS_GATE_CAP");
  EXPECT_EQ(blocked.code, 6);
  EXPECT_EQ(allowed.code, 0) << allowed.err;
}

TEST_F(CliTest, Uniformity) {
  const auto r = run({"uniformity", data_path("car.fm"), "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["shots"], 20000);
  EXPECT_GT(doc["p_value"].get<double>(), 0.01);
  const auto human = run({"uniformity", data_path("car_minimal.dimacs"), "--shots", "2000"});
  EXPECT_NE(human.out.find("p_value "), std::string::npos);
}

TEST_F(CliTest, AnalyzeCsv) {
  const auto r = run({"analyze", data_path("car.fm"), data_path("car_minimal.dimacs"), data_path("unsat.dimacs"),
                      data_path("single.fm"), "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string header, car, minimal, unsat, single;
  std::getline(lines, header);
  std::getline(lines, car);
  std::getline(lines, minimal);
  std::getline(lines, unsat);
  std::getline(lines, single);
  EXPECT_EQ(header, "name,features,clauses,models,pct_valid,k_best,width,depth_k1,total_depth");
  EXPECT_EQ(car.rfind("car,10,17,18,1.7578,5,28,", 0), 0u);
  EXPECT_EQ(minimal.rfind("car_minimal,10,8,18,1.7578,5,19,", 0), 0u);
  EXPECT_EQ(unsat.rfind("unsat,1,2,0,0.0000,n/a,4,", 0), 0u);
  EXPECT_EQ(single.rfind("single,1,1,1,50.0000,0,3,", 0), 0u);
}

TEST_F(CliTest, AnalyzeContinuesPastTimeout) {
  std::mt19937_64 rng(8);
  const auto hard = file("hard.dimacs", qgs::emit_dimacs(qgs::testing::random_3cnf(rng, 60, 150)));
  const auto r = run({"analyze", hard, data_path("car_minimal.dimacs"), "--budget", "1000", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  ASSERT_EQ(doc.size(), 2u);
  EXPECT_EQ(doc[0]["note"], "timeout");
  EXPECT_TRUE(doc[0]["models"].is_null());
  EXPECT_EQ(doc[1]["models"], "18");
}

TEST_F(CliTest, AnalyzeThreadsDoNotChangeOutput) {
  const std::vector<std::string> base{"analyze", data_path("car.fm"), data_path("car_minimal.dimacs"),
                                      data_path("single.fm")};
  auto threaded = base;
  threaded.insert(threaded.end(), {"--threads", "3"});
  EXPECT_EQ(run(base).out, run(threaded).out);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}
