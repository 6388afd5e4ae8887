#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>

#include "freqcube/io.hpp"

using namespace freqcube;
using io::json;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + FREQCUBE_CLI_PATH + std::string(" ") + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string write_temp(const std::string& name, const json& doc) {
  const std::string path = testing::TempDir() + name;
  std::ofstream(path) << doc.dump();
  return path;
}

}  // namespace

TEST(Cli, ConstructThreeCube) {
  const auto r = run("construct --family three-cube");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(io::point_set_from_json(j), three_cube_set());
  EXPECT_EQ(j["size"], 7);
  EXPECT_EQ(j["family"], "three-cube");
}

TEST(Cli, ConstructFamiliesFromFlagsAndSpec) {
  auto r = run("construct --family main-theorem --q 3 --n 6");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["size"], 49);
  r = run("construct --family hamming --n 7 --affine");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(io::point_set_from_json(json::parse(r.out)), hamming_testing_set(7, true));

  const auto inner = write_temp("cli_inner.json", io::to_json(three_cube_set()));
  r = run("construct --family lift --inner " + inner + " --q 4 --k 1");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["size"], 26);

  const auto spec = write_temp("cli_spec.json", json{{"family", "baseline"}, {"q", 3}, {"n", 2}, {"k", 1}});
  r = run("construct --spec " + spec);
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(io::point_set_from_json(json::parse(r.out)), baseline_set(3, 2, 1));

  const auto bad_spec = write_temp("cli_bad_spec.json", json{{"family", "baseline"}, {"colour", 1}});
  EXPECT_EQ(run("construct --spec " + bad_spec).code, 2);
}

TEST(Cli, ValidationErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("construct --family three-cube --bogus").code, 2);
  EXPECT_EQ(run("construct --family nosuch").code, 2);
  EXPECT_EQ(run("construct --family baseline --q 3").code, 2);
  EXPECT_EQ(run("count --q 3 --n 2 --k 1 --lambdas 1,1").code, 2);
  EXPECT_EQ(run("count --q 3 --n 2 --k 1").code, 2);
  EXPECT_EQ(run("certify --mode supertesting --set /nonexistent.json --k 1").code, 2);
  EXPECT_EQ(run("report --kind bound --q 2 --n 3").code, 2);
  EXPECT_EQ(run("--jobs 0 count --q 3 --n 2 --k 1 --lambdas 1,1,1").code, 2);
  EXPECT_EQ(run("count --q 3 --n 2 --k 1 --lambdas 1,1,1", "FREQCUBE_NODE_CAP=abc").code, 2);
}

TEST(Cli, Count) {
  const auto r = run("count --q 3 --n 2 --k 1 --lambdas 1,1,1");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["count"], 12);
  EXPECT_EQ(j["source"], "enumerated");
  EXPECT_EQ(json::parse(run("count --q 2 --n 7 --k 2 --lambdas 2,2").out)["count"], 16);
}

TEST(Cli, NodeCapFromEnvironment) {
  EXPECT_EQ(run("count --q 3 --n 4 --k 1 --lambdas 1,1,1", "FREQCUBE_NODE_CAP=5").code, 3);
  const auto set = write_temp("cli_t7.json", io::to_json(three_cube_set()));
  const auto r = run("certify --mode supertesting --set " + set + " --k 1", "FREQCUBE_NODE_CAP=2");
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(json::parse(r.out)["verdict"], "inconclusive");
}

TEST(Cli, CertifySupertesting) {
  const auto good = write_temp("cli_good.json", io::to_json(three_cube_minimal_set()));
  auto r = run("certify --mode supertesting --set " + good + " --k 1");
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "holds");
  EXPECT_EQ(j["kind"], "supertesting-by-exhaustion");
  EXPECT_GT(j["evidence"]["nodes"].get<std::uint64_t>(), 0u);

  const auto bad = write_temp("cli_bad.json", io::to_json(PointSet(GridSig(3, 3), {0, 1, 2})));
  r = run("certify --mode supertesting --set " + bad + " --k 1");
  EXPECT_EQ(r.code, 1);
  j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "fails");
  const CubeArray beta(GridSig(3, 3), j["counterexample"][0].get<std::vector<Value>>());
  EXPECT_TRUE(is_k_bitrade(beta, 1));
}

TEST(Cli, CertifyTestingNeedsSeedForSampling) {
  const auto set = write_temp("cli_mt4.json", io::to_json(main_theorem_set(3, 4)));
  auto r = run("certify --mode testing --set " + set + " --k 1 --lambdas 1,1,1");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["kind"], "testing-by-enumeration");
  EXPECT_EQ(run("certify --mode testing --set " + set + " --k 1 --lambdas 1,1,1 --samples 10").code, 2);
  r = run("certify --mode testing --set " + set + " --k 1 --lambdas 1,1,1 --samples 10 --seed 5");
  ASSERT_EQ(r.code, 0);
  const auto a = json::parse(r.out);
  EXPECT_EQ(a["kind"], "testing-by-sampling");
  EXPECT_EQ(a["evidence"]["seed"], 5);
  EXPECT_EQ(json::parse(run("certify --mode testing --set " + set + " --k 1 --lambdas 1,1,1 --samples 10 --seed 5").out),
            a);
}

TEST(Cli, CertifyAffine) {
  const auto set = write_temp("cli_ham.json", io::to_json(hamming_testing_set(7, true)));
  EXPECT_EQ(run("certify --mode affine --set " + set + " --k 1").code, 0);
  const auto lin = write_temp("cli_hamlin.json", io::to_json(hamming_testing_set(7, false)));
  EXPECT_EQ(run("certify --mode affine --set " + lin + " --k 1").code, 1);
  EXPECT_EQ(run("certify --mode affine --set " + lin + " --k 1 --class linear").code, 0);
}

TEST(Cli, Reconstruct) {
  const FreqParams p(3, 3, 1, {1, 1, 1});
  const auto f = enumerate_cubes(p)[5];
  const auto partial = write_temp("cli_partial.json", io::to_json(restrict_to(f, three_cube_set(), 3)));
  auto r = run("reconstruct --partial " + partial + " --k 1 --lambdas 1,1,1");
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["unique"], true);
  EXPECT_EQ(io::cube_from_json(j["cube"]), f);

  const auto base = write_temp("cli_base.json", io::to_json(restrict_to(f, baseline_set(3, 3, 1), 3)));
  r = run("reconstruct --partial " + base + " --k 1 --lambdas 1,1,1 --method baseline");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(io::cube_from_json(json::parse(r.out)["cube"]), f);

  const auto thin = write_temp("cli_thin.json", io::to_json(restrict_to(f, PointSet(p.sig(), {0}), 3)));
  r = run("reconstruct --partial " + thin + " --k 1 --lambdas 1,1,1");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(json::parse(r.out)["unique"], false);

  PartialCube clash{p.sig(), 3, {{0, 0}, {1, 0}}};
  const auto bad = write_temp("cli_clash.json", io::to_json(clash));
  EXPECT_EQ(run("reconstruct --partial " + bad + " --k 1 --lambdas 1,1,1").code, 1);
  EXPECT_EQ(run("reconstruct --partial " + bad + " --k 1 --lambdas 1,1,1 --method magic").code, 2);
}

TEST(Cli, SearchMin) {
  auto r = run("search-min --q 3 --n 2 --k 1 --max-size 4");
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["found"], true);
  EXPECT_EQ(j["size"], 4);
  r = run("search-min --q 3 --n 2 --k 1 --max-size 3");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(json::parse(r.out)["found"], false);
  r = run("search-min --testing --q 3 --n 3 --k 1 --lambdas 1,1,1 --max-size 5 --jobs 2");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["size"], 4);
  EXPECT_EQ(run("search-min --q 3 --n 4 --k 1 --max-size 40").code, 3);
}

TEST(Cli, BoundsDimReport) {
  auto j = json::parse(run("bounds --n 7 --k 1 --affine --greedy").out);
  EXPECT_EQ(j["lower"], 4);
  EXPECT_EQ(j["upper"], 4);
  EXPECT_EQ(j["greedy_size"], 4);
  EXPECT_EQ(j["b_n_3"], 16);

  const auto d = run("dim --q 3 --n 3 --k 2");
  ASSERT_EQ(d.code, 0);
  j = json::parse(d.out);
  EXPECT_EQ(j["sigma"], 20);
  EXPECT_EQ(j["agree"], true);

  j = json::parse(run("report --kind cardinality --q 2 --n 7 --k 2").out);
  EXPECT_EQ(j["fields"][0]["name"], "trivial_size");
  j = json::parse(run("report --kind bound --q 3 --n 6").out);
  EXPECT_EQ(j["fields"][0]["value"], 49);
}

TEST(Cli, PrettyTables) {
  auto r = run("--pretty count --q 3 --n 2 --k 1 --lambdas 1,1,1");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("count"), std::string::npos);
  EXPECT_FALSE(json::accept(r.out));
  r = run("--pretty construct --family three-cube");
  EXPECT_NE(r.out.find("layer 2:"), std::string::npos);
  r = run("--pretty report --kind bound --q 4 --n 3");
  EXPECT_NE(r.out.find("[constructed]"), std::string::npos);
}

TEST(Cli, Help) { EXPECT_EQ(run("--help").code, 0); }
