#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "freqcube/io.hpp"

using namespace freqcube;
using io::json;

TEST(Io, PointSetRoundTrip) {
  const auto t = three_cube_set();
  const json j = io::to_json(t);
  EXPECT_EQ(j["q"], 3);
  EXPECT_EQ(j["points"][1], json::array({0, 1, 1}));
  EXPECT_EQ(io::point_set_from_json(j), t);
  EXPECT_EQ(io::point_set_from_json(json::parse(j.dump())), t);
}

TEST(Io, PointSetValidation) {
  EXPECT_THROW(io::point_set_from_json(json::parse(R"({"q":3,"n":2,"points":[[0,3]]})")), InvalidArgument);
  EXPECT_THROW(io::point_set_from_json(json::parse(R"({"q":3,"n":2,"points":[[0,1,2]]})")), InvalidArgument);
  EXPECT_THROW(io::point_set_from_json(json::parse(R"({"q":3,"points":[]})")), InvalidArgument);
  EXPECT_THROW(io::point_set_from_json(json::parse(R"({"q":"3","n":2,"points":[]})")), InvalidArgument);
  EXPECT_THROW(io::point_set_from_json(json::parse(R"({"q":3,"n":2,"points":[["a",0]]})")), InvalidArgument);
  EXPECT_THROW(io::point_set_from_json(json::parse(R"({"q":1,"n":2,"points":[]})")), InvalidArgument);
}

TEST(Io, CubeAndBitradeRoundTrip) {
  const FreqParams p(3, 2, 1, {1, 1, 1});
  const auto f = enumerate_cubes(p).front();
  const json j = io::to_json(f, 3);
  EXPECT_EQ(j["m"], 3);
  EXPECT_EQ(io::cube_from_json(j), f);
  const CubeArray beta(GridSig(2, 2), {1, -1, -1, 1});
  EXPECT_EQ(io::cube_from_json(io::bitrade_to_json(beta, 1)), beta);
  EXPECT_THROW(io::cube_from_json(json::parse(R"({"q":2,"n":2,"values":[0,1,0]})")), InvalidArgument);
}

TEST(Io, PartialCubeRoundTrip) {
  const FreqParams p(3, 3, 1, {1, 1, 1});
  const auto f = enumerate_cubes(p).back();
  const auto pc = restrict_to(f, three_cube_set(), 3);
  const json j = io::to_json(pc);
  EXPECT_EQ(j["points"].size(), 7u);
  const auto back = io::partial_from_json(j);
  EXPECT_EQ(back.assignments, pc.assignments);
  EXPECT_EQ(back.m, 3);
  EXPECT_THROW(io::partial_from_json(json::parse(R"({"q":3,"n":1,"m":3,"points":[[0],[0]],"values":[1,2]})")),
               InvalidArgument);
  EXPECT_THROW(io::partial_from_json(json::parse(R"({"q":3,"n":1,"m":3,"points":[[0]],"values":[]})")),
               InvalidArgument);
}

TEST(Io, MatrixRoundTrip) {
  const auto m = BinMatrix::from_points(hamming_testing_set(7, false));
  const json j = io::to_json(m);
  EXPECT_EQ(j["rows"][0], "0001111");
  EXPECT_EQ(io::matrix_from_json(j).rows, m.rows);
}

TEST(Io, CertificateDocument) {
  const auto c = certify_supertesting(PointSet(GridSig(3, 2), {0}), 1);
  const json j = io::to_json(c);
  EXPECT_EQ(j["kind"], "supertesting-by-exhaustion");
  EXPECT_EQ(j["verdict"], "fails");
  EXPECT_EQ(j["tool_version"], kToolVersion);
  EXPECT_TRUE(j["evidence"].contains("nodes"));
  ASSERT_EQ(j["counterexample"].size(), 1u);
  EXPECT_EQ(io::point_set_from_json(j["set"]), c.set);
}

TEST(Io, ReadFile) {
  const std::string path = testing::TempDir() + "freqcube_io_test.json";
  {
    std::ofstream out(path);
    out << io::to_json(three_cube_set()).dump();
  }
  EXPECT_EQ(io::point_set_from_json(io::read_json_file(path)), three_cube_set());
  {
    std::ofstream out(path);
    out << "{not json";
  }
  EXPECT_THROW(io::read_json_file(path), InvalidArgument);
  std::remove(path.c_str());
  EXPECT_THROW(io::read_json_file(path), InvalidArgument);
}
