#include "cli.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "gcfibers");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = gcf::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

int count_lines_with_dim(const std::string& table, int dim) {
  std::istringstream is(table);
  std::string line;
  int c = 0;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string id;
    int d = -1;
    if (ls >> id >> d && id.size() == 16 && d == dim) ++c;
  }
  return c;
}

}  // namespace

TEST(Cli, FacesF3) {
  auto r = run({"faces", "--lambda", "1,0,-1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines_with_dim(r.out, 0), 7);
  EXPECT_EQ(count_lines_with_dim(r.out, 3), 1);
  EXPECT_NE(r.out.find("f-vector: 7 11 6 1  (25 faces)"), std::string::npos);
}

TEST(Cli, FacesInterval) {
  auto r = run({"--lambda", "1,0", "faces"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("(3 faces)"), std::string::npos);
}

TEST(Cli, FacesJsonRoundTrip) {
  auto r = run({"faces", "--lambda", "1,1,0,0", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  auto j = gcf::Json::parse(r.out);
  EXPECT_EQ(j["faces"].size(), 39u);
  EXPECT_EQ(j["f_vector"].dump(), "[6,13,13,6,1]");
  EXPECT_EQ(gcf::Json::parse(j.dump(2)).dump(2) + "\n", r.out);
  EXPECT_EQ(gcf::lambda_from_json(j["lambda"]), gcf::parse_lambda("1,1,0,0"));
}

TEST(Cli, LagrangianCounts) {
  auto gr26 = run({"lagrangian", "--lambda", "1,1,0,0,0,0"});
  EXPECT_NE(gr26.out.find("proper Lagrangian faces: 4\nimproper: 1"), std::string::npos);
  auto f4 = run({"lagrangian", "--lambda", "3,2,1,0", "--format", "json"});
  auto j = gcf::Json::parse(f4.out);
  EXPECT_EQ(j["proper"], 3);
  EXPECT_EQ(j["improper"], 1);
  auto cp1 = run({"lagrangian", "--lambda", "1,0"});
  EXPECT_NE(cp1.out.find("proper Lagrangian faces: 0\nimproper: 1"), std::string::npos);
}

TEST(Cli, FiberSU3Origin) {
  auto id = fixtures::su3_origin().id();
  auto r = run({"fiber", "--lambda", "3,3,0,-3,-3", "--face", id});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("fiber: S^3-bundle over S^5"), std::string::npos);
  EXPECT_NE(r.out.find("dimension: 8 (Lagrangian)"), std::string::npos);
  auto prefix = run({"fiber", "--lambda", "3,3,0,-3,-3", "--face", id.substr(0, 8), "--format", "json"});
  auto j = gcf::Json::parse(prefix.out);
  EXPECT_EQ(j["fibers"][0]["bundle"], "S^3-bundle over S^5");
  EXPECT_EQ(j["fibers"][0]["r"], 0);
}

TEST(Cli, FiberByPoint) {
  auto r = run({"fiber", "--lambda", "3,3,0,-3,-3", "--point",
                "u11=0,u12=0,u21=0,u13=0,u22=0,u31=0,u14=3,u23=0,u32=0,u41=-3", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(gcf::Json::parse(r.out)["fibers"][0]["face_id"], fixtures::su3_origin().id());
  auto missing = run({"fiber", "--lambda", "3,3,0,-3,-3", "--point", "u11=0"});
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("does not assign"), std::string::npos);
}

TEST(Cli, VerifyF3AllFaces) {
  auto r = run({"verify", "--lambda", "1,0,-1", "--face", "all", "--samples", "50", "--seed", "7"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("verified 25 faces: all pass"), std::string::npos);
}

TEST(Cli, OutputIndependentOfJobs) {
  auto a = run({"verify", "--lambda", "2,1,1,0", "--samples", "3", "--seed", "4", "--format", "json", "--jobs", "1"});
  auto b = run({"verify", "--lambda", "2,1,1,0", "--samples", "3", "--seed", "4", "--format", "json", "--jobs", "3"});
  auto c = run({"verify", "--lambda", "2,1,1,0", "--samples", "3", "--seed", "4", "--format", "json", "--jobs", "3"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(b.out, c.out);
  auto l1 = run({"lagrangian", "--lambda", "1,1,0,0,0,0", "--jobs", "1"});
  auto l4 = run({"lagrangian", "--lambda", "1,1,0,0,0,0", "--jobs", "4"});
  EXPECT_EQ(l1.out, l4.out);
}

TEST(Cli, RenderWorkedFace) {
  auto d = gcf::build_ladder(gcf::parse_lambda("4,4,3,2,1"));
  auto id = gcf::face_by_equalities(d, "u21=u11,u11=u12,u22=u12,u21=u22,u22=u23,u13=4").id();
  auto r = run({"render", "--lambda", "4,4,3,2,1", "--face", id, "--format", "ascii"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find("rigid")),
            "....o---o\n"
            ":   | B |\n"
            "o---o...o---o\n"
            "| A :   | D |\n"
            "o.......o---o---o\n"
            "| A : A | C | E |\n"
            "o---o---o---o---o\n");
  auto by_eq = run({"render", "--lambda", "4,4,3,2,1", "--face-by-equalities",
                    "u21=u11,u11=u12,u22=u12,u21=u22,u22=u23,u13=4"});
  EXPECT_EQ(by_eq.out, r.out);
  auto svg = run({"render", "--lambda", "4,4,3,2,1", "--face", id, "--format", "svg", "--overlay", "w2"});
  EXPECT_EQ(svg.out.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.out.find("wblock"), std::string::npos);
}

TEST(Cli, Polytope) {
  auto r = run({"polytope", "--lambda", "1,0,-1", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  auto j = gcf::Json::parse(r.out);
  EXPECT_EQ(j["inequalities"].size(), 6u);
  EXPECT_EQ(j["variables"].size(), 3u);
  auto t = run({"polytope", "--lambda", "1,0"});
  EXPECT_NE(t.out.find("u[1][1] <= 1"), std::string::npos);
  EXPECT_NE(t.out.find("-u[1][1] <= 0"), std::string::npos);
}

TEST(Cli, WritesOutFile) {
  auto path = (std::filesystem::temp_directory_path() / "gcfibers_cli_test.json").string();
  auto r = run({"faces", "--lambda", "1,0", "--format", "json", "--out", path});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  EXPECT_EQ(gcf::Json::parse(in)["faces"].size(), 3u);
  std::remove(path.c_str());
  auto bad = run({"faces", "--lambda", "1,0", "--out", "/nonexistent-dir/x.txt"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("/nonexistent-dir/x.txt"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({"faces"}).code, 2);
  EXPECT_EQ(run({"--lambda", "1,0"}).code, 2);
  EXPECT_EQ(run({"faces", "--lambda", "0,1"}).code, 2);
  EXPECT_EQ(run({"faces", "--lambda", "1,0", "--format", "svg"}).code, 2);
  EXPECT_EQ(run({"fiber", "--lambda", "1,0", "--face", "zzzz"}).code, 2);
  EXPECT_EQ(run({"render", "--lambda", "1,0"}).code, 2);
  EXPECT_EQ(run({"render", "--lambda", "1,0", "--face", "improper", "--overlay", "w5"}).code, 2);
  EXPECT_EQ(run({"verify", "--lambda", "1,0", "--samples", "-1"}).code, 2);
  EXPECT_EQ(run({"verify", "--lambda", "1,0", "--tol", "0"}).code, 2);
  EXPECT_EQ(run({"fiber", "--lambda", "1,0,-1", "--face-by-equalities", "u11=1,u11=-1"}).code, 2);
  EXPECT_EQ(run({"faces", "--lambda", "1,0", "--face", "improper", "--point", "u11=0"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, SizeGuard) {
  auto r = run({"faces", "--lambda", "5,4,3,2,1,0"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("GC_FIBERS_MAX_BOXES"), std::string::npos);
  auto single = run({"fiber", "--lambda", "5,4,3,2,1,0", "--face", "improper"});
  EXPECT_EQ(single.code, 0);
  EXPECT_NE(single.out.find("T^15"), std::string::npos);
}
