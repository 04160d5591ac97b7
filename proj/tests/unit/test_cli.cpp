#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cantor/certificate.hpp"
#include "cantor/cli.hpp"
#include "cantor/codings.hpp"
#include "cantor/largesets.hpp"
#include "cantor/trees.hpp"

using namespace cantor;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "cantor");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  testing::internal::CaptureStdout();
  testing::internal::CaptureStderr();
  const int code = run_command(static_cast<int>(argv.size()), argv.data());
  std::string out = testing::internal::GetCapturedStdout();
  std::string err = testing::internal::GetCapturedStderr();
  return {code, out, err};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

class Cli : public testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("cantor_cli_" + std::string(testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  std::string path(const char* name) const { return (dir / name).string(); }
  fs::path dir;
};

}  // namespace

TEST_F(Cli, TrivialFiltrationStageZero) {
  std::ofstream out(path("trivial.filt"));
  write_filt(out, Filtration({ClopenSet::full(2, 2)}));
  out.close();
  Result r = run({"inscribe", "measure", "--variant", "silver", "--stages", "0", "--input", path("trivial.filt")});
  ASSERT_EQ(r.code, 0) << r.err;
  Json cert = Json::parse(r.out);
  EXPECT_EQ(cert["stages"].size(), 1u);
}

TEST_F(Cli, InscribeVerifyAndMutate) {
  ASSERT_EQ(run({"gen", "--seed", "3", "--kind", "dense-open", "--depth", "6", "--out", path("u.dof")}).code, 0);
  Result ins = run({"inscribe", "category", "--variant", "spinas", "--stages", "2", "--input", path("u.dof"), "--cert", path("u.cert")});
  ASSERT_EQ(ins.code, 0) << ins.err;
  EXPECT_EQ(ins.out.rfind("spinas-cat stages=2", 0), 0u) << ins.out;
  Result ok = run({"verify", "--cert", path("u.cert"), "--input", path("u.dof")});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out, "PASS\n");

  Json doc = Json::parse(slurp(path("u.cert")));
  doc["stages"][1]["V"] = doc["stages"][1]["V"].get<std::string>() + "1";
  spit(path("bad.cert"), doc.dump(2));
  Result bad = run({"verify", "--cert", path("bad.cert"), "--input", path("u.dof")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(bad.out.rfind("FAIL ", 0), 0u) << bad.out;

  ASSERT_EQ(run({"gen", "--seed", "4", "--kind", "dense-open", "--depth", "6", "--out", path("w.dof")}).code, 0);
  Result other = run({"verify", "--cert", path("u.cert"), "--input", path("w.dof")});
  EXPECT_EQ(other.code, 2);
  EXPECT_NE(other.err.find("error: DigestMismatch"), std::string::npos) << other.err;
}

TEST_F(Cli, InputErrorsExitTwo) {
  spit(path("junk.dof"), "not a family\n");
  EXPECT_EQ(run({"inscribe", "category", "--variant", "silver", "--stages", "1", "--input", path("junk.dof")}).code, 2);
  EXPECT_EQ(run({"inscribe", "category", "--variant", "silver", "--stages", "1", "--input", path("missing.dof")}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"gen", "--kind", "filtration", "--depth", "3"}).code, 2);
  Result help = run({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("CANTOR_DEPTH_CAP"), std::string::npos);
}

TEST_F(Cli, ConstructionFailureExitsThree) {
  ClopenSet f0 = ClopenSet::full(2, 2);
  f0.erase_cell(0);
  f0.erase_cell(5);
  std::ofstream out(path("thin.filt"));
  write_filt(out, Filtration({f0}));
  out.close();
  Result r = run({"inscribe", "measure", "--variant", "silver", "--stages", "2", "--input", path("thin.filt")});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.err.rfind("error: InsufficientFiltration", 0), 0u) << r.err;
}

TEST_F(Cli, EncodeAndCheckCode) {
  Presentation p;
  p.ideal = Ideal::N;
  p.resolution = 11;
  p.levels.resize(11);
  for (unsigned n = 1; n < 11; ++n) p.levels[n] = {BitWord(std::string(n + 1, '0'))};
  std::ofstream out(path("z.pres"));
  write_presentation(out, p);
  out.close();
  ASSERT_EQ(run({"encode", "--ideal", "N", "--input", path("z.pres"), "--out", path("z.code")}).code, 0);
  EXPECT_EQ(run({"encode", "--ideal", "E", "--input", path("z.pres")}).code, 2);

  Result phi = run({"check-code", "--code", path("z.code"), "--formula", "phi", "--bound", "8"});
  EXPECT_EQ(phi.code, 0);
  EXPECT_NE(phi.out.find("unrefuted-at-bound"), std::string::npos) << phi.out;
  Result psi = run({"check-code", "--code", path("z.code"), "--formula", "psi", "--bound", "10", "--point", "(1)"});
  EXPECT_EQ(psi.code, 0);
  EXPECT_NE(psi.out.find("nonmember-witness"), std::string::npos) << psi.out;
  EXPECT_EQ(run({"check-code", "--code", path("z.code"), "--formula", "psi", "--bound", "10", "--point", "01"}).code, 2);

  spit(path("bad.code"), "code indexed N\nx 2 ∅ 1\n");
  Result refuted = run({"check-code", "--code", path("bad.code"), "--formula", "phi", "--bound", "8"});
  EXPECT_EQ(refuted.code, 1) << refuted.err;
  EXPECT_NE(refuted.out.find("refuted"), std::string::npos);
}

TEST_F(Cli, TreeClassify) {
  TreePrefix t;
  t.depth = 2;
  for (const char* w : {"0", "1", "00", "11"}) t.nodes.insert(BitWord(w));
  t.nodes.insert(BitWord());
  std::ofstream out(path("twin.tree"));
  write_tree(out, t, {});
  out.close();
  EXPECT_EQ(run({"tree", "classify", "--file", path("twin.tree"), "--kind", "uniformly-perfect"}).code, 0);
  Result v = run({"tree", "classify", "--file", path("twin.tree"), "--kind", "silver"});
  EXPECT_EQ(v.code, 1);
  EXPECT_EQ(v.out.rfind("violated silver", 0), 0u) << v.out;
}

TEST_F(Cli, OutputsAreByteIdentical) {
  for (const char* name : {"a.filt", "b.filt"})
    ASSERT_EQ(run({"gen", "--seed", "9", "--kind", "filtration", "--depth", "5", "--out", path(name)}).code, 0);
  EXPECT_EQ(slurp(path("a.filt")), slurp(path("b.filt")));
  Result a = run({"inscribe", "measure", "--variant", "uniform", "--stages", "2", "--input", path("a.filt")});
  Result b = run({"inscribe", "measure", "--variant", "uniform", "--stages", "2", "--input", path("b.filt")});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}
