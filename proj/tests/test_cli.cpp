#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <sys/wait.h>

#include "chainfold/io.hpp"
#include "chainfold/solvers.hpp"

using namespace chainfold;

namespace {

const std::string kSource = CHAINFOLD_SOURCE_DIR;

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(CHAINFOLD_CLI) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf;
  while (auto n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const std::string& rel) { return kSource + "/data/" + rel; }

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() / ("chainfold_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string operator/(const std::string& f) const { return (path_ / f).string(); }

 private:
  std::filesystem::path path_;
  static inline int counter_ = 0;
};

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("bogus").code, 2);
  EXPECT_EQ(run("solve-pack " + data("chains/hp_small.chain")).code, 2);
  EXPECT_EQ(run("reduce a b --variant triangle").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, MalformedFilesReportLineAndColumn) {
  TempDir t;
  write_file(t / "bad.chain", "# comment\nopen SCX\n");
  const auto r = run("solve-hp " + t / "bad.chain");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("line 2, column 8"), std::string::npos) << r.out;
  write_file(t / "bad.cnf", "p cnf 2 1\n1 -3 0\n");
  const auto d = run("reduce " + t / "bad.cnf " + data("corpus/single.lvl"));
  EXPECT_EQ(d.code, 2);
  EXPECT_NE(d.out.find("line 2, column 3"), std::string::npos) << d.out;
}

TEST(Cli, SolveFlattenOnTheCrossingOnlyChain) {
  const auto r = run("solve-flatten " + data("chains/crossing_only.chain"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("no noncrossing closed configuration"), std::string::npos);
  EXPECT_EQ(run("solve-flatten " + data("chains/unit_square.chain")).code, 0);
  EXPECT_EQ(run("solve-flatten " + data("chains/crossing_only.chain") + " --budget 3").code, 3);
}

TEST(Cli, SolveHpAndPack) {
  TempDir t;
  const auto r = run("solve-hp " + data("chains/hp_small.chain") + " --out " + t / "cfg");
  EXPECT_EQ(r.code, 0);
  const auto chain = parse_chain(read_file(data("chains/hp_small.chain")));
  const auto best = solve_hp(chain);
  EXPECT_NE(r.out.find("contacts=" + std::to_string(*best.objective)), std::string::npos);
  const auto cfg = parse_config(read_file(t / "cfg"));
  EXPECT_EQ(static_cast<std::int64_t>(count_hh_contacts(cfg, chain.colors)), *best.objective);
  EXPECT_EQ(run("solve-pack " + data("chains/hp_small.chain") + " 2").code, 1);
  EXPECT_EQ(run("solve-pack " + data("chains/hp_small.chain") + " 3").code, 0);
}

TEST(Cli, ReduceWitnessVerifyHp) {
  TempDir t;
  ASSERT_EQ(run("reduce " + data("corpus/four_clauses.cnf") + " " + data("corpus/four_clauses.lvl") +
                " --variant hp --out " + t / "a.json").code, 0);
  ASSERT_EQ(run("witness " + t / "a.json " + data("corpus/four_clauses.assign") + " --out " + t / "w").code, 0);
  const auto v = run("verify " + t / "a.json " + t / "w");
  EXPECT_EQ(v.code, 0) << v.out;
  EXPECT_NE(v.out.find("contacts=1"), std::string::npos);
  EXPECT_NE(v.out.find("2=0"), std::string::npos);
  auto turns = read_file(t / "w");
  turns[0] = turns[0] == 'L' ? 'R' : 'L';
  write_file(t / "bad", turns);
  EXPECT_EQ(run("verify " + t / "a.json " + t / "bad").code, 1);
}

TEST(Cli, ExitCodesMatchSatisfiabilityAcrossTheCorpus) {
  TempDir t;
  std::vector<std::string> names{"single", "four_clauses", "long_edge", "above_and_below", "unit_pair_unsat"};
  for (int i = 1; i <= 18; ++i) names.push_back((i < 10 ? "random_0" : "random_") + std::to_string(i));
  for (const auto& n : names) {
    const auto f = parse_dimacs(read_file(data("corpus/" + n + ".cnf")));
    ASSERT_EQ(run("reduce " + data("corpus/" + n + ".cnf") + " " + data("corpus/" + n + ".lvl") +
                  " --toy-parameters --out " + t / "a.json").code, 0);
    for (std::uint32_t mask = 0; mask < (1u << f.variables); ++mask) {
      Assignment a;
      for (int v = 1; v <= f.variables; ++v) a[v] = (mask >> (v - 1)) & 1u;
      write_file(t / "m", emit_assignment(a));
      const auto w = run("witness " + t / "a.json " + t / "m --out " + t / "w");
      EXPECT_EQ(w.code, satisfies(f, a) ? 0 : 1) << n << " " << mask << " " << w.out;
      if (w.code == 1) EXPECT_NE(w.out.find("is not satisfied"), std::string::npos);
    }
  }
}

TEST(Cli, RenderMatchesGoldenFile) {
  const auto r = run("render " + data("chains/unit_square.config"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, read_file(kSource + "/tests/golden/unit_square.svg"));
  EXPECT_EQ(run("render " + data("chains/unit_square.config") + " --scale 0.5").code, 2);
}

TEST(Cli, RenderArtifactFolding) {
  TempDir t;
  ASSERT_EQ(run("reduce " + data("corpus/single.cnf") + " " + data("corpus/single.lvl") +
                " --toy-parameters --out " + t / "a.json").code, 0);
  write_file(t / "m", "1=1\n");
  ASSERT_EQ(run("witness " + t / "a.json " + t / "m --out " + t / "w").code, 0);
  ASSERT_EQ(run("render " + t / "a.json --turns " + t / "w --out " + t / "f.svg").code, 0);
  EXPECT_NE(read_file(t / "f.svg").find("<path"), std::string::npos);
  EXPECT_EQ(run("render " + t / "a.json").code, 2);
}

TEST(Cli, EnumerateCountsMatchTheLibrary) {
  const auto r = run("enumerate " + data("chains/unit_square.chain"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("count=2"), std::string::npos);
  const auto chain = parse_chain(read_file(data("chains/hp_small.chain")));
  const auto n = enumerate_foldings(chain).size();
  EXPECT_NE(run("enumerate " + data("chains/hp_small.chain") + " --count-only").out.find("count=" + std::to_string(n)),
            std::string::npos);
  EXPECT_EQ(run("enumerate " + data("chains/crossing_only.chain")).code, 1);
}

TEST(Cli, GalleryWritesEveryIntendedFolding) {
  TempDir t;
  const auto r = run("gallery --out " + t / "g");
  EXPECT_EQ(r.code, 0);
  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(t / "g")) files += e.path().extension() == ".svg";
  EXPECT_GE(files, 50u);
  EXPECT_TRUE(std::filesystem::exists(t / "g/variable-true.svg"));
  EXPECT_TRUE(std::filesystem::exists(t / "g/clause-choice-choose0.svg"));
}
