#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

using json = nlohmann::json;

struct Result {
  int code = -1;
  std::string out;
};

// Runs the CLI through the shell; stderr is discarded.
Result run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + MAGARI_CLI + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe)
    return r;
  std::array<char, 4096> buf{};
  while (const std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe))
    r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

json run_json(const std::string& args, int expected_code, const std::string& env = "") {
  const Result r = run("--json " + args, env);
  EXPECT_EQ(r.code, expected_code) << args << "\n" << r.out;
  return json::parse(r.out, nullptr, false);
}

TEST(Cli, Eval) {
  const Result r = run("eval '!D0'");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("value: 0(1)"), std::string::npos) << r.out;
  const json j = run_json("eval Dp --assign 'p=0(1)'", 0);
  EXPECT_EQ(j["result"]["value"], "1(0)");
  EXPECT_EQ(j["version"], "1.0.0");
  EXPECT_TRUE(j.contains("duration_ms"));
  EXPECT_EQ(run("eval 'p & q' --assign 'p=1(0)'").code, 2);
  EXPECT_EQ(run("eval 'p &'").code, 2);
  EXPECT_EQ(run("eval p --assign 'p=12'").code, 2);
}

TEST(Cli, JsonFlagAfterSubcommand) {
  const Result r = run("eval '!D0' --json");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["result"]["value"], "0(1)");
}

TEST(Cli, CheckValid) {
  const json j = run_json("check --concl 'D(Dp->p)=Dp'", 0);
  EXPECT_EQ(j["result"]["verdict"], "valid");
  EXPECT_FALSE(j["result"].contains("oracle"));
}

TEST(Cli, CheckCounterexample) {
  const json j = run_json("check --concl 'Dp=p'", 1);
  EXPECT_EQ(j["result"]["verdict"], "counterexample");
  EXPECT_EQ(j["result"]["replay"], "confirmed");
  EXPECT_EQ(j["result"]["lasso"]["assignment"]["p"], "(0)");
}

TEST(Cli, CheckWithHypothesesAndOracle) {
  const json j = run_json("check --hyp 'Dp=p' --concl 'p=1' --oracle-bound 4", 0);
  EXPECT_EQ(j["result"]["oracle"]["found"], false);
  EXPECT_EQ(j["result"]["oracle"]["agreement"], true);
  const json env = run_json("check --concl 'Dp=p'", 1, "MAGARI_ORACLE_BOUND=2");
  EXPECT_EQ(env["result"]["oracle"]["bound"], 2);
  EXPECT_EQ(env["result"]["oracle"]["found"], true);
  EXPECT_EQ(run("check --concl 'Dp'").code, 2);
  EXPECT_EQ(run("check --hyp 'p=q'").code, 2);
  EXPECT_EQ(run("check --concl 'p=p'", "MAGARI_ORACLE_BOUND=zero").code, 2);
}

// (D p = q) => (F_delta(p,q) = c) for i = 1 and F = !p, written out.
TEST(Cli, CheckConstructedRelation) {
  const std::string f_delta = "(@q & ((D p <-> q) <-> !(!D 0))) | (!@q & !D 0)";
  const json j = run_json("check --hyp 'D p = q' --concl '" + f_delta + " = !(!D 0)'", 0);
  EXPECT_EQ(j["result"]["verdict"], "valid");
}

TEST(Cli, Member) {
  const json j = run_json("member --class 2 'p|q'", 0);
  EXPECT_EQ(j["result"]["member"], true);
  EXPECT_EQ(run("member --class 2 '!p'").code, 1);
  EXPECT_EQ(run("member --class 0 p").code, 2);
}

TEST(Cli, Closure) {
  const auto path = std::filesystem::temp_directory_path() / "magari_cli_sigma.txt";
  std::ofstream(path) << "d := D p\nzero := 0\n";
  const json j = run_json("closure --sigma " + path.string() + " --vars 0 --depth 3", 0);
  EXPECT_EQ(j["result"]["count"], 4);
  EXPECT_EQ(j["result"]["classes"][3], "D D D 0");
  EXPECT_EQ(j["result"]["truncated"], false);
  const json capped = run_json("closure --sigma " + path.string() + " --vars 0 --depth 3 --cap 2", 0);
  EXPECT_EQ(capped["result"]["truncated"], true);
  EXPECT_EQ(run("closure --sigma /nonexistent/sigma").code, 2);
  std::filesystem::remove(path);
}

TEST(Cli, Synthesize) {
  const json j = run_json("synthesize '10(0)'", 0);
  EXPECT_EQ(j["result"]["element"], "1(0)");
  EXPECT_EQ(j["result"]["term"], "D 0");
  EXPECT_EQ(j["result"]["round_trip"], "confirmed");
  const json k = run_json("synthesize '010(0)'", 0);
  EXPECT_EQ(k["result"]["round_trip"], "confirmed");
}

TEST(Cli, VerifyPaper) {
  const json j = run_json("verify-paper --i-max 5 --oracle-bound 3", 0);
  EXPECT_EQ(j["result"]["aggregate"], "PASS");
  EXPECT_EQ(j["result"]["reports"].size(), 15u);
  EXPECT_EQ(j["result"]["distinctness"]["separations"].size(), 20u);
  const Result text = run("verify-paper --i-max 2 --witnesses '!p'", "MAGARI_ORACLE_BOUND=2");
  EXPECT_EQ(text.code, 0);
  EXPECT_NE(text.out.find("aggregate: PASS"), std::string::npos);
  EXPECT_NE(text.out.find("oracle_bound: 2"), std::string::npos);
}

TEST(Cli, VerifyPaperRejectsClassMembers) {
  const json j = run_json("verify-paper --i-max 2 --witnesses 'p&q' --oracle-bound 2", 1);
  EXPECT_EQ(j["result"]["aggregate"], "FAIL");
  EXPECT_EQ(j["result"]["reports"][0]["status"], "rejected: input belongs to K_1");
}

TEST(Cli, Usage) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

} // namespace
