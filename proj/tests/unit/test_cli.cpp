#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult cli(const std::string& args) {
  const std::string cmd = std::string(OBSOLVE_CLI) + " " + args + " 2>&1";
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  while (const std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string(OBSOLVE_DATA_DIR) + "/" + name; }

std::string temp(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool has_line(const std::string& out, const std::string& line) {
  return out.find(line + "\n") != std::string::npos;
}

}  // namespace

TEST(Cli, HelpExitsZero) {
  const CliResult r = cli("--help");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("solve"), std::string::npos);
}

TEST(Cli, SolveExampleIterationCount) {
  const CliResult r = cli("solve --problem " + data("lae_rank3_solvable.txt") + " --gain sigma:0.008333333333333333");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(has_line(r.out, "iterations: 586")) << r.out;
  EXPECT_TRUE(has_line(r.out, "updates: 587"));
  EXPECT_TRUE(has_line(r.out, "converged: yes"));
  EXPECT_TRUE(has_line(r.out, "solvability (rank test): Solvable"));
}

TEST(Cli, SolveWritesTraceAndLimit) {
  const std::string trace = temp("obsolve_cli_trace.csv");
  const std::string limit = temp("obsolve_cli_limit.txt");
  const CliResult r = cli("solve --problem " + data("lae_rank3_unsolvable.txt") + " --trace " + trace +
                    " --out " + limit);
  ASSERT_EQ(r.code, 0) << r.out;
  const std::string csv = slurp(trace);
  EXPECT_EQ(csv.rfind("k,step_norm,residual_norm\n1,", 0), 0u);
  EXPECT_EQ(slurp(limit).rfind("5 1\n", 0), 0u);
  EXPECT_TRUE(has_line(r.out, "least squares: yes"));
  std::filesystem::remove(trace);
  std::filesystem::remove(limit);
}

TEST(Cli, VerifyAgainstOracle) {
  const CliResult tight = cli("solve --problem " + data("lae_rank3_solvable.txt") +
                        " --epsilon 1e-12 --verify --solution-set");
  EXPECT_EQ(tight.code, 0) << tight.out;
  EXPECT_TRUE(has_line(tight.out, "verify: pass"));
  EXPECT_TRUE(has_line(tight.out, "null dimension: 2"));
  // The default stopping rule leaves u_inf too far from the limit for a
  // 1e-5 relative comparison.
  EXPECT_EQ(cli("solve --problem " + data("lae_rank3_solvable.txt") + " --verify").code, 4);
}

TEST(Cli, DeadbeatOnIdentity) {
  const CliResult r = cli("solve --problem " + data("identity3.txt") + " --gain deadbeat:zero");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(has_line(r.out, "iterations: 1"));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli("solve --problem " + data("malformed.txt")).code, 1);
  EXPECT_NE(cli("solve --problem " + data("malformed.txt")).out.find("malformed.txt:3:"),
            std::string::npos);
  EXPECT_EQ(cli("solve --problem /nonexistent/problem.txt").code, 1);
  EXPECT_EQ(cli("solve --bogus-flag").code, 1);
  EXPECT_EQ(cli("solve --problem " + data("lae_rank3_solvable.txt") + " --gain sigma:1").code, 2);
  EXPECT_EQ(cli("solve --problem " + data("lae_rank3_solvable.txt") + " --max-iters 10").code, 3);
  EXPECT_EQ(cli("ilc --plant " + data("plant_zero_b.txt") + " --reference " +
                data("reference_example.txt") + " --gain f0:" + data("f0_example.txt"))
                .code,
            2);
  EXPECT_EQ(cli("bench --sizes 0x3").code, 1);
}

TEST(Cli, IlcExample) {
  const std::string trace = temp("obsolve_cli_ilc.csv");
  const CliResult r = cli("ilc --plant " + data("plant_example.txt") + " --reference " +
                    data("reference_example.txt") + " --gain f0:" + data("f0_example.txt") +
                    " --u0 " + data("u0_example.txt") + " --trace " + trace);
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(has_line(r.out, "relative degree: 1"));
  EXPECT_TRUE(has_line(r.out, "lifted G: 60x60"));
  EXPECT_TRUE(has_line(r.out, "certificate: nilpotent (nu = 30)"));
  EXPECT_TRUE(has_line(r.out, "error <= 1e-9 from trial: 30"));
  EXPECT_EQ(slurp(trace).rfind("k,tracking_error\n0,", 0), 0u);
  std::filesystem::remove(trace);
}

TEST(Cli, BenchIsDeterministic) {
  const std::string a = temp("obsolve_bench_a.csv");
  const std::string b = temp("obsolve_bench_b.csv");
  const std::string args = "bench --sizes 6x4,4x7,5x5 --rank-class deficient --seed 17 --count 3 --out ";
  ASSERT_EQ(cli(args + a).code, 0);
  ASSERT_EQ(cli(args + b).code, 0);
  const std::string csv = slurp(a);
  EXPECT_EQ(csv, slurp(b));
  EXPECT_EQ(csv.rfind("problem,p,q,rank,rank_class,gain,iterations,updates,residual,u0_spread,check\n", 0),
            0u);
  EXPECT_EQ(csv.find(",FAIL"), std::string::npos);
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}
