#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

using Json = nlohmann::json;

namespace {

struct Run {
  int exit_code = -1;
  std::string out;
};

// Runs the CLI with stderr discarded.
Run cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + TESTEL_CLI + std::string(" ") + args + " 2>/dev/null";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

Json doc(const Run& r) { return Json::parse(r.out); }

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("testel_cli_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST(Cli, NetExample) {
  const auto r = cli("net --free 2 --word x1");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = doc(r);
  EXPECT_EQ(j["subcommand"], "net");
  EXPECT_EQ(j["config"]["word"], "x1");
  EXPECT_LE(j["result"]["distance"].get<int>(), 4);
  EXPECT_FALSE(j["result"]["trace"].empty());
}

TEST(Cli, BoundsExample) {
  const auto r = cli("bounds --name orNet --genus 2");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(doc(r)["result"]["exact"], "165355");
}

TEST(Cli, BallExample) {
  const auto r = cli("ball --rank 2 --radius 4");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(doc(r)["result"]["ball_size"], 161);
}

TEST(Cli, OtherSubcommands) {
  const auto red = cli("reduce --surface orientable:2 --word 'x1 x2 x1^-1 x2^-1 x3 x4 x3^-1'");
  ASSERT_EQ(red.exit_code, 0);
  EXPECT_EQ(doc(red)["result"]["dehn_reduced"], "x4");
  const auto endo = cli("endo --free 2 --word 'x1 x2' --bound 2");
  ASSERT_EQ(endo.exit_code, 0);
  EXPECT_EQ(doc(endo)["result"]["status"], "negative");
  const auto coset = cli("coset --surface orientable:2 --word x1 --degree 2 --image '(1,2)' '(1,2)' '(1,2)' '(1,2)'");
  ASSERT_EQ(coset.exit_code, 0);
  EXPECT_EQ(doc(coset)["result"]["prime"], 5);
  const auto chain = cli("verify --check chain --rank 2 --radius 5");
  ASSERT_EQ(chain.exit_code, 0);
  EXPECT_EQ(doc(chain)["result"]["passed"], true);
}

TEST(Cli, ValidationErrorsExitTwo) {
  for (const char* args : {"net --free 2 --word x1x2", "net --free 2", "ball --rank 2 --radius 99 --enumerate",
                           "bounds --name nope --genus 2", "endo --free 2 --word x1 --bound 9",
                           "census --rank 2 --radius 3 --bogus", "frobnicate"}) {
    const auto r = cli(args);
    EXPECT_EQ(r.exit_code, 2) << args;
  }
  const auto r = cli("net --free 2 --word x1x2");
  const auto j = doc(r);
  EXPECT_EQ(j["error"]["status"], "parse");
  EXPECT_EQ(j["config"]["word"], "x1x2");
  EXPECT_EQ(doc(cli("net --free 2"))["config"]["group"], "free:2");
}

TEST(Cli, OutputIsByteIdenticalAcrossRunsAndWorkers) {
  const auto a = cli("census --rank 2 --radius 5 --L 2 --seed 3 --workers 1");
  const auto b = cli("census --rank 2 --radius 5 --L 2 --seed 3 --workers 4");
  const auto c = cli("census --rank 2 --radius 5 --L 2 --seed 3 --workers 4");
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(b.out, c.out);
  const auto x = cli("verify --check audit --rank 2 --radius 5 --workers 1");
  const auto y = cli("verify --check audit --rank 2 --radius 5 --workers 3");
  ASSERT_EQ(x.exit_code, 0);
  EXPECT_EQ(x.out, y.out);
}

TEST(Cli, OutputDirectoryFromEnvironment) {
  const auto dir = scratch("outdir");
  const std::string env = "TESTEL_OUTPUT_DIR=" + dir.string();
  const auto r = cli("census --rank 2 --radius 3 --L 1 --log census.jsonl --csv census.csv --output doc.json", env);
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "census.jsonl"));
  EXPECT_TRUE(std::filesystem::exists(dir / "census.csv"));
  std::ifstream in(dir / "doc.json");
  std::string written((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(Json::parse(written), doc(r));
  // A second run reuses the logged record and prints the same document.
  const auto again = cli("census --rank 2 --radius 3 --L 1 --log census.jsonl --output doc.json", env);
  EXPECT_EQ(doc(again)["result"]["positive"], doc(r)["result"]["positive"]);
  std::filesystem::remove_all(dir);
}

TEST(Cli, UnwritableOutputFails) {
  const auto r = cli("ball --rank 2 --radius 2 --output /nonexistent/dir/x.json");
  EXPECT_EQ(r.exit_code, 2);
}
