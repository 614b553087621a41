#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

struct Result {
  int status = -1;
  std::string out;
};

Result run(const std::string& args) {
  std::string cmd = std::string(TWOSIDED_CLI) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string scenario(const std::string& name) { return std::string(TWOSIDED_SOURCE_DIR) + "/scenarios/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("mechanisms subcommand lists every identifier") {
  Result r = run("mechanisms");
  CHECK(r.status == 0);
  for (const char* id : {"tr-da", "hybrid-da", "tr-matching", "offering", "hybrid-matching", "rvwm", "naive-max",
                         "naive-qswitch"})
    CHECK(r.out.find(id) != std::string::npos);
}

TEST_CASE("run writes a deterministic JSON summary and CSV") {
  const std::string out = "cli_run.json", csv = "cli_run.csv";
  Result r = run("run --scenario " + scenario("example2.json") + " --mechanism naive-max --reps 40 --seed 3 --out " +
                 out + " --csv " + csv);
  CHECK(r.status == 0);
  auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["params"]["mechanism"] == "naive-max");
  CHECK(j["counts"]["replications"] == 40);
  CHECK(j["passed"] == true);
  std::string rows = slurp(csv);
  CHECK(std::count(rows.begin(), rows.end(), '\n') == 81);

  Result again = run("run --scenario " + scenario("example2.json") + " --mechanism naive-max --reps 40 --seed 3");
  CHECK(again.out == slurp(out));
}

TEST_CASE("enumerate mode gives exact expectations") {
  Result r = run("run --scenario " + scenario("bilateral.json") + " --mechanism offering --enumerate");
  CHECK(r.status == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["params"]["mode"] == "enumerate");
  CHECK(j["estimates"]["first_best_gft"]["exact"] == "14/9");
}

TEST_CASE("audit exit codes follow the verdict") {
  Result ok = run("audit --scenario " + scenario("double_auction_3x3.json") + " --mechanism hybrid-da --exhaustive");
  CHECK(ok.status == 0);
  CHECK(nlohmann::json::parse(ok.out)["passed"] == true);

  Result sampled = run("audit --scenario " + scenario("uniform_4x4.json") + " --mechanism tr-da --samples 30");
  CHECK(sampled.status == 0);
}

TEST_CASE("usage and input errors exit nonzero") {
  CHECK(run("").status == 2);
  CHECK(run("run --bogus").status == 2);
  CHECK(run("--help").status == 0);
  CHECK(run("run --scenario /nonexistent.json").status != 0);
  CHECK(run("run --scenario " + scenario("example2.json") + " --mechanism bogus").status == 3);
  CHECK(run("run --scenario " + scenario("example2.json") + " --mechanism tr-da --enumerate").status == 3);
  CHECK(run("example 7").status == 2);

  const std::string bad = "cli_bad.json";
  std::ofstream(bad) << "{\"graph\": {\"buyers\": 1}}";
  CHECK(run("run --scenario " + bad).status == 3);
}

TEST_CASE("example and scenario subcommands") {
  Result e = run("example 3 --draws 500 --seed 2");
  CHECK(e.status == 0);
  auto j = nlohmann::json::parse(e.out);
  CHECK(j["kind"] == "example-3");
  CHECK(j["params"]["seed"] == "2");

  Result s = run("scenario 2");
  CHECK(s.status == 0);
  CHECK(nlohmann::json::parse(s.out) == nlohmann::json::parse(slurp(scenario("example2.json"))));
}

TEST_CASE("outcome subcommand") {
  Result r = run("outcome --scenario " + scenario("double_auction_3x3.json") +
                 R"( --mechanism hybrid-da --profile '{"b": ["9", "3", "1"], "s": ["0", "7", "6"]}' --coin buyer)");
  CHECK(r.status == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["coin"] == "buyer-side");
  CHECK(j["mechanism"] == "hybrid-da");
}
