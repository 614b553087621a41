// Command-line front end; talks to the library only through the C interface.
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "twosided/twosided.h"

namespace {

constexpr int kExitFailedCheck = 1;
constexpr int kExitUsage = 2;
constexpr int kExitError = 3;

struct ApiError {
  ts_status status;
  std::string message;
};

void check(ts_status s) {
  if (s != TS_OK) throw ApiError{s, ts_last_error()};
}

void write_text(const std::string& path, const char* text) {
  if (path.empty() || path == "-") {
    std::fputs(text, stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ApiError{TS_ERR_IO, "cannot write " + path};
  out << text;
  if (!out) throw ApiError{TS_ERR_IO, "failed writing " + path};
}

// Owns a scenario handle.
class Scenario {
 public:
  explicit Scenario(const std::string& path) { check(ts_scenario_load(path.c_str(), &h_)); }
  Scenario(int example, int n) { check(ts_scenario_example(example, n, &h_)); }
  ~Scenario() { ts_scenario_free(h_); }
  Scenario(const Scenario&) = delete;
  Scenario& operator=(const Scenario&) = delete;
  const ts_scenario* get() const { return h_; }

 private:
  ts_scenario* h_ = nullptr;
};

// Writes the report and returns the exit code its checks imply.
int finish(ts_report* r, const std::string& out, const std::string& csv) {
  const char* text = nullptr;
  int passed = 0;
  ts_status s = ts_report_json(r, &text);
  if (s == TS_OK) s = ts_report_passed(r, &passed);
  try {
    check(s);
    write_text(out, text);
    if (!csv.empty()) {
      check(ts_report_csv(r, &text));
      write_text(csv, text);
    }
  } catch (...) {
    ts_report_free(r);
    throw;
  }
  ts_report_free(r);
  return passed ? 0 : kExitFailedCheck;
}

std::string mechanism_list() {
  std::string s;
  for (int k = 0; k < ts_mechanism_count(); ++k) s += (k ? ", " : "") + std::string(ts_mechanism_name(k));
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-sided market mechanisms: simulation, audits and worked examples"};
  app.set_version_flag("--version", std::string(ts_version()));
  app.require_subcommand(1);

  std::string scenario_path, mechanism = "hybrid-da", out, csv;
  std::uint64_t seed = 1;
  int threads = 1;

  ts_run_options run;
  ts_run_options_init(&run);
  bool enumerate = false, realized = false;
  auto* run_cmd = app.add_subcommand("run", "Simulate a mechanism on a scenario");
  run_cmd->add_option("-s,--scenario", scenario_path, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("-m,--mechanism", mechanism, "Mechanism: " + mechanism_list())->capture_default_str();
  run_cmd->add_option("-r,--reps", run.replications, "Monte Carlo replications")->capture_default_str();
  run_cmd->add_option("--seed", seed, "Base seed")->capture_default_str();
  run_cmd->add_flag("--enumerate", enumerate, "Exact expectation over every profile (finite supports)");
  run_cmd->add_option("--budget", run.budget, "Profile limit for --enumerate")->capture_default_str();
  run_cmd->add_option("-j,--threads", threads, "Worker threads; results do not depend on it")->capture_default_str();
  run_cmd->add_flag("--naive-max-realized", realized, "naive-max compares against the drawn coin's GFT");
  run_cmd->add_option("-o,--out", out, "JSON summary path (default stdout)");
  run_cmd->add_option("--csv", csv, "Per-replication CSV path");

  ts_audit_options audit;
  ts_audit_options_init(&audit);
  bool exhaustive = false;
  auto* audit_cmd = app.add_subcommand("audit", "Check every property the mechanism claims; exits 1 on a violation");
  audit_cmd->add_option("-s,--scenario", scenario_path, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  audit_cmd->add_option("-m,--mechanism", mechanism, "Mechanism: " + mechanism_list())->capture_default_str();
  audit_cmd->add_flag("--exhaustive", exhaustive, "Enumerate every profile and run the exact checks (finite supports)");
  audit_cmd->add_option("--samples", audit.samples, "Profiles drawn when not exhaustive")->capture_default_str();
  audit_cmd->add_option("--seed", seed, "Sampling seed")->capture_default_str();
  audit_cmd->add_option("--budget", audit.budget, "Profile limit for exact checks")->capture_default_str();
  audit_cmd->add_option("-o,--out", out, "JSON report path (default stdout)");

  ts_example_options ex;
  ts_example_options_init(&ex);
  int which = 0;
  auto* ex_cmd = app.add_subcommand("example", "Reproduce a worked example (1: large uniform market, 2 and 3: interim trade probabilities)");
  ex_cmd->add_option("which", which, "Example number")->required()->check(CLI::Range(1, 3));
  ex_cmd->add_option("-n,--n", ex.n, "Market size for example 1")->capture_default_str();
  ex_cmd->add_option("-r,--reps", ex.replications, "Replications for example 1")->capture_default_str();
  ex_cmd->add_option("--draws", ex.draws, "Monte Carlo draws for examples 2 and 3")->capture_default_str();
  ex_cmd->add_option("--seed", seed, "Base seed")->capture_default_str();
  ex_cmd->add_option("-j,--threads", threads, "Worker threads")->capture_default_str();
  ex_cmd->add_option("-o,--out", out, "JSON summary path (default stdout)");
  ex_cmd->add_option("--csv", csv, "Per-row CSV path");

  std::string profile, coin = "seller";
  auto* outcome_cmd = app.add_subcommand("outcome", "Run a mechanism once on a given profile");
  outcome_cmd->add_option("-s,--scenario", scenario_path, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  outcome_cmd->add_option("-m,--mechanism", mechanism, "Mechanism: " + mechanism_list())->capture_default_str();
  outcome_cmd->add_option("-p,--profile", profile, R"(Reports as JSON, e.g. {"b": ["3"], "s": ["1/2"]})")->required();
  outcome_cmd->add_option("-c,--coin", coin, "Coin value: seller or buyer")
      ->check(CLI::IsMember({"seller", "buyer"}))
      ->capture_default_str();

  int scenario_example = 0, scenario_n = 2;
  auto* scen_cmd = app.add_subcommand("scenario", "Print a built-in example's scenario as JSON");
  scen_cmd->add_option("which", scenario_example, "Example number")->required()->check(CLI::Range(1, 3));
  scen_cmd->add_option("-n,--n", scenario_n, "Market size for example 1")->capture_default_str();

  auto* mech_cmd = app.add_subcommand("mechanisms", "List mechanism identifiers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run_cmd) {
      Scenario sc(scenario_path);
      run.mechanism = mechanism.c_str();
      run.seed = seed;
      run.threads = threads;
      run.enumerate = enumerate ? 1 : 0;
      run.keep_rows = csv.empty() ? 0 : 1;
      run.naive_max_realized = realized ? 1 : 0;
      ts_report* r = nullptr;
      check(ts_run(sc.get(), &run, &r));
      return finish(r, out, csv);
    }
    if (*audit_cmd) {
      Scenario sc(scenario_path);
      audit.mechanism = mechanism.c_str();
      audit.exhaustive = exhaustive ? 1 : 0;
      audit.seed = seed;
      ts_report* r = nullptr;
      check(ts_audit(sc.get(), &audit, &r));
      return finish(r, out, "");
    }
    if (*ex_cmd) {
      ex.seed = seed;
      ex.threads = threads;
      ts_report* r = nullptr;
      check(ts_example(which, &ex, &r));
      return finish(r, out, csv);
    }
    if (*outcome_cmd) {
      Scenario sc(scenario_path);
      char* text = nullptr;
      check(ts_run_profile(sc.get(), mechanism.c_str(), profile.c_str(),
                           coin == "seller" ? TS_COIN_SELLER_SIDE : TS_COIN_BUYER_SIDE, &text));
      std::fputs(text, stdout);
      ts_string_free(text);
      return 0;
    }
    if (*scen_cmd) {
      Scenario sc(scenario_example, scenario_n);
      char* text = nullptr;
      check(ts_scenario_json(sc.get(), &text));
      std::fputs(text, stdout);
      ts_string_free(text);
      return 0;
    }
    if (*mech_cmd) {
      for (int k = 0; k < ts_mechanism_count(); ++k) std::puts(ts_mechanism_name(k));
      return 0;
    }
  } catch (const ApiError& e) {
    std::cerr << "error (" << ts_status_name(e.status) << "): " << e.message << "\n";
    return kExitError;
  }
  return 0;
}
