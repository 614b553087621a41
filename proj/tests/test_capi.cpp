#include <cstring>
#include <string>
#include <thread>

#include "doctest.h"
#include "json.hpp"
#include "twosided/twosided.h"

namespace {

const std::string kDir = std::string(TWOSIDED_SOURCE_DIR) + "/scenarios/";

ts_scenario* load(const std::string& name) {
  ts_scenario* sc = nullptr;
  REQUIRE(ts_scenario_load((kDir + name).c_str(), &sc) == TS_OK);
  REQUIRE(sc != nullptr);
  return sc;
}

nlohmann::json report_json(const ts_report* r) {
  const char* text = nullptr;
  REQUIRE(ts_report_json(r, &text) == TS_OK);
  return nlohmann::json::parse(text);
}

}  // namespace

TEST_CASE("version and mechanism names") {
  CHECK(std::string(ts_version()) == "0.1.0");
  REQUIRE(ts_mechanism_count() == 10);
  CHECK(std::string(ts_mechanism_name(1)) == "hybrid-da");
  CHECK(ts_mechanism_name(-1) == nullptr);
  CHECK(ts_mechanism_name(10) == nullptr);
  CHECK(std::string(ts_status_name(TS_ERR_SCHEMA)) == "schema error");
}

TEST_CASE("scenario handles") {
  ts_scenario* sc = load("matching_3x3.json");
  int buyers = 0, sellers = 0;
  CHECK(ts_scenario_counts(sc, &buyers, &sellers) == TS_OK);
  CHECK(buyers == 3);
  CHECK(sellers == 3);
  char* text = nullptr;
  REQUIRE(ts_scenario_json(sc, &text) == TS_OK);
  ts_scenario* again = nullptr;
  CHECK(ts_scenario_parse(text, &again) == TS_OK);
  char* text2 = nullptr;
  REQUIRE(ts_scenario_json(again, &text2) == TS_OK);
  CHECK(std::strcmp(text, text2) == 0);
  ts_string_free(text);
  ts_string_free(text2);
  ts_scenario_free(again);
  ts_scenario_free(sc);
  ts_scenario_free(nullptr);
}

TEST_CASE("errors map to status codes with a message") {
  ts_scenario* sc = nullptr;
  CHECK(ts_scenario_load("/nonexistent.json", &sc) == TS_ERR_IO);
  CHECK(sc == nullptr);
  CHECK(std::string(ts_last_error()).find("/nonexistent.json") != std::string::npos);

  CHECK(ts_scenario_parse(R"({"graph": {"buyers": 1, "sellers": 1, "complete": true}, "buyer_dists": []})", &sc) ==
        TS_ERR_SCHEMA);
  CHECK(std::string(ts_last_error()).find("buyer_dists") != std::string::npos);

  CHECK(ts_scenario_parse(nullptr, &sc) == TS_ERR_NULL_ARGUMENT);
  CHECK(ts_scenario_example(9, 2, &sc) == TS_ERR_INVALID_ARGUMENT);

  sc = load("example2.json");
  ts_run_options opt;
  ts_run_options_init(&opt);
  opt.mechanism = "no-such-mechanism";
  ts_report* r = nullptr;
  CHECK(ts_run(sc, &opt, &r) == TS_ERR_INVALID_ARGUMENT);
  CHECK(r == nullptr);
  opt.mechanism = "tr-da";
  opt.enumerate = 1;
  CHECK(ts_run(sc, &opt, &r) == TS_ERR_PRECONDITION);

  char* out = nullptr;
  CHECK(ts_run_profile(sc, "tr-da", R"({"b": ["100", "1"], "s": ["0", "0"]})", TS_COIN_SELLER_SIDE, &out) ==
        TS_ERR_OUT_OF_SUPPORT);
  CHECK(out == nullptr);
  ts_scenario_free(sc);

  CHECK(ts_report_passed(nullptr, nullptr) == TS_ERR_NULL_ARGUMENT);
}

TEST_CASE("last error is per thread") {
  ts_scenario* sc = nullptr;
  CHECK(ts_scenario_load("/nonexistent.json", &sc) == TS_ERR_IO);
  std::string other;
  std::thread t([&] { other = ts_last_error(); });
  t.join();
  CHECK(other.empty());
  CHECK_FALSE(std::string(ts_last_error()).empty());
}

TEST_CASE("run reports through the C interface are deterministic") {
  ts_scenario* sc = nullptr;
  REQUIRE(ts_scenario_example(1, 4, &sc) == TS_OK);
  ts_run_options opt;
  ts_run_options_init(&opt);
  opt.mechanism = "hybrid-da";
  opt.replications = 30;
  ts_report* a = nullptr;
  ts_report* b = nullptr;
  REQUIRE(ts_run(sc, &opt, &a) == TS_OK);
  opt.threads = 3;
  REQUIRE(ts_run(sc, &opt, &b) == TS_OK);
  CHECK(report_json(a) == report_json(b));
  int passed = 0;
  CHECK(ts_report_passed(a, &passed) == TS_OK);
  CHECK(passed == 1);
  const char* csv = nullptr;
  CHECK(ts_report_csv(a, &csv) == TS_OK);
  CHECK(std::string(csv).rfind("replication,profile_hash", 0) == 0);
  auto j = report_json(a);
  CHECK(j["params"]["mechanism"] == "hybrid-da");
  CHECK(j["counts"]["replications"] == 30);
  ts_report_free(a);
  ts_report_free(b);
  ts_scenario_free(sc);
}

TEST_CASE("enumerated run and exhaustive audit") {
  ts_scenario* sc = load("bilateral.json");
  ts_run_options opt;
  ts_run_options_init(&opt);
  opt.mechanism = "rvwm";
  opt.enumerate = 1;
  ts_report* r = nullptr;
  REQUIRE(ts_run(sc, &opt, &r) == TS_OK);
  auto j = report_json(r);
  CHECK(j["counts"]["profiles"] == 9);
  CHECK(j["estimates"]["first_best_gft"]["exact"] == "14/9");
  ts_report_free(r);

  ts_audit_options a;
  ts_audit_options_init(&a);
  a.mechanism = "hybrid-da";
  REQUIRE(ts_audit(sc, &a, &r) == TS_OK);
  int passed = 0;
  ts_report_passed(r, &passed);
  CHECK(passed == 1);
  CHECK(report_json(r)["reports"].size() >= 4);
  ts_report_free(r);
  ts_scenario_free(sc);
}

TEST_CASE("single outcome") {
  ts_scenario* sc = load("double_auction_3x3.json");
  char* out = nullptr;
  REQUIRE(ts_run_profile(sc, "tr-da", R"({"b": ["9", "8", "6"], "s": ["0", "1", "2"]})", TS_COIN_BUYER_SIDE, &out) ==
          TS_OK);
  auto j = nlohmann::json::parse(out);
  ts_string_free(out);
  // three efficient pairs; the least valuable one is reduced and sets the prices
  REQUIRE(j["trades"].size() == 2);
  CHECK(j["trades"][0]["buyer_payment"] == "6/1");
  CHECK(j["trades"][0]["seller_receipt"] == "2/1");
  CHECK(j["mechanism"] == "tr-da");
  ts_scenario_free(sc);
}

TEST_CASE("examples through the C interface") {
  ts_example_options opt;
  ts_example_options_init(&opt);
  CHECK(opt.n == 400);
  CHECK(opt.draws == 200000);
  opt.draws = 2000;
  ts_report* r = nullptr;
  REQUIRE(ts_example(3, &opt, &r) == TS_OK);
  auto j = report_json(r);
  CHECK(j["kind"] == "example-3");
  CHECK(j["estimates"].contains("trade_probability_at_24"));
  ts_report_free(r);
  CHECK(ts_example(0, &opt, &r) == TS_ERR_INVALID_ARGUMENT);
}
