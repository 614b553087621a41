#include "twosided/twosided.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "twosided/error.hpp"
#include "twosided/io.hpp"
#include "twosided/sim.hpp"

struct ts_scenario {
  twosided::Scenario sc;
};

struct ts_report {
  std::string json;
  std::string csv;
  bool passed = true;
};

namespace {

using twosided::ErrorKind;

thread_local std::string last_error;

ts_status status_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::kInvalidArgument:
      return TS_ERR_INVALID_ARGUMENT;
    case ErrorKind::kPrecondition:
      return TS_ERR_PRECONDITION;
    case ErrorKind::kOutOfSupport:
      return TS_ERR_OUT_OF_SUPPORT;
    case ErrorKind::kSchema:
      return TS_ERR_SCHEMA;
    case ErrorKind::kBudgetExceeded:
      return TS_ERR_BUDGET_EXCEEDED;
    case ErrorKind::kIo:
      return TS_ERR_IO;
    case ErrorKind::kInternal:
      return TS_ERR_INTERNAL;
  }
  return TS_ERR_INTERNAL;
}

// Runs body, translating exceptions into a status and the thread's last error.
template <class F>
ts_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return TS_OK;
  } catch (const twosided::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown failure";
  }
  return TS_ERR_INTERNAL;
}

ts_status null_argument(const char* what) {
  last_error = std::string("null argument: ") + what;
  return TS_ERR_NULL_ARGUMENT;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

twosided::MechanismKind mechanism_arg(const char* id) {
  twosided::require(id != nullptr, ErrorKind::kInvalidArgument, "no mechanism given");
  return twosided::parse_mechanism(id);
}

}  // namespace

extern "C" {

const char* ts_version(void) { return "0.1.0"; }

const char* ts_last_error(void) { return last_error.c_str(); }

const char* ts_status_name(ts_status s) {
  switch (s) {
    case TS_OK:
      return "ok";
    case TS_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case TS_ERR_PRECONDITION:
      return "precondition violated";
    case TS_ERR_OUT_OF_SUPPORT:
      return "value out of support";
    case TS_ERR_SCHEMA:
      return "schema error";
    case TS_ERR_BUDGET_EXCEEDED:
      return "budget exceeded";
    case TS_ERR_IO:
      return "i/o error";
    case TS_ERR_INTERNAL:
      return "internal error";
    case TS_ERR_NULL_ARGUMENT:
      return "null argument";
  }
  return "unknown status";
}

void ts_string_free(char* s) { std::free(s); }

int ts_mechanism_count(void) { return static_cast<int>(twosided::all_mechanisms().size()); }

const char* ts_mechanism_name(int index) {
  const auto& all = twosided::all_mechanisms();
  if (index < 0 || index >= static_cast<int>(all.size())) return nullptr;
  return twosided::mechanism_id(all[static_cast<std::size_t>(index)]);
}

ts_status ts_scenario_load(const char* path, ts_scenario** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] { *out = new ts_scenario{twosided::load_scenario(path)}; });
}

ts_status ts_scenario_parse(const char* json, ts_scenario** out) {
  if (!json) return null_argument("json");
  if (!out) return null_argument("out");
  return guarded([&] { *out = new ts_scenario{twosided::parse_scenario(json)}; });
}

ts_status ts_scenario_example(int which, int n, ts_scenario** out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = new ts_scenario{twosided::example_scenario(which, n)}; });
}

ts_status ts_scenario_counts(const ts_scenario* sc, int* buyers, int* sellers) {
  if (!sc) return null_argument("scenario");
  if (buyers) *buyers = sc->sc.graph.buyer_count();
  if (sellers) *sellers = sc->sc.graph.seller_count();
  return TS_OK;
}

ts_status ts_scenario_json(const ts_scenario* sc, char** out) {
  if (!sc) return null_argument("scenario");
  if (!out) return null_argument("out");
  return guarded([&] { *out = copy_string(twosided::scenario_json(sc->sc)); });
}

void ts_scenario_free(ts_scenario* sc) { delete sc; }

void ts_run_options_init(ts_run_options* opt) {
  if (!opt) return;
  twosided::RunConfig d;
  opt->mechanism = twosided::mechanism_id(d.mechanism);
  opt->replications = d.replications;
  opt->seed = d.seed;
  opt->enumerate = 0;
  opt->threads = d.threads;
  opt->budget = d.budget;
  opt->keep_rows = d.keep_rows ? 1 : 0;
  opt->naive_max_realized = 0;
}

void ts_audit_options_init(ts_audit_options* opt) {
  if (!opt) return;
  twosided::AuditConfig d;
  opt->mechanism = "hybrid-da";
  opt->exhaustive = d.exhaustive ? 1 : 0;
  opt->samples = d.samples;
  opt->seed = d.seed;
  opt->budget = d.budget;
}

void ts_example_options_init(ts_example_options* opt) {
  if (!opt) return;
  twosided::ExampleConfig d;
  opt->n = d.n;
  opt->replications = d.replications;
  opt->draws = d.draws;
  opt->seed = d.seed;
  opt->threads = d.threads;
}

ts_status ts_run(const ts_scenario* sc, const ts_run_options* opt, ts_report** out) {
  if (!sc) return null_argument("scenario");
  if (!opt) return null_argument("options");
  if (!out) return null_argument("out");
  return guarded([&] {
    twosided::RunConfig cfg;
    cfg.mechanism = mechanism_arg(opt->mechanism);
    cfg.replications = opt->replications;
    cfg.seed = opt->seed;
    cfg.mode = opt->enumerate ? twosided::RunMode::kEnumerate : twosided::RunMode::kMonteCarlo;
    cfg.threads = opt->threads;
    cfg.budget = opt->budget;
    cfg.keep_rows = opt->keep_rows != 0;
    cfg.options.naive_max = opt->naive_max_realized ? twosided::NaiveMaxRule::kRealized : twosided::NaiveMaxRule::kExpected;
    auto rep = twosided::run_replications(sc->sc, cfg);
    *out = new ts_report{rep.json(), rep.csv(), rep.passed()};
  });
}

ts_status ts_audit(const ts_scenario* sc, const ts_audit_options* opt, ts_report** out) {
  if (!sc) return null_argument("scenario");
  if (!opt) return null_argument("options");
  if (!out) return null_argument("out");
  return guarded([&] {
    twosided::AuditConfig cfg;
    cfg.exhaustive = opt->exhaustive != 0;
    cfg.samples = opt->samples;
    cfg.seed = opt->seed;
    cfg.budget = opt->budget;
    auto reports = twosided::audit_scenario(sc->sc, mechanism_arg(opt->mechanism), cfg);
    bool ok = true;
    for (const auto& r : reports) ok = ok && (r.passed || r.advisory);
    *out = new ts_report{twosided::audit_json(reports), std::string(), ok};
  });
}

ts_status ts_example(int which, const ts_example_options* opt, ts_report** out) {
  if (!opt) return null_argument("options");
  if (!out) return null_argument("out");
  return guarded([&] {
    twosided::ExampleConfig cfg;
    cfg.n = opt->n;
    cfg.replications = opt->replications;
    cfg.draws = opt->draws;
    cfg.seed = opt->seed;
    cfg.threads = opt->threads;
    auto rep = twosided::reproduce_example(which, cfg);
    *out = new ts_report{rep.json(), rep.csv(), rep.passed()};
  });
}

ts_status ts_run_profile(const ts_scenario* sc, const char* mechanism, const char* profile_json, ts_coin coin,
                         char** outcome_json) {
  if (!sc) return null_argument("scenario");
  if (!profile_json) return null_argument("profile_json");
  if (!outcome_json) return null_argument("outcome_json");
  return guarded([&] {
    twosided::require(coin == TS_COIN_SELLER_SIDE || coin == TS_COIN_BUYER_SIDE, ErrorKind::kInvalidArgument,
                      "unknown coin value");
    auto k = mechanism_arg(mechanism);
    auto p = twosided::parse_profile(profile_json);
    p.validate(sc->sc.graph);
    sc->sc.check_in_support(p);
    auto c = coin == TS_COIN_SELLER_SIDE ? twosided::Coin::kSellerSide : twosided::Coin::kBuyerSide;
    *outcome_json = copy_string(twosided::outcome_json(twosided::run_mechanism(k, sc->sc, p, c)));
  });
}

ts_status ts_report_json(const ts_report* r, const char** out) {
  if (!r) return null_argument("report");
  if (!out) return null_argument("out");
  *out = r->json.c_str();
  return TS_OK;
}

ts_status ts_report_csv(const ts_report* r, const char** out) {
  if (!r) return null_argument("report");
  if (!out) return null_argument("out");
  *out = r->csv.c_str();
  return TS_OK;
}

ts_status ts_report_passed(const ts_report* r, int* passed) {
  if (!r) return null_argument("report");
  if (!passed) return null_argument("passed");
  *passed = r->passed ? 1 : 0;
  return TS_OK;
}

void ts_report_free(ts_report* r) { delete r; }

}  // extern "C"
