#ifndef TWOSIDED_H
#define TWOSIDED_H

/* C interface to the two-sided market library. Handles are opaque; every call returns a
 * ts_status and writes results through out-parameters. On failure the calling thread's
 * ts_last_error() holds a message. Strings returned through `const char**` are owned by the
 * handle they came from; strings returned through `char**` are released with ts_string_free. */

#include <stdint.h>

#if defined(_WIN32)
#define TS_API __declspec(dllexport)
#else
#define TS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ts_status {
  TS_OK = 0,
  TS_ERR_INVALID_ARGUMENT = 1,
  TS_ERR_PRECONDITION = 2,
  TS_ERR_OUT_OF_SUPPORT = 3,
  TS_ERR_SCHEMA = 4,
  TS_ERR_BUDGET_EXCEEDED = 5,
  TS_ERR_IO = 6,
  TS_ERR_INTERNAL = 7,
  TS_ERR_NULL_ARGUMENT = 8
} ts_status;

typedef enum ts_coin { TS_COIN_SELLER_SIDE = 0, TS_COIN_BUYER_SIDE = 1 } ts_coin;

typedef struct ts_scenario ts_scenario;
typedef struct ts_report ts_report;

TS_API const char* ts_version(void);
TS_API const char* ts_last_error(void);
TS_API const char* ts_status_name(ts_status s);
TS_API void ts_string_free(char* s);

/* Mechanism identifiers, e.g. "hybrid-da"; index runs from 0 to ts_mechanism_count() - 1. */
TS_API int ts_mechanism_count(void);
TS_API const char* ts_mechanism_name(int index);

TS_API ts_status ts_scenario_load(const char* path, ts_scenario** out);
TS_API ts_status ts_scenario_parse(const char* json, ts_scenario** out);
/* Scenario of a built-in example (1, 2 or 3); n sets the market size of example 1. */
TS_API ts_status ts_scenario_example(int which, int n, ts_scenario** out);
TS_API ts_status ts_scenario_counts(const ts_scenario* sc, int* buyers, int* sellers);
TS_API ts_status ts_scenario_json(const ts_scenario* sc, char** out);
TS_API void ts_scenario_free(ts_scenario* sc);

typedef struct ts_run_options {
  const char* mechanism;
  int64_t replications;
  uint64_t seed;
  int enumerate;          /* exact expectation over all profiles instead of sampling */
  int threads;
  int64_t budget;         /* profile limit for enumeration */
  int keep_rows;
  int naive_max_realized; /* naive-max compares against the drawn coin's GFT */
} ts_run_options;

typedef struct ts_audit_options {
  const char* mechanism;
  int exhaustive;
  int64_t samples;
  uint64_t seed;
  int64_t budget;
} ts_audit_options;

typedef struct ts_example_options {
  int n;
  int64_t replications;
  int64_t draws;
  uint64_t seed;
  int threads;
} ts_example_options;

TS_API void ts_run_options_init(ts_run_options* opt);
TS_API void ts_audit_options_init(ts_audit_options* opt);
TS_API void ts_example_options_init(ts_example_options* opt);

TS_API ts_status ts_run(const ts_scenario* sc, const ts_run_options* opt, ts_report** out);
TS_API ts_status ts_audit(const ts_scenario* sc, const ts_audit_options* opt, ts_report** out);
TS_API ts_status ts_example(int which, const ts_example_options* opt, ts_report** out);

/* One mechanism run on a profile given as {"b": [...], "s": [...]}; writes the outcome as JSON. */
TS_API ts_status ts_run_profile(const ts_scenario* sc, const char* mechanism, const char* profile_json, ts_coin coin,
                                char** outcome_json);

TS_API ts_status ts_report_json(const ts_report* r, const char** out);
/* Per-row CSV; empty for audit reports. */
TS_API ts_status ts_report_csv(const ts_report* r, const char** out);
TS_API ts_status ts_report_passed(const ts_report* r, int* passed);
TS_API void ts_report_free(ts_report* r);

#ifdef __cplusplus
}
#endif

#endif
