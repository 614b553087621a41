#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "twosided/audit.hpp"
#include "twosided/mechanisms.hpp"

namespace twosided {

enum class RunMode { kMonteCarlo, kEnumerate };

struct RunConfig {
  MechanismKind mechanism = MechanismKind::kHybridDa;
  std::int64_t replications = 1000;  // ignored in enumerate mode
  std::uint64_t seed = 1;
  RunMode mode = RunMode::kMonteCarlo;
  MechanismOptions options;
  int threads = 1;
  std::int64_t budget = kDefaultProfileBudget;
  bool keep_rows = true;
};

/// One mechanism run on one profile under one coin value.
struct ReplicationRow {
  std::int64_t replication = 0;
  std::uint64_t profile_hash = 0;
  std::string mechanism;
  Coin coin = Coin::kSellerSide;
  Rat gft;
  Rat opt;
  int q = 0;
  Rat alpha;
  Rat beta;
  bool ir_ok = true;
  bool bb_ok = true;
};

/// Sample mean with a 95% normal half-width; enumerate mode fills `exact` and leaves the width 0.
struct Estimate {
  double mean = 0;
  double half_width = 0;
  std::int64_t samples = 0;
  std::optional<Rat> exact;
};

struct SimReport {
  std::string kind;
  std::map<std::string, std::string> params;
  std::map<std::string, Estimate> estimates;
  std::map<std::string, std::int64_t> counts;
  std::map<std::string, bool> checks;
  std::vector<ReplicationRow> rows;

  bool passed() const;
  /// Canonical JSON: keys sorted, fixed number formatting, no row data.
  std::string json() const;
  /// Header plus one line per row: replication, profile hash, mechanism, coin, gft, opt, q, alpha,
  /// beta, ir_ok, bb_ok.
  std::string csv() const;
};

/// Deterministic in (scenario, config): replication r draws its profile from substream(seed, r)
/// regardless of the thread count.
SimReport run_replications(const Scenario& sc, const RunConfig& cfg);

struct ExampleConfig {
  int n = 400;                       // market size for the large uniform market
  std::int64_t replications = 200;   // its replications
  std::int64_t draws = 200000;       // Monte Carlo draws for the interim trade probabilities
  std::uint64_t seed = 1;
  int threads = 1;
};

/// 1: n-by-n uniform double auction comparing first-best, trade reduction, RVWM and hybrid.
/// 2 and 3: interim trade probability of the second buyer at values 24 and 26 under the
/// max-of-GFT rule and the q-switch rule respectively.
SimReport reproduce_example(int which, const ExampleConfig& cfg);
/// Scenario used by the example; n only matters for example 1.
Scenario example_scenario(int which, int n = 2);

struct AuditConfig {
  bool exhaustive = true;
  std::int64_t samples = 2000;  // sampled profiles when not exhaustive
  std::uint64_t seed = 1;
  std::int64_t budget = kDefaultProfileBudget;
};

/// Every property the mechanism claims: exact over all profiles when exhaustive (finite supports
/// required), otherwise per-profile checks on sampled profiles plus an advisory regret estimate.
std::vector<AuditReport> audit_scenario(const Scenario& sc, MechanismKind k, const AuditConfig& cfg);

/// Mechanisms with a realized-GFT guarantee relative to the first best.
bool has_ratio_guarantee(MechanismKind k);
/// True when mechanism k settles profile p through its offer stage, whose trades balance exactly.
bool offer_stage(MechanismKind k, const Scenario& sc, const ValuationProfile& p);
/// Mechanisms claimed BIC; the naive switching rules are not.
bool claims_bic(MechanismKind k);
/// Mechanisms claimed ex-post IC (dominant strategies) rather than only BIC.
bool claims_ex_post_ic(MechanismKind k);

}  // namespace twosided
