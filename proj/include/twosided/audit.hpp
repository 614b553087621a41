#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "twosided/distribution.hpp"
#include "twosided/mechanisms.hpp"
#include "twosided/model.hpp"

namespace twosided {

/// Outcome of one property check. A failed report always names a witness.
struct AuditReport {
  std::string property;
  std::string instance;
  bool passed = true;
  std::optional<std::string> witness;
  Rat margin;             // worst slack seen; meaning depends on the property
  std::int64_t checks = 0;
  bool advisory = false;  // statistical estimate; reported but never decisive

  /// Records a violation unless one is already held, so the first witness wins.
  void record_failure(std::string what);
  /// Folds another report of the same property into this one.
  void merge(const AuditReport& other);
};

/// Product of all agents' finite supports, indexed in mixed radix (buyers first, then sellers;
/// the last seller varies fastest).
class ProfileSpace {
 public:
  /// Throws kBudgetExceeded when the profile count exceeds `budget`.
  ProfileSpace(const Scenario& sc, std::int64_t budget);

  std::int64_t size() const { return size_; }
  int agent_count() const { return static_cast<int>(laws_.size()); }
  AgentId agent(int k) const;
  const Distribution& law(int k) const { return *laws_[k]; }
  /// Atom index of agent k in profile idx.
  int digit(std::int64_t idx, int k) const { return static_cast<int>((idx / stride_[k]) % radix_[k]); }
  std::int64_t with_digit(std::int64_t idx, int k, int d) const {
    return idx + (static_cast<std::int64_t>(d) - digit(idx, k)) * stride_[k];
  }
  ValuationProfile profile(std::int64_t idx) const;
  Rat probability(std::int64_t idx) const;

 private:
  int buyers_;
  std::vector<const Distribution*> laws_;
  std::vector<std::int64_t> radix_;
  std::vector<std::int64_t> stride_;
  std::int64_t size_ = 1;
};

inline constexpr std::int64_t kDefaultProfileBudget = 1000000;

using MechanismFn = std::function<TradeOutcome(const ValuationProfile&, Coin)>;

/// Per-trade IR for both sides and weak (or strong) direct-trade budget balance.
AuditReport audit_ex_post(const TradeOutcome& outcome, const ValuationProfile& p, bool strong = false);
/// Per-trade IR only, for mechanisms that balance the budget ex ante rather than per trade.
AuditReport audit_ex_post_ir(const TradeOutcome& outcome, const ValuationProfile& p);

/// Interim regret of every agent, type and misreport, separately for each coin value.
/// margin is the largest regret found; passes iff it is <= 0.
AuditReport audit_bic_exact(const Scenario& sc, const MechanismFn& mech, const std::string& label,
                            std::int64_t budget = kDefaultProfileBudget);
AuditReport audit_bic_exact(const Scenario& sc, MechanismKind k, std::int64_t budget = kDefaultProfileBudget);

/// Regret of every misreport on every single profile and coin.
AuditReport audit_ex_post_ic(const Scenario& sc, const MechanismFn& mech, const std::string& label,
                             std::int64_t budget = kDefaultProfileBudget);
AuditReport audit_ex_post_ic(const Scenario& sc, MechanismKind k, std::int64_t budget = kDefaultProfileBudget);

/// Coin-averaged GFT of mechanism k is at least half the coin-averaged GFT of the virtual mechanism.
AuditReport check_half_rvwm(MechanismKind k, const Scenario& sc, const ValuationProfile& p);

/// Realized fraction of the first-best GFT: alpha and beta bounds when they reach 1/2, and the
/// (q-1)/q bound on complete graphs with q >= 2.
AuditReport check_expost_ratio(const TradeOutcome& outcome, const MarketGraph& g, const ValuationProfile& p);

/// Structure of the first-best matching against each virtual matching: shared-edge cycles,
/// paths that open with the favoured side on a first-best edge, interior agents surviving the
/// removal of their partner, and the dichotomy on odd paths.
AuditReport check_alternating_paths(const Scenario& sc, const ValuationProfile& p);

/// Largest expected GFT of any BIC, interim IR, ex-ante weakly budget balanced mechanism for one
/// buyer and one seller with finite supports.
Rat second_best_bilateral(const Distribution& buyer, const Distribution& seller);

/// Expected first-best GFT for one buyer and one seller with finite supports.
Rat first_best_bilateral(const Distribution& buyer, const Distribution& seller);

}  // namespace twosided
