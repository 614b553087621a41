#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twosided/bilateral.hpp"
#include "twosided/distribution.hpp"
#include "twosided/matching.hpp"
#include "twosided/model.hpp"

namespace twosided {

/// Market graph plus the prior of every agent.
struct Scenario {
  MarketGraph graph;
  std::vector<Distribution> buyer_dists;
  std::vector<Distribution> seller_dists;

  /// Throws unless the distribution lists match the graph.
  void validate() const;
  /// Throws unless every entry of p lies in its agent's support.
  void check_in_support(const ValuationProfile& p) const;
};

enum class MechanismKind {
  kTrDa,
  kHybridDa,
  kTrMatching,
  kOffering,
  kHybridMatching,
  kRvwm,
  kGsom,
  kGbom,
  kNaiveMax,
  kNaiveQSwitch,
};

const char* mechanism_id(MechanismKind k);
MechanismKind parse_mechanism(const std::string& id);
const std::vector<MechanismKind>& all_mechanisms();
/// Mechanisms restricted to complete bipartite graphs.
bool requires_complete_graph(MechanismKind k);
/// False when the outcome ignores the coin.
bool uses_coin(MechanismKind k);
/// True for mechanisms whose trades are claimed ex-post budget balanced per pair.
bool direct_trade_balanced(MechanismKind k);

enum class NaiveMaxRule {
  kExpected,  // TR's realized GFT against RVWM's coin-averaged GFT
  kRealized,  // TR's realized GFT against RVWM's GFT under the drawn coin
};

struct MechanismOptions {
  NaiveMaxRule naive_max = NaiveMaxRule::kExpected;
};

TradeOutcome run_tr_da(const MarketGraph& g, const ValuationProfile& p);
TradeOutcome run_tr_matching(const MarketGraph& g, const ValuationProfile& p);
TradeOutcome run_hybrid_da(const Scenario& sc, const ValuationProfile& p, Coin coin);
TradeOutcome run_offering_matching(const Scenario& sc, const ValuationProfile& p, Coin coin);
TradeOutcome run_hybrid_matching(const Scenario& sc, const ValuationProfile& p, Coin coin);

/// Buyer weights are ironed virtual values, seller weights negated costs.
NodeWeights gsom_weights(const Scenario& sc, const ValuationProfile& p);
/// Buyer weights are values, seller weights negated ironed virtual costs.
NodeWeights gbom_weights(const Scenario& sc, const ValuationProfile& p);
Matching run_gsom(const Scenario& sc, const ValuationProfile& p);
Matching run_gbom(const Scenario& sc, const ValuationProfile& p);

/// Critical report of a matched agent: the lowest winning bid of a buyer or the highest
/// winning cost of a seller, searched over the agent's support.
Rat critical_report(const Scenario& sc, const ValuationProfile& p, Coin rule, const AgentId& a);
/// Trades the seller-side (kSellerSide) or buyer-side virtual matching at critical prices.
TradeOutcome run_rvwm(const Scenario& sc, const ValuationProfile& p, Coin coin);
/// Coin-averaged GFT of the two virtual matchings, using true values.
Rat rvwm_expected_gft(const Scenario& sc, const ValuationProfile& p);

TradeOutcome run_naive_max(const Scenario& sc, const ValuationProfile& p, Coin coin,
                           NaiveMaxRule rule = NaiveMaxRule::kExpected);
TradeOutcome run_naive_qswitch(const Scenario& sc, const ValuationProfile& p, Coin coin);

TradeOutcome run_mechanism(MechanismKind k, const Scenario& sc, const ValuationProfile& p, Coin coin,
                           const MechanismOptions& opt = {});
/// Average GFT over both coin values.
Rat expected_gft(MechanismKind k, const Scenario& sc, const ValuationProfile& p, const MechanismOptions& opt = {});

/// Offer constraints the offering mechanism uses on first-best pair (i, j).
RoParams offering_params(const Scenario& sc, const ValuationProfile& p, int i, int j);

}  // namespace twosided
