#pragma once

#include <map>
#include <vector>

#include "twosided/model.hpp"
#include "twosided/rational.hpp"

namespace twosided {

/// Node-based weights: edge (i,j) weighs buyer[i] + seller[j].
struct NodeWeights {
  std::vector<Rat> buyer;
  std::vector<Rat> seller;

  static NodeWeights first_best(const ValuationProfile& p);
  Rat edge(int i, int j) const { return buyer[i] + seller[j]; }
  Rat of(const Matching& m) const;
};

/// Agents removed from a solve. Indices keep their original IDs for tie-breaking.
struct Exclusion {
  std::vector<int> buyers;
  std::vector<int> sellers;

  static Exclusion of(const AgentId& a);
  Exclusion with(const AgentId& a) const;
};

enum class MatchingAlgorithm {
  kAuto,
  kSortedComplete,  // complete graphs only; sort by weight with index tie-breaks
  kSubsetDp,        // exact table over seller subsets; small seller counts
  kAssignment,      // Hungarian optimum plus greedy edge fixing
};

/// Maximum-weight matching; among optima, the lex_compare-highest one.
Matching max_weight_matching(const MarketGraph& g, const NodeWeights& w, const Exclusion& ex = {},
                             MatchingAlgorithm algo = MatchingAlgorithm::kAuto);

/// Optimal total weight only.
Rat max_weight_value(const MarketGraph& g, const NodeWeights& w, const Exclusion& ex = {},
                     MatchingAlgorithm algo = MatchingAlgorithm::kAuto);

/// Smallest weight at which agent a, matched under w, still belongs to every optimum:
/// W(M without a) minus the weight of M excluding a's own node.
Rat critical_weight(const MarketGraph& g, const NodeWeights& w, const AgentId& a, const Exclusion& ex = {});

Matching first_best(const MarketGraph& g, const ValuationProfile& p);
Rat optimal_gft(const MarketGraph& g, const ValuationProfile& p);
Matching matching_without(const MarketGraph& g, const ValuationProfile& p, const AgentId& a);

/// P_i = W(M_{-i}) - W(M) + b_i.
Rat vcg_buyer_payment(const MarketGraph& g, const ValuationProfile& p, int i);
/// P_j = W(M) - W(M_{-j}) + s_j.
Rat vcg_seller_payment(const MarketGraph& g, const ValuationProfile& p, int j);

/// Largest k with k-th highest value >= k-th lowest cost (double auctions).
int efficient_trade_size_q(const ValuationProfile& p);

struct ClassStats {
  ClassPartition classes;
  Matching first_best;
  std::vector<int> buyer_q, buyer_d;    // per buyer class
  std::vector<int> seller_q, seller_d;  // per seller class
  std::map<std::pair<int, int>, int> cross;  // (buyer class, seller class) -> matched pairs
  Rat alpha{1};
  Rat beta{1};
};

ClassStats class_stats(const MarketGraph& g, const ValuationProfile& p);

/// Threshold bid of buyer i in the market without seller j (infinite if i can never win there).
RatOrInf buyer_threshold(const MarketGraph& g, const ValuationProfile& p, int i, int j);
/// Threshold cost of seller j in the market without buyer i (0 if j never wins there).
Rat seller_threshold(const MarketGraph& g, const ValuationProfile& p, int i, int j);

}  // namespace twosided
