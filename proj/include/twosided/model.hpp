#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twosided/rational.hpp"

namespace twosided {

enum class Side : std::uint8_t { kBuyer = 0, kSeller = 1 };

struct AgentId {
  Side side = Side::kBuyer;
  int index = 0;

  static AgentId buyer(int i) { return {Side::kBuyer, i}; }
  static AgentId seller(int j) { return {Side::kSeller, j}; }
  bool is_buyer() const { return side == Side::kBuyer; }

  friend auto operator<=>(const AgentId&, const AgentId&) = default;
  std::string str() const;
};

using Edge = std::pair<int, int>;  // (buyer index, seller index)

/// Bipartite trading graph. Edges are kept sorted and duplicate free.
class MarketGraph {
 public:
  MarketGraph(int buyers, int sellers, std::vector<Edge> edges);
  static MarketGraph complete(int buyers, int sellers);

  int buyer_count() const { return buyers_; }
  int seller_count() const { return sellers_; }
  const std::vector<Edge>& edges() const { return edges_; }
  bool has_edge(int i, int j) const;
  bool is_complete() const { return complete_; }
  /// Sellers adjacent to buyer i, ascending.
  const std::vector<int>& sellers_of(int i) const { return buyer_adj_[i]; }
  /// Buyers adjacent to seller j, ascending.
  const std::vector<int>& buyers_of(int j) const { return seller_adj_[j]; }

  friend bool operator==(const MarketGraph& a, const MarketGraph& b) {
    return a.buyers_ == b.buyers_ && a.sellers_ == b.sellers_ && a.edges_ == b.edges_;
  }

 private:
  int buyers_;
  int sellers_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> buyer_adj_;
  std::vector<std::vector<int>> seller_adj_;
  bool complete_;
};

/// Realized buyer values and seller costs.
struct ValuationProfile {
  std::vector<Rat> b;
  std::vector<Rat> s;

  const Rat& value_of(const AgentId& a) const { return a.is_buyer() ? b.at(a.index) : s.at(a.index); }
  ValuationProfile with(const AgentId& a, Rat v) const;
  /// Throws unless sizes match the graph and every entry is nonnegative.
  void validate(const MarketGraph& g) const;
  std::uint64_t hash() const;
};

/// Set of (buyer, seller) pairs, stored sorted by buyer index.
class Matching {
 public:
  Matching() = default;
  explicit Matching(std::vector<Edge> pairs);

  const std::vector<Edge>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  bool contains(const Edge& e) const;
  bool contains(const AgentId& a) const;
  std::optional<int> partner_of_buyer(int i) const;
  std::optional<int> partner_of_seller(int j) const;
  /// Throws unless every pair is an edge of g and no agent repeats.
  void validate(const MarketGraph& g) const;

  friend bool operator==(const Matching&, const Matching&) = default;

 private:
  std::vector<Edge> pairs_;
};

Rat gft(const Matching& m, const ValuationProfile& p);

/// Lexicographic comparison by IDs: +1 if m1 ranks higher, -1 if lower, 0 if equal.
int lex_compare(const Matching& m1, const Matching& m2);

enum class Coin : std::uint8_t { kSellerSide = 0, kBuyerSide = 1 };
inline constexpr Coin kBothCoins[2] = {Coin::kSellerSide, Coin::kBuyerSide};
const char* coin_name(Coin c);

struct Trade {
  int buyer = 0;
  int seller = 0;
  Rat buyer_payment;
  Rat seller_receipt;

  friend bool operator==(const Trade&, const Trade&) = default;
};

struct TradeOutcome {
  std::vector<Trade> trades;  // sorted by buyer index
  std::string mechanism;
  std::optional<Coin> coin;

  Matching matching() const;
  Rat gains(const ValuationProfile& p) const;
  const Trade* trade_of(const AgentId& a) const;
  /// Realized utility of agent a with true value/cost `truth`.
  Rat utility(const AgentId& a, const Rat& truth) const;
  void sort_trades();

  friend bool operator==(const TradeOutcome&, const TradeOutcome&) = default;
};

/// Partition of agents into classes of identical neighbor sets.
struct ClassPartition {
  std::vector<int> buyer_class;   // class id per buyer
  std::vector<int> seller_class;  // class id per seller
  int buyer_class_count = 0;
  int seller_class_count = 0;
};

ClassPartition class_partition(const MarketGraph& g);

/// Which matching an alternating-component edge came from.
enum class EdgeSource : std::uint8_t { kFirst, kSecond };

struct AlternatingComponent {
  bool cycle = false;
  /// Vertex sequence. For a cycle the closing edge joins the last vertex back to the first.
  std::vector<AgentId> vertices;
  /// edges[k] joins vertices[k] and vertices[k+1] (cyclically for cycles).
  std::vector<EdgeSource> edges;
};

/// Splits mA ∪ mB into maximal alternating paths and cycles. An edge shared by both
/// matchings becomes a 2-edge cycle on its two endpoints.
std::vector<AlternatingComponent> alternating_decomposition(const Matching& mA, const Matching& mB);

}  // namespace twosided
