#include "twosided/model.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "twosided/error.hpp"

namespace twosided {

std::string AgentId::str() const { return (is_buyer() ? "buyer " : "seller ") + std::to_string(index); }

MarketGraph::MarketGraph(int buyers, int sellers, std::vector<Edge> edges)
    : buyers_(buyers), sellers_(sellers), edges_(std::move(edges)) {
  require(buyers_ >= 0 && sellers_ >= 0, ErrorKind::kInvalidArgument, "negative agent count");
  std::sort(edges_.begin(), edges_.end());
  require(std::adjacent_find(edges_.begin(), edges_.end()) == edges_.end(), ErrorKind::kInvalidArgument,
          "duplicate edge");
  buyer_adj_.assign(buyers_, {});
  seller_adj_.assign(sellers_, {});
  for (const auto& [i, j] : edges_) {
    require(i >= 0 && i < buyers_ && j >= 0 && j < sellers_, ErrorKind::kInvalidArgument,
            "edge (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
    buyer_adj_[i].push_back(j);
    seller_adj_[j].push_back(i);
  }
  for (auto& v : seller_adj_) std::sort(v.begin(), v.end());
  complete_ = static_cast<long long>(edges_.size()) == static_cast<long long>(buyers_) * sellers_;
}

MarketGraph MarketGraph::complete(int buyers, int sellers) {
  std::vector<Edge> e;
  e.reserve(static_cast<std::size_t>(buyers) * sellers);
  for (int i = 0; i < buyers; ++i)
    for (int j = 0; j < sellers; ++j) e.emplace_back(i, j);
  return {buyers, sellers, std::move(e)};
}

bool MarketGraph::has_edge(int i, int j) const {
  if (i < 0 || i >= buyers_ || j < 0 || j >= sellers_) return false;
  if (complete_) return true;
  const auto& adj = buyer_adj_[i];
  return std::binary_search(adj.begin(), adj.end(), j);
}

ValuationProfile ValuationProfile::with(const AgentId& a, Rat v) const {
  ValuationProfile q = *this;
  (a.is_buyer() ? q.b : q.s).at(a.index) = std::move(v);
  return q;
}

void ValuationProfile::validate(const MarketGraph& g) const {
  require(static_cast<int>(b.size()) == g.buyer_count() && static_cast<int>(s.size()) == g.seller_count(),
          ErrorKind::kInvalidArgument, "profile dimensions do not match the graph");
  for (const auto& v : b) require(v.sign() >= 0, ErrorKind::kInvalidArgument, "negative buyer value");
  for (const auto& v : s) require(v.sign() >= 0, ErrorKind::kInvalidArgument, "negative seller cost");
}

std::uint64_t ValuationProfile::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t x) {
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  for (const auto& v : b) mix(v.hash());
  mix(0x5eed);
  for (const auto& v : s) mix(v.hash());
  return h;
}

Matching::Matching(std::vector<Edge> pairs) : pairs_(std::move(pairs)) {
  std::sort(pairs_.begin(), pairs_.end());
  std::set<int> bs;
  std::set<int> ss;
  for (const auto& [i, j] : pairs_) {
    require(bs.insert(i).second && ss.insert(j).second, ErrorKind::kInvalidArgument,
            "agent appears twice in a matching");
  }
}

bool Matching::contains(const Edge& e) const { return std::binary_search(pairs_.begin(), pairs_.end(), e); }

bool Matching::contains(const AgentId& a) const {
  return a.is_buyer() ? partner_of_buyer(a.index).has_value() : partner_of_seller(a.index).has_value();
}

std::optional<int> Matching::partner_of_buyer(int i) const {
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), Edge{i, -1});
  if (it != pairs_.end() && it->first == i) return it->second;
  return std::nullopt;
}

std::optional<int> Matching::partner_of_seller(int j) const {
  for (const auto& [i, jj] : pairs_)
    if (jj == j) return i;
  return std::nullopt;
}

void Matching::validate(const MarketGraph& g) const {
  for (const auto& [i, j] : pairs_) {
    require(g.has_edge(i, j), ErrorKind::kInvalidArgument,
            "pair (" + std::to_string(i) + "," + std::to_string(j) + ") is not an edge");
  }
}

Rat gft(const Matching& m, const ValuationProfile& p) {
  Rat total;
  for (const auto& [i, j] : m.pairs()) {
    require(i >= 0 && i < static_cast<int>(p.b.size()) && j >= 0 && j < static_cast<int>(p.s.size()),
            ErrorKind::kInvalidArgument, "matching does not fit the profile");
    total += p.b[i] - p.s[j];
  }
  return total;
}

int lex_compare(const Matching& m1, const Matching& m2) {
  const auto& a = m1.pairs();
  const auto& b = m2.pairs();
  for (std::size_t k = 0;; ++k) {
    bool ha = k < a.size();
    bool hb = k < b.size();
    if (!ha && !hb) return 0;
    if (ha != hb) return ha ? 1 : -1;
    if (a[k].first != b[k].first) return a[k].first < b[k].first ? 1 : -1;
    if (a[k].second != b[k].second) return a[k].second < b[k].second ? 1 : -1;
  }
}

const char* coin_name(Coin c) { return c == Coin::kSellerSide ? "seller-side" : "buyer-side"; }

Matching TradeOutcome::matching() const {
  std::vector<Edge> e;
  e.reserve(trades.size());
  for (const auto& t : trades) e.emplace_back(t.buyer, t.seller);
  return Matching(std::move(e));
}

Rat TradeOutcome::gains(const ValuationProfile& p) const { return gft(matching(), p); }

const Trade* TradeOutcome::trade_of(const AgentId& a) const {
  for (const auto& t : trades) {
    if ((a.is_buyer() && t.buyer == a.index) || (!a.is_buyer() && t.seller == a.index)) return &t;
  }
  return nullptr;
}

Rat TradeOutcome::utility(const AgentId& a, const Rat& truth) const {
  const Trade* t = trade_of(a);
  if (t == nullptr) return {};
  return a.is_buyer() ? truth - t->buyer_payment : t->seller_receipt - truth;
}

void TradeOutcome::sort_trades() {
  std::sort(trades.begin(), trades.end(), [](const Trade& x, const Trade& y) { return x.buyer < y.buyer; });
}

ClassPartition class_partition(const MarketGraph& g) {
  ClassPartition cp;
  std::map<std::vector<int>, int> ids;
  cp.buyer_class.resize(g.buyer_count());
  for (int i = 0; i < g.buyer_count(); ++i) {
    auto [it, fresh] = ids.emplace(g.sellers_of(i), static_cast<int>(ids.size()));
    cp.buyer_class[i] = it->second;
  }
  cp.buyer_class_count = static_cast<int>(ids.size());
  ids.clear();
  cp.seller_class.resize(g.seller_count());
  for (int j = 0; j < g.seller_count(); ++j) {
    auto [it, fresh] = ids.emplace(g.buyers_of(j), static_cast<int>(ids.size()));
    cp.seller_class[j] = it->second;
  }
  cp.seller_class_count = static_cast<int>(ids.size());
  return cp;
}

namespace {

struct HalfEdge {
  AgentId to;
  EdgeSource src;
  int id;
};

}  // namespace

std::vector<AlternatingComponent> alternating_decomposition(const Matching& mA, const Matching& mB) {
  std::map<AgentId, std::vector<HalfEdge>> adj;
  std::vector<AlternatingComponent> out;
  int next_id = 0;
  auto add = [&](const Edge& e, EdgeSource src) {
    AgentId b = AgentId::buyer(e.first);
    AgentId s = AgentId::seller(e.second);
    adj[b].push_back({s, src, next_id});
    adj[s].push_back({b, src, next_id});
    ++next_id;
  };
  for (const auto& e : mA.pairs()) {
    if (mB.contains(e)) {
      out.push_back({true, {AgentId::buyer(e.first), AgentId::seller(e.second)},
                     {EdgeSource::kFirst, EdgeSource::kSecond}});
    } else {
      add(e, EdgeSource::kFirst);
    }
  }
  for (const auto& e : mB.pairs()) {
    if (!mA.contains(e)) add(e, EdgeSource::kSecond);
  }

  std::vector<bool> used(next_id, false);
  auto walk = [&](AgentId start, bool cycle) {
    AlternatingComponent c;
    c.cycle = cycle;
    c.vertices.push_back(start);
    AgentId cur = start;
    for (;;) {
      const HalfEdge* nxt = nullptr;
      for (const auto& h : adj[cur]) {
        if (!used[h.id]) {
          nxt = &h;
          break;
        }
      }
      if (nxt == nullptr) break;
      used[nxt->id] = true;
      c.edges.push_back(nxt->src);
      cur = nxt->to;
      if (cycle && cur == start) break;
      c.vertices.push_back(cur);
    }
    return c;
  };
  // Paths first, each walked from its smaller endpoint (buyers before sellers, then by index).
  for (const auto& [v, hs] : adj) {
    if (hs.size() == 1 && !used[hs[0].id]) out.push_back(walk(v, false));
  }
  for (const auto& [v, hs] : adj) {
    bool open = std::any_of(hs.begin(), hs.end(), [&](const HalfEdge& h) { return !used[h.id]; });
    if (open) out.push_back(walk(v, true));
  }
  return out;
}

}  // namespace twosided
