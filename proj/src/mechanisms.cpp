#include "twosided/mechanisms.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "twosided/error.hpp"

namespace twosided {

void Scenario::validate() const {
  require(static_cast<int>(buyer_dists.size()) == graph.buyer_count(), ErrorKind::kInvalidArgument,
          "expected " + std::to_string(graph.buyer_count()) + " buyer distributions, got " +
              std::to_string(buyer_dists.size()));
  require(static_cast<int>(seller_dists.size()) == graph.seller_count(), ErrorKind::kInvalidArgument,
          "expected " + std::to_string(graph.seller_count()) + " seller distributions, got " +
              std::to_string(seller_dists.size()));
}

void Scenario::check_in_support(const ValuationProfile& p) const {
  p.validate(graph);
  for (std::size_t i = 0; i < p.b.size(); ++i)
    require(buyer_dists[i].in_support(p.b[i]), ErrorKind::kOutOfSupport,
            "value " + p.b[i].str() + " of buyer " + std::to_string(i) + " is outside " + buyer_dists[i].describe());
  for (std::size_t j = 0; j < p.s.size(); ++j)
    require(seller_dists[j].in_support(p.s[j]), ErrorKind::kOutOfSupport,
            "cost " + p.s[j].str() + " of seller " + std::to_string(j) + " is outside " + seller_dists[j].describe());
}

namespace {

struct KindInfo {
  MechanismKind kind;
  const char* id;
  bool complete_only;
  bool coin;
  bool balanced;
};

constexpr KindInfo kKinds[] = {
    {MechanismKind::kTrDa, "tr-da", true, false, true},
    {MechanismKind::kHybridDa, "hybrid-da", true, true, true},
    {MechanismKind::kTrMatching, "tr-matching", false, false, true},
    {MechanismKind::kOffering, "offering", false, true, true},
    {MechanismKind::kHybridMatching, "hybrid-matching", false, true, true},
    {MechanismKind::kRvwm, "rvwm", false, true, false},
    {MechanismKind::kGsom, "gsom", false, false, false},
    {MechanismKind::kGbom, "gbom", false, false, false},
    {MechanismKind::kNaiveMax, "naive-max", true, true, false},
    {MechanismKind::kNaiveQSwitch, "naive-qswitch", true, true, false},
};

const KindInfo& info(MechanismKind k) {
  for (const auto& x : kKinds)
    if (x.kind == k) return x;
  fail(ErrorKind::kInternal, "unknown mechanism kind");
}

void require_complete(const MarketGraph& g, const char* who) {
  require(g.is_complete(), ErrorKind::kPrecondition, std::string(who) + " needs a complete bipartite graph");
}

// Buyers by value descending, sellers by cost ascending; ties to the lower index.
bool buyer_ahead(const ValuationProfile& p, int x, int y) {
  auto c = p.b[x] <=> p.b[y];
  return c != 0 ? c > 0 : x < y;
}

bool seller_ahead(const ValuationProfile& p, int x, int y) {
  auto c = p.s[x] <=> p.s[y];
  return c != 0 ? c < 0 : x < y;
}

// Renames agents of one side so that each class keeps exactly its winners:
// kept members that lost are replaced, in index order, by winners left out.
void swap_into_winners(std::vector<Edge>& edges, bool buyers, const std::vector<int>& cls,
                       const std::map<int, std::vector<int>>& winners) {
  std::map<int, std::set<int>> kept;
  for (const auto& e : edges) {
    int a = buyers ? e.first : e.second;
    kept[cls[a]].insert(a);
  }
  std::map<int, int> rename;
  for (const auto& [t, members] : kept) {
    auto it = winners.find(t);
    std::set<int> win;
    if (it != winners.end()) win.insert(it->second.begin(), it->second.end());
    std::vector<int> out, in;
    std::set_difference(members.begin(), members.end(), win.begin(), win.end(), std::back_inserter(out));
    std::set_difference(win.begin(), win.end(), members.begin(), members.end(), std::back_inserter(in));
    require(out.size() == in.size(), ErrorKind::kInternal, "trade reduction left unbalanced classes");
    for (std::size_t k = 0; k < out.size(); ++k) rename[out[k]] = in[k];
  }
  for (auto& e : edges) {
    int& a = buyers ? e.first : e.second;
    if (auto r = rename.find(a); r != rename.end()) a = r->second;
  }
}

// Class-wise trade reduction on the first-best matching m.
TradeOutcome reduce_trades(const ValuationProfile& p, const Matching& m, const std::vector<int>& bcls,
                           const std::vector<int>& scls, const char* label) {
  std::map<int, std::vector<int>> bmem, smem;
  std::map<int, std::set<int>> bpart, spart;
  std::map<std::pair<int, int>, std::vector<Edge>> groups;
  for (const auto& [i, j] : m.pairs()) {
    bmem[bcls[i]].push_back(i);
    smem[scls[j]].push_back(j);
    bpart[bcls[i]].insert(scls[j]);
    spart[scls[j]].insert(bcls[i]);
    groups[{bcls[i], scls[j]}].push_back({i, j});
  }

  std::map<int, std::vector<int>> bwin, swin;
  std::map<int, Rat> bprice, sprice;
  for (auto& [t, mem] : bmem) {
    std::sort(mem.begin(), mem.end(), [&](int x, int y) { return buyer_ahead(p, x, y); });
    std::size_t keep = mem.size() - bpart[t].size();
    bwin[t].assign(mem.begin(), mem.begin() + static_cast<long>(keep));
    bprice[t] = p.b[mem[keep]];
  }
  for (auto& [t, mem] : smem) {
    std::sort(mem.begin(), mem.end(), [&](int x, int y) { return seller_ahead(p, x, y); });
    std::size_t keep = mem.size() - spart[t].size();
    swin[t].assign(mem.begin(), mem.begin() + static_cast<long>(keep));
    sprice[t] = p.s[mem[keep]];
  }

  // drop the edge of the weakest buyer in every class pair, then swap in the winners
  std::vector<Edge> edges;
  for (auto& [key, list] : groups) {
    auto worst = std::max_element(list.begin(), list.end(),
                                  [&](const Edge& x, const Edge& y) { return buyer_ahead(p, x.first, y.first); });
    for (auto it = list.begin(); it != list.end(); ++it)
      if (it != worst) edges.push_back(*it);
  }
  swap_into_winners(edges, true, bcls, bwin);
  swap_into_winners(edges, false, scls, swin);

  TradeOutcome out;
  out.mechanism = label;
  for (const auto& [i, j] : edges) out.trades.push_back({i, j, bprice[bcls[i]], sprice[scls[j]]});
  out.sort_trades();
  return out;
}

struct DaRanking {
  std::vector<int> buyers;
  std::vector<int> sellers;
};

DaRanking rank_da(const ValuationProfile& p) {
  DaRanking r;
  for (int i = 0; i < static_cast<int>(p.b.size()); ++i) r.buyers.push_back(i);
  for (int j = 0; j < static_cast<int>(p.s.size()); ++j) r.sellers.push_back(j);
  std::sort(r.buyers.begin(), r.buyers.end(), [&](int x, int y) { return buyer_ahead(p, x, y); });
  std::sort(r.sellers.begin(), r.sellers.end(), [&](int x, int y) { return seller_ahead(p, x, y); });
  return r;
}

const Distribution& dist_of(const Scenario& sc, const AgentId& a) {
  return a.is_buyer() ? sc.buyer_dists.at(a.index) : sc.seller_dists.at(a.index);
}

// Node weight of agent a reporting r under the given virtual rule.
Rat report_weight(const Scenario& sc, Coin rule, const AgentId& a, const Rat& r) {
  const Distribution& d = dist_of(sc, a);
  if (a.is_buyer()) return rule == Coin::kSellerSide ? ironed_virtual_value(d, r) : r;
  return rule == Coin::kSellerSide ? -r : -ironed_virtual_cost(d, r);
}

NodeWeights rule_weights(const Scenario& sc, const ValuationProfile& p, Coin rule) {
  return rule == Coin::kSellerSide ? gsom_weights(sc, p) : gbom_weights(sc, p);
}

bool has_atom_at(const Distribution& d, const Rat& x) {
  return d.is_discrete() && std::any_of(d.atoms().begin(), d.atoms().end(), [&](const Atom& a) { return a.value == x; });
}

// Buyer law given value >= floor. An atom exactly at the floor stays only if the buyer would still
// face this seller there; otherwise the conditioning is strict.
Distribution buyer_target(const Distribution& d, const Rat& floor, const std::function<bool()>& holds_at_floor) {
  if (!has_atom_at(d, floor) || holds_at_floor()) return condition_at_least(d, floor);
  auto above = std::find_if(d.atoms().begin(), d.atoms().end(), [&](const Atom& a) { return a.value > floor; });
  return above == d.atoms().end() ? condition_at_least(d, floor) : condition_at_least(d, above->value);
}

Distribution seller_target(const Distribution& d, const RatOrInf& cap, const std::function<bool()>& holds_at_cap) {
  if (cap.is_inf()) return d;
  const Rat& c = cap.value();
  if (!has_atom_at(d, c) || holds_at_cap()) return condition_at_most(d, c);
  auto below = std::find_if(d.atoms().rbegin(), d.atoms().rend(), [&](const Atom& a) { return a.value < c; });
  return below == d.atoms().rend() ? condition_at_most(d, c) : condition_at_most(d, below->value);
}

// Pair the double-auction offer stage would use, if it runs.
std::optional<Edge> da_offer_pair(const ValuationProfile& p) {
  if (efficient_trade_size_q(p) >= 2) return std::nullopt;
  DaRanking r = rank_da(p);
  return Edge{r.buyers.front(), r.sellers.front()};
}

}  // namespace

const char* mechanism_id(MechanismKind k) { return info(k).id; }

MechanismKind parse_mechanism(const std::string& id) {
  for (const auto& x : kKinds)
    if (id == x.id) return x.kind;
  fail(ErrorKind::kInvalidArgument, "unknown mechanism '" + id + "'");
}

const std::vector<MechanismKind>& all_mechanisms() {
  static const std::vector<MechanismKind> v = [] {
    std::vector<MechanismKind> r;
    for (const auto& x : kKinds) r.push_back(x.kind);
    return r;
  }();
  return v;
}

bool requires_complete_graph(MechanismKind k) { return info(k).complete_only; }
bool uses_coin(MechanismKind k) { return info(k).coin; }
bool direct_trade_balanced(MechanismKind k) { return info(k).balanced; }

TradeOutcome run_tr_da(const MarketGraph& g, const ValuationProfile& p) {
  require_complete(g, "tr-da");
  p.validate(g);
  Matching m = first_best(g, p);
  if (m.size() <= 1) return TradeOutcome{{}, "tr-da", std::nullopt};
  std::vector<int> bcls(p.b.size(), 0), scls(p.s.size(), 0);
  return reduce_trades(p, m, bcls, scls, "tr-da");
}

TradeOutcome run_tr_matching(const MarketGraph& g, const ValuationProfile& p) {
  p.validate(g);
  ClassStats st = class_stats(g, p);
  return reduce_trades(p, st.first_best, st.classes.buyer_class, st.classes.seller_class, "tr-matching");
}

TradeOutcome run_hybrid_da(const Scenario& sc, const ValuationProfile& p, Coin coin) {
  require_complete(sc.graph, "hybrid-da");
  p.validate(sc.graph);
  TradeOutcome out;
  if (efficient_trade_size_q(p) >= 2) {
    out = run_tr_da(sc.graph, p);
  } else {
    DaRanking r = rank_da(p);
    int i = r.buyers.front();
    int j = r.sellers.front();
    RoParams prm;
    prm.so_cap = r.sellers.size() > 1 ? RatOrInf(p.s[r.sellers[1]]) : RatOrInf::infinity();
    prm.bo_floor = r.buyers.size() > 1 ? p.b[r.buyers[1]] : Rat{};
    const Edge pair{i, j};
    prm.so_target = buyer_target(sc.buyer_dists.at(i), prm.bo_floor,
                                 [&] { return da_offer_pair(p.with(AgentId::buyer(i), prm.bo_floor)) == pair; });
    prm.bo_target = seller_target(sc.seller_dists.at(j), prm.so_cap, [&] {
      return da_offer_pair(p.with(AgentId::seller(j), prm.so_cap.value())) == pair;
    });
    auto ro = run_ro(p.s[j], p.b[i], prm, coin);
    if (ro.traded) out.trades.push_back({i, j, *ro.price, *ro.price});
  }
  out.mechanism = "hybrid-da";
  out.coin = coin;
  return out;
}

RoParams offering_params(const Scenario& sc, const ValuationProfile& p, int i, int j) {
  RoParams prm;
  prm.so_cap = buyer_threshold(sc.graph, p, i, j);
  prm.bo_floor = seller_threshold(sc.graph, p, i, j);
  const Edge pair{i, j};
  prm.so_target = buyer_target(sc.buyer_dists.at(i), prm.bo_floor, [&] {
    return first_best(sc.graph, p.with(AgentId::buyer(i), prm.bo_floor)).contains(pair);
  });
  prm.bo_target = seller_target(sc.seller_dists.at(j), prm.so_cap, [&] {
    return first_best(sc.graph, p.with(AgentId::seller(j), prm.so_cap.value())).contains(pair);
  });
  return prm;
}

TradeOutcome run_offering_matching(const Scenario& sc, const ValuationProfile& p, Coin coin) {
  p.validate(sc.graph);
  TradeOutcome out;
  out.mechanism = "offering";
  out.coin = coin;
  Matching m = first_best(sc.graph, p);
  for (const auto& [i, j] : m.pairs()) {
    auto ro = run_ro(p.s[j], p.b[i], offering_params(sc, p, i, j), coin);
    if (ro.traded) out.trades.push_back({i, j, *ro.price, *ro.price});
  }
  return out;
}

TradeOutcome run_hybrid_matching(const Scenario& sc, const ValuationProfile& p, Coin coin) {
  ClassStats st = class_stats(sc.graph, p);
  TradeOutcome out = st.alpha >= Rat(1, 2) ? run_tr_matching(sc.graph, p) : run_offering_matching(sc, p, coin);
  out.mechanism = "hybrid-matching";
  out.coin = coin;
  return out;
}

NodeWeights gsom_weights(const Scenario& sc, const ValuationProfile& p) {
  NodeWeights w;
  for (std::size_t i = 0; i < p.b.size(); ++i) w.buyer.push_back(ironed_virtual_value(sc.buyer_dists.at(i), p.b[i]));
  for (const auto& c : p.s) w.seller.push_back(-c);
  return w;
}

NodeWeights gbom_weights(const Scenario& sc, const ValuationProfile& p) {
  NodeWeights w;
  w.buyer = p.b;
  for (std::size_t j = 0; j < p.s.size(); ++j) w.seller.push_back(-ironed_virtual_cost(sc.seller_dists.at(j), p.s[j]));
  return w;
}

Matching run_gsom(const Scenario& sc, const ValuationProfile& p) {
  return max_weight_matching(sc.graph, gsom_weights(sc, p));
}

Matching run_gbom(const Scenario& sc, const ValuationProfile& p) {
  return max_weight_matching(sc.graph, gbom_weights(sc, p));
}

namespace {

// Critical report of a matched agent given the rule's weights and the full optimum value.
Rat critical_from(const Scenario& sc, const ValuationProfile& p, Coin rule, const AgentId& a, const NodeWeights& w,
                  const Rat& full) {
  const Rat& own = a.is_buyer() ? w.buyer[a.index] : w.seller[a.index];
  Rat theta = max_weight_value(sc.graph, w, Exclusion::of(a)) - (full - own);
  const Distribution& d = dist_of(sc, a);
  const Rat& truth = p.value_of(a);
  bool virt = (rule == Coin::kSellerSide) == a.is_buyer();
  Rat r;

  if (!d.is_discrete()) {
    // weights are strictly monotone and continuous in the report; invert and clamp
    if (a.is_buyer()) {
      r = virt ? (theta + d.hi()) / Rat(2) : theta;
    } else {
      r = virt ? (d.lo() - theta) / Rat(2) : -theta;
    }
    r = max(d.lo(), min(d.hi(), r));
  } else {
    auto wins = [&](const Rat& report) {
      Rat wt = report_weight(sc, rule, a, report);
      if (wt != theta) return wt > theta;
      return max_weight_matching(sc.graph, rule_weights(sc, p.with(a, report), rule)).contains(a);
    };
    std::optional<Rat> found;
    const auto& atoms = d.atoms();
    if (a.is_buyer()) {
      for (auto it = atoms.begin(); it != atoms.end() && !found; ++it)
        if (wins(it->value)) found = it->value;
    } else {
      for (auto it = atoms.rbegin(); it != atoms.rend() && !found; ++it)
        if (wins(it->value)) found = it->value;
    }
    require(found.has_value(), ErrorKind::kInternal, "no winning report found for " + a.str());
    r = *found;
  }
  require(a.is_buyer() ? r <= truth : r >= truth, ErrorKind::kInternal,
          "allocation is not monotone in the report of " + a.str());
  return r;
}

}  // namespace

Rat critical_report(const Scenario& sc, const ValuationProfile& p, Coin rule, const AgentId& a) {
  NodeWeights w = rule_weights(sc, p, rule);
  require(max_weight_matching(sc.graph, w).contains(a), ErrorKind::kPrecondition,
          a.str() + " does not trade, so it has no critical report");
  return critical_from(sc, p, rule, a, w, max_weight_value(sc.graph, w));
}

TradeOutcome run_rvwm(const Scenario& sc, const ValuationProfile& p, Coin coin) {
  sc.check_in_support(p);
  NodeWeights w = rule_weights(sc, p, coin);
  Matching m = max_weight_matching(sc.graph, w);
  Rat full = max_weight_value(sc.graph, w);
  TradeOutcome out;
  out.mechanism = "rvwm";
  out.coin = coin;
  for (const auto& [i, j] : m.pairs()) {
    out.trades.push_back({i, j, critical_from(sc, p, coin, AgentId::buyer(i), w, full),
                          critical_from(sc, p, coin, AgentId::seller(j), w, full)});
  }
  return out;
}

Rat rvwm_expected_gft(const Scenario& sc, const ValuationProfile& p) {
  return (gft(run_gsom(sc, p), p) + gft(run_gbom(sc, p), p)) / Rat(2);
}

TradeOutcome run_naive_max(const Scenario& sc, const ValuationProfile& p, Coin coin, NaiveMaxRule rule) {
  require_complete(sc.graph, "naive-max");
  TradeOutcome tr = run_tr_da(sc.graph, p);
  Rat rival = rule == NaiveMaxRule::kExpected
                  ? rvwm_expected_gft(sc, p)
                  : gft(coin == Coin::kSellerSide ? run_gsom(sc, p) : run_gbom(sc, p), p);
  // ties go to the virtual mechanism, so a market with no trade-reduction gains runs it
  TradeOutcome out = tr.gains(p) > rival ? tr : run_rvwm(sc, p, coin);
  out.mechanism = "naive-max";
  out.coin = coin;
  return out;
}

TradeOutcome run_naive_qswitch(const Scenario& sc, const ValuationProfile& p, Coin coin) {
  require_complete(sc.graph, "naive-qswitch");
  p.validate(sc.graph);
  TradeOutcome out = efficient_trade_size_q(p) >= 2 ? run_tr_da(sc.graph, p) : run_rvwm(sc, p, coin);
  out.mechanism = "naive-qswitch";
  out.coin = coin;
  return out;
}

TradeOutcome run_mechanism(MechanismKind k, const Scenario& sc, const ValuationProfile& p, Coin coin,
                           const MechanismOptions& opt) {
  TradeOutcome out;
  switch (k) {
    case MechanismKind::kTrDa:
      return run_tr_da(sc.graph, p);
    case MechanismKind::kTrMatching:
      return run_tr_matching(sc.graph, p);
    case MechanismKind::kHybridDa:
      return run_hybrid_da(sc, p, coin);
    case MechanismKind::kOffering:
      return run_offering_matching(sc, p, coin);
    case MechanismKind::kHybridMatching:
      return run_hybrid_matching(sc, p, coin);
    case MechanismKind::kRvwm:
      return run_rvwm(sc, p, coin);
    case MechanismKind::kGsom:
      out = run_rvwm(sc, p, Coin::kSellerSide);
      break;
    case MechanismKind::kGbom:
      out = run_rvwm(sc, p, Coin::kBuyerSide);
      break;
    case MechanismKind::kNaiveMax:
      return run_naive_max(sc, p, coin, opt.naive_max);
    case MechanismKind::kNaiveQSwitch:
      return run_naive_qswitch(sc, p, coin);
  }
  out.mechanism = mechanism_id(k);
  out.coin.reset();
  return out;
}

Rat expected_gft(MechanismKind k, const Scenario& sc, const ValuationProfile& p, const MechanismOptions& opt) {
  if (!uses_coin(k)) return run_mechanism(k, sc, p, Coin::kSellerSide, opt).gains(p);
  Rat total;
  for (Coin c : kBothCoins) total += run_mechanism(k, sc, p, c, opt).gains(p);
  return total / Rat(2);
}

}  // namespace twosided
