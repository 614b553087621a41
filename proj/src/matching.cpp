#include "twosided/matching.hpp"

#include <algorithm>

#include "twosided/error.hpp"

namespace twosided {

NodeWeights NodeWeights::first_best(const ValuationProfile& p) {
  NodeWeights w;
  w.buyer = p.b;
  w.seller.reserve(p.s.size());
  for (const auto& c : p.s) w.seller.push_back(-c);
  return w;
}

Rat NodeWeights::of(const Matching& m) const {
  Rat total;
  for (const auto& [i, j] : m.pairs()) total += edge(i, j);
  return total;
}

Exclusion Exclusion::of(const AgentId& a) { return Exclusion{}.with(a); }

Exclusion Exclusion::with(const AgentId& a) const {
  Exclusion e = *this;
  (a.is_buyer() ? e.buyers : e.sellers).push_back(a.index);
  return e;
}

namespace {

struct Active {
  std::vector<int> buyers;   // ascending
  std::vector<int> sellers;  // ascending
  std::vector<char> buyer_on;
  std::vector<char> seller_on;
};

Active make_active(const MarketGraph& g, const NodeWeights& w, const Exclusion& ex) {
  require(static_cast<int>(w.buyer.size()) == g.buyer_count() &&
              static_cast<int>(w.seller.size()) == g.seller_count(),
          ErrorKind::kInvalidArgument, "node weights do not match the graph");
  Active a;
  a.buyer_on.assign(g.buyer_count(), 1);
  a.seller_on.assign(g.seller_count(), 1);
  for (int i : ex.buyers) {
    require(i >= 0 && i < g.buyer_count(), ErrorKind::kInvalidArgument, "excluded buyer out of range");
    a.buyer_on[i] = 0;
  }
  for (int j : ex.sellers) {
    require(j >= 0 && j < g.seller_count(), ErrorKind::kInvalidArgument, "excluded seller out of range");
    a.seller_on[j] = 0;
  }
  for (int i = 0; i < g.buyer_count(); ++i)
    if (a.buyer_on[i]) a.buyers.push_back(i);
  for (int j = 0; j < g.seller_count(); ++j)
    if (a.seller_on[j]) a.sellers.push_back(j);
  return a;
}

// ---- complete graphs: sort both sides by weight, ties to the lower index ----

struct SortedSolution {
  std::vector<int> buyers;   // in preference order
  std::vector<int> sellers;  // in preference order
  std::size_t k = 0;         // optimum pairs the first k of each list
};

SortedSolution solve_sorted(const NodeWeights& w, const Active& a) {
  SortedSolution s{a.buyers, a.sellers, 0};
  auto by_weight = [](const std::vector<Rat>& wt) {
    return [&wt](int x, int y) {
      auto c = wt[x] <=> wt[y];
      return c != 0 ? c > 0 : x < y;
    };
  };
  std::sort(s.buyers.begin(), s.buyers.end(), by_weight(w.buyer));
  std::sort(s.sellers.begin(), s.sellers.end(), by_weight(w.seller));
  std::size_t lim = std::min(s.buyers.size(), s.sellers.size());
  while (s.k < lim && (w.buyer[s.buyers[s.k]] + w.seller[s.sellers[s.k]]).sign() >= 0) ++s.k;
  return s;
}

Matching sorted_matching(const NodeWeights& w, const Active& a) {
  SortedSolution s = solve_sorted(w, a);
  std::vector<int> bs(s.buyers.begin(), s.buyers.begin() + static_cast<long>(s.k));
  std::vector<int> ss(s.sellers.begin(), s.sellers.begin() + static_cast<long>(s.k));
  std::sort(bs.begin(), bs.end());
  std::sort(ss.begin(), ss.end());
  std::vector<Edge> pairs;
  pairs.reserve(s.k);
  for (std::size_t t = 0; t < s.k; ++t) pairs.emplace_back(bs[t], ss[t]);
  return Matching(std::move(pairs));
}

Rat sorted_value(const NodeWeights& w, const Active& a) {
  SortedSolution s = solve_sorted(w, a);
  Rat total;
  for (std::size_t t = 0; t < s.k; ++t) total += w.buyer[s.buyers[t]] + w.seller[s.sellers[t]];
  return total;
}

// ---- subset table: best[t][mask] = optimum over buyers t.. with sellers in mask taken ----

constexpr int kDpMaxSellers = 12;
constexpr std::size_t kDpMaxCells = std::size_t{1} << 16;

bool dp_fits(const Active& a) {
  return a.sellers.size() <= kDpMaxSellers &&
         (a.buyers.size() + 1) * (std::size_t{1} << a.sellers.size()) <= kDpMaxCells;
}

struct DpTable {
  std::vector<int> seller_bit;                          // seller index -> bit, -1 if inactive
  std::vector<std::vector<std::pair<int, Rat>>> arcs;  // per active buyer: (bit, weight), weight >= 0
  std::vector<Rat> best;
  std::size_t width = 0;
  const Rat& at(std::size_t t, std::size_t mask) const { return best[t * width + mask]; }
};

DpTable build_dp(const MarketGraph& g, const NodeWeights& w, const Active& a) {
  DpTable d;
  d.seller_bit.assign(g.seller_count(), -1);
  for (std::size_t t = 0; t < a.sellers.size(); ++t) d.seller_bit[a.sellers[t]] = static_cast<int>(t);
  d.width = std::size_t{1} << a.sellers.size();
  std::size_t nb = a.buyers.size();
  d.arcs.resize(nb);
  for (std::size_t t = 0; t < nb; ++t) {
    int i = a.buyers[t];
    for (int j : g.sellers_of(i)) {
      if (d.seller_bit[j] < 0) continue;
      Rat e = w.edge(i, j);
      if (e.sign() >= 0) d.arcs[t].emplace_back(d.seller_bit[j], std::move(e));
    }
  }
  d.best.assign((nb + 1) * d.width, Rat{});
  for (std::size_t t = nb; t-- > 0;) {
    for (std::size_t mask = 0; mask < d.width; ++mask) {
      Rat v = d.at(t + 1, mask);
      for (const auto& [bit, e] : d.arcs[t]) {
        std::size_t b = std::size_t{1} << bit;
        if (mask & b) continue;
        Rat cand = e + d.at(t + 1, mask | b);
        if (cand > v) v = std::move(cand);
      }
      d.best[t * d.width + mask] = std::move(v);
    }
  }
  return d;
}

Matching dp_matching(const MarketGraph& g, const NodeWeights& w, const Active& a) {
  DpTable d = build_dp(g, w, a);
  std::vector<Edge> pairs;
  std::size_t mask = 0;
  for (std::size_t t = 0; t < a.buyers.size(); ++t) {
    const Rat& target = d.at(t, mask);
    // arcs are in ascending seller order, which is the lex preference order
    bool taken = false;
    for (const auto& [bit, e] : d.arcs[t]) {
      std::size_t b = std::size_t{1} << bit;
      if (mask & b) continue;
      if (e + d.at(t + 1, mask | b) == target) {
        pairs.emplace_back(a.buyers[t], a.sellers[bit]);
        mask |= b;
        taken = true;
        break;
      }
    }
    if (!taken && d.at(t + 1, mask) != target) fail(ErrorKind::kInternal, "subset table inconsistent");
  }
  return Matching(std::move(pairs));
}

// ---- Hungarian optimum on the padded square problem ----

Rat assignment_value(const MarketGraph& g, const NodeWeights& w, const Active& a) {
  const int nb = static_cast<int>(a.buyers.size());
  const int ns = static_cast<int>(a.sellers.size());
  const int n = nb + ns;
  if (nb == 0 || ns == 0) return {};
  std::vector<int> seller_pos(g.seller_count(), -1);
  for (int t = 0; t < ns; ++t) seller_pos[a.sellers[t]] = t;
  // rows: buyers then one slack row per seller; cols: sellers then one slack col per buyer
  std::vector<char> allowed(static_cast<std::size_t>(n) * n, 0);
  std::vector<Rat> cost(static_cast<std::size_t>(n) * n);
  auto cell = [n](int r, int c) { return static_cast<std::size_t>(r) * n + c; };
  for (int r = 0; r < nb; ++r) {
    int i = a.buyers[r];
    for (int j : g.sellers_of(i)) {
      int c = seller_pos[j];
      if (c < 0) continue;
      Rat e = w.edge(i, j);
      if (e.sign() < 0) continue;
      allowed[cell(r, c)] = 1;
      cost[cell(r, c)] = -e;
    }
    allowed[cell(r, ns + r)] = 1;
  }
  for (int t = 0; t < ns; ++t) {
    allowed[cell(nb + t, t)] = 1;
    for (int c = ns; c < n; ++c) allowed[cell(nb + t, c)] = 1;
  }

  std::vector<Rat> u(n + 1), v(n + 1), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1), has(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(used.begin(), used.end(), 0);
    std::fill(has.begin(), has.end(), 0);
    do {
      used[j0] = 1;
      int i0 = p[j0];
      Rat delta;
      bool have_delta = false;
      int j1 = -1;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        if (allowed[cell(i0 - 1, j - 1)]) {
          Rat cur = cost[cell(i0 - 1, j - 1)] - u[i0] - v[j];
          if (!has[j] || cur < minv[j]) {
            minv[j] = std::move(cur);
            has[j] = 1;
            way[j] = j0;
          }
        }
        if (has[j] && (!have_delta || minv[j] < delta)) {
          delta = minv[j];
          have_delta = true;
          j1 = j;
        }
      }
      require(have_delta, ErrorKind::kInternal, "assignment problem has no augmenting column");
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else if (has[j]) {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  Rat total;
  for (int j = 1; j <= n; ++j) total -= cost[cell(p[j] - 1, j - 1)];
  return total;
}

Matching assignment_matching(const MarketGraph& g, const NodeWeights& w, Active a) {
  Rat remaining = assignment_value(g, w, a);
  std::vector<Edge> pairs;
  const std::vector<int> buyers = a.buyers;
  auto drop = [](std::vector<int>& v, int x) { v.erase(std::find(v.begin(), v.end(), x)); };
  for (int i : buyers) {
    bool taken = false;
    for (int j : g.sellers_of(i)) {
      if (!a.seller_on[j]) continue;
      Rat e = w.edge(i, j);
      if (e.sign() < 0) continue;
      Active rest = a;
      drop(rest.buyers, i);
      drop(rest.sellers, j);
      rest.buyer_on[i] = 0;
      rest.seller_on[j] = 0;
      Rat sub = assignment_value(g, w, rest);
      if (e + sub == remaining) {
        pairs.emplace_back(i, j);
        remaining = std::move(sub);
        a = std::move(rest);
        taken = true;
        break;
      }
    }
    if (!taken) {
      drop(a.buyers, i);
      a.buyer_on[i] = 0;
    }
  }
  require(remaining.is_zero(), ErrorKind::kInternal, "greedy edge fixing lost optimality");
  return Matching(std::move(pairs));
}

MatchingAlgorithm pick(const MarketGraph& g, const Active& a, MatchingAlgorithm algo) {
  if (algo != MatchingAlgorithm::kAuto) {
    require(algo != MatchingAlgorithm::kSortedComplete || g.is_complete(), ErrorKind::kPrecondition,
            "sorted solver requires a complete graph");
    return algo;
  }
  if (g.is_complete()) return MatchingAlgorithm::kSortedComplete;
  if (dp_fits(a)) return MatchingAlgorithm::kSubsetDp;
  return MatchingAlgorithm::kAssignment;
}

}  // namespace

Matching max_weight_matching(const MarketGraph& g, const NodeWeights& w, const Exclusion& ex,
                             MatchingAlgorithm algo) {
  Active a = make_active(g, w, ex);
  switch (pick(g, a, algo)) {
    case MatchingAlgorithm::kSortedComplete:
      return sorted_matching(w, a);
    case MatchingAlgorithm::kSubsetDp:
      require(dp_fits(a), ErrorKind::kPrecondition, "instance too large for the subset table");
      return dp_matching(g, w, a);
    default:
      return assignment_matching(g, w, std::move(a));
  }
}

Rat max_weight_value(const MarketGraph& g, const NodeWeights& w, const Exclusion& ex, MatchingAlgorithm algo) {
  Active a = make_active(g, w, ex);
  switch (pick(g, a, algo)) {
    case MatchingAlgorithm::kSortedComplete:
      return sorted_value(w, a);
    case MatchingAlgorithm::kSubsetDp: {
      require(dp_fits(a), ErrorKind::kPrecondition, "instance too large for the subset table");
      DpTable d = build_dp(g, w, a);
      return d.at(0, 0);
    }
    default:
      return assignment_value(g, w, a);
  }
}

Rat critical_weight(const MarketGraph& g, const NodeWeights& w, const AgentId& a, const Exclusion& ex) {
  const Rat& own = a.is_buyer() ? w.buyer.at(a.index) : w.seller.at(a.index);
  return max_weight_value(g, w, ex.with(a)) - (max_weight_value(g, w, ex) - own);
}

Matching first_best(const MarketGraph& g, const ValuationProfile& p) {
  return max_weight_matching(g, NodeWeights::first_best(p));
}

Rat optimal_gft(const MarketGraph& g, const ValuationProfile& p) {
  return max_weight_value(g, NodeWeights::first_best(p));
}

namespace {
void check_agent(const MarketGraph& g, const AgentId& a) {
  int count = a.is_buyer() ? g.buyer_count() : g.seller_count();
  require(a.index >= 0 && a.index < count, ErrorKind::kInvalidArgument, "invalid agent " + a.str());
}
}  // namespace

Matching matching_without(const MarketGraph& g, const ValuationProfile& p, const AgentId& a) {
  check_agent(g, a);
  return max_weight_matching(g, NodeWeights::first_best(p), Exclusion::of(a));
}

Rat vcg_buyer_payment(const MarketGraph& g, const ValuationProfile& p, int i) {
  AgentId a = AgentId::buyer(i);
  check_agent(g, a);
  NodeWeights w = NodeWeights::first_best(p);
  require(max_weight_matching(g, w).contains(a), ErrorKind::kPrecondition, a.str() + " is not in the first-best");
  return critical_weight(g, w, a);
}

Rat vcg_seller_payment(const MarketGraph& g, const ValuationProfile& p, int j) {
  AgentId a = AgentId::seller(j);
  check_agent(g, a);
  NodeWeights w = NodeWeights::first_best(p);
  require(max_weight_matching(g, w).contains(a), ErrorKind::kPrecondition, a.str() + " is not in the first-best");
  // seller weight is -cost, so the critical weight negated is the largest winning cost
  return -critical_weight(g, w, a);
}

int efficient_trade_size_q(const ValuationProfile& p) {
  std::vector<Rat> b = p.b;
  std::vector<Rat> s = p.s;
  std::sort(b.begin(), b.end(), std::greater<>());
  std::sort(s.begin(), s.end());
  std::size_t k = 0;
  while (k < b.size() && k < s.size() && b[k] >= s[k]) ++k;
  return static_cast<int>(k);
}

ClassStats class_stats(const MarketGraph& g, const ValuationProfile& p) {
  ClassStats cs;
  cs.classes = class_partition(g);
  cs.first_best = first_best(g, p);
  cs.buyer_q.assign(cs.classes.buyer_class_count, 0);
  cs.buyer_d.assign(cs.classes.buyer_class_count, 0);
  cs.seller_q.assign(cs.classes.seller_class_count, 0);
  cs.seller_d.assign(cs.classes.seller_class_count, 0);
  for (const auto& [i, j] : cs.first_best.pairs()) {
    int t = cs.classes.buyer_class[i];
    int u = cs.classes.seller_class[j];
    ++cs.buyer_q[t];
    ++cs.seller_q[u];
    if (cs.cross[{t, u}]++ == 0) {
      ++cs.buyer_d[t];
      ++cs.seller_d[u];
    }
  }
  cs.alpha = Rat(1);
  auto fold = [&cs](const std::vector<int>& q, const std::vector<int>& d) {
    for (std::size_t t = 0; t < q.size(); ++t) {
      if (q[t] > 0) cs.alpha = min(cs.alpha, Rat(1) - Rat(d[t], q[t]));
    }
  };
  fold(cs.buyer_q, cs.buyer_d);
  fold(cs.seller_q, cs.seller_d);
  cs.beta = Rat(1);
  for (const auto& [key, r] : cs.cross) cs.beta = min(cs.beta, Rat(1) - Rat(1, r));
  return cs;
}

namespace {
void require_first_best_pair(const MarketGraph& g, const ValuationProfile& p, int i, int j) {
  require(first_best(g, p).contains(Edge{i, j}), ErrorKind::kPrecondition,
          "pair (" + std::to_string(i) + "," + std::to_string(j) + ") is not in the first-best");
}
}  // namespace

RatOrInf buyer_threshold(const MarketGraph& g, const ValuationProfile& p, int i, int j) {
  p.validate(g);
  require_first_best_pair(g, p, i, j);
  Rat sentinel(1);
  for (const auto& v : p.b) sentinel += v;
  for (const auto& v : p.s) sentinel += v;
  NodeWeights w = NodeWeights::first_best(p);
  w.buyer[i] = sentinel;
  Exclusion without_j = Exclusion::of(AgentId::seller(j));
  if (!max_weight_matching(g, w, without_j).contains(AgentId::buyer(i))) return RatOrInf::infinity();
  return critical_weight(g, w, AgentId::buyer(i), without_j);
}

Rat seller_threshold(const MarketGraph& g, const ValuationProfile& p, int i, int j) {
  p.validate(g);
  require_first_best_pair(g, p, i, j);
  NodeWeights w = NodeWeights::first_best(p);
  w.seller[j] = Rat{};
  Exclusion without_i = Exclusion::of(AgentId::buyer(i));
  if (!max_weight_matching(g, w, without_i).contains(AgentId::seller(j))) return Rat{};
  return -critical_weight(g, w, AgentId::seller(j), without_i);
}

}  // namespace twosided
