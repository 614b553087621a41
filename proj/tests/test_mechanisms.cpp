#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "twosided/error.hpp"
#include "twosided/mechanisms.hpp"

using namespace twosided;

namespace {

ValuationProfile prof(std::vector<Rat> b, std::vector<Rat> s) { return {std::move(b), std::move(s)}; }

Scenario point_scenario(const MarketGraph& g, const ValuationProfile& p) {
  Scenario sc{g, {}, {}};
  for (const auto& v : p.b) sc.buyer_dists.push_back(Distribution::point(v));
  for (const auto& c : p.s) sc.seller_dists.push_back(Distribution::point(c));
  return sc;
}

// Two buyers U[0,90], U[0,30]; seller 0 always 0, seller 1 is 0 or 25.
Scenario non_monotone_market() {
  return Scenario{MarketGraph::complete(2, 2),
                  {Distribution::uniform(Rat(0), Rat(90)), Distribution::uniform(Rat(0), Rat(30))},
                  {Distribution::point(Rat(0)), Distribution::discrete({{Rat(0), Rat(1, 5)}, {Rat(25), Rat(4, 5)}})}};
}

void check_ir_bb(const TradeOutcome& o, const ValuationProfile& p, bool balanced) {
  for (const auto& t : o.trades) {
    REQUIRE(t.buyer_payment <= p.b[t.buyer]);
    REQUIRE(t.seller_receipt >= p.s[t.seller]);
    if (balanced) REQUIRE(t.buyer_payment >= t.seller_receipt);
  }
}

bool buyer_trades(const TradeOutcome& o, int i) { return o.trade_of(AgentId::buyer(i)) != nullptr; }

}  // namespace

TEST_CASE("trade reduction on double auctions") {
  auto g = MarketGraph::complete(2, 2);
  auto o = run_tr_da(g, prof({Rat(9), Rat(8)}, {Rat(1), Rat(2)}));
  REQUIRE(o.trades.size() == 1);
  CHECK(o.trades[0] == Trade{0, 0, Rat(8), Rat(2)});
  CHECK(o.gains(prof({Rat(9), Rat(8)}, {Rat(1), Rat(2)})) == Rat(8));

  o = run_tr_da(g, prof({Rat(5), Rat(5)}, {Rat(5), Rat(5)}));
  REQUIRE(o.trades.size() == 1);
  CHECK(o.trades[0].buyer_payment == Rat(5));
  CHECK(o.trades[0].seller_receipt == Rat(5));

  CHECK(run_tr_da(g, prof({Rat(10), Rat(4)}, {Rat(3), Rat(6)})).trades.empty());
  CHECK_THROWS_AS(run_tr_da(MarketGraph(2, 2, {{0, 0}, {1, 1}}), prof({Rat(9), Rat(8)}, {Rat(1), Rat(2)})), Error);

  // five buyers, four sellers, q = 3: top two buyers pay the third value, bottom two sellers get the third cost
  auto g54 = MarketGraph::complete(5, 4);
  auto p = prof({Rat(3), Rat(10), Rat(7), Rat(1), Rat(9)}, {Rat(4), Rat(2), Rat(8), Rat(5)});
  o = run_tr_da(g54, p);
  REQUIRE(o.trades.size() == 2);
  for (const auto& t : o.trades) {
    CHECK((t.buyer == 1 || t.buyer == 4));
    CHECK((t.seller == 1 || t.seller == 0));
    CHECK(t.buyer_payment == Rat(7));
    CHECK(t.seller_receipt == Rat(5));
  }
}

TEST_CASE("trade reduction on matching markets") {
  auto two_pairs = MarketGraph(2, 2, {{0, 0}, {1, 1}});
  CHECK(run_tr_matching(two_pairs, prof({Rat(9), Rat(8)}, {Rat(1), Rat(2)})).trades.empty());

  auto g = MarketGraph::complete(3, 3);
  auto p = prof({Rat(7), Rat(9), Rat(8)}, {Rat(3), Rat(1), Rat(2)});
  auto o = run_tr_matching(g, p);
  REQUIRE(o.trades.size() == 2);
  for (const auto& t : o.trades) {
    CHECK(t.buyer_payment == Rat(7));
    CHECK(t.seller_receipt == Rat(3));
    CHECK(t.buyer != 0);
    CHECK(t.seller != 0);
  }

  // two classes of buyers sharing one seller class
  auto mixed = MarketGraph(4, 3, {{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {1, 2}, {2, 0}, {2, 1}, {3, 0}, {3, 1}});
  auto pm = prof({Rat(10), Rat(9), Rat(8), Rat(7)}, {Rat(1), Rat(2), Rat(3)});
  o = run_tr_matching(mixed, pm);
  o.matching().validate(mixed);
}

TEST_CASE("trade reduction: matching form equals the double-auction form on complete graphs") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 500; ++t) {
    int n = 2 + static_cast<int>(rng() % 5);
    int m = 2 + static_cast<int>(rng() % 5);
    auto g = MarketGraph::complete(n, m);
    ValuationProfile p;
    for (int i = 0; i < n; ++i) p.b.push_back(oracle::random_rat(rng, 0, 6, 1));
    for (int j = 0; j < m; ++j) p.s.push_back(oracle::random_rat(rng, 0, 6, 1));
    REQUIRE(run_tr_matching(g, p).trades == run_tr_da(g, p).trades);
  }
}

TEST_CASE("trade reduction guarantees on random matching markets") {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 600; ++t) {
    int n = 1 + static_cast<int>(rng() % 5);
    int m = 1 + static_cast<int>(rng() % 5);
    auto g = oracle::random_graph(rng, n, m, 0.6);
    ValuationProfile p;
    for (int i = 0; i < n; ++i) p.b.push_back(oracle::random_rat(rng, 0, 9, 2));
    for (int j = 0; j < m; ++j) p.s.push_back(oracle::random_rat(rng, 0, 9, 2));
    auto o = run_tr_matching(g, p);
    o.matching().validate(g);
    check_ir_bb(o, p, true);
    auto st = class_stats(g, p);
    Rat opt = gft(st.first_best, p);
    REQUIRE(o.gains(p) >= st.alpha * opt);
    REQUIRE(o.gains(p) >= st.beta * opt);
    // trading agents come from the first best
    for (const auto& tr : o.trades) {
      REQUIRE(st.first_best.contains(AgentId::buyer(tr.buyer)));
      REQUIRE(st.first_best.contains(AgentId::seller(tr.seller)));
    }
  }
}

TEST_CASE("hybrid double auction") {
  auto sc = non_monotone_market();
  auto p = prof({Rat(30), Rat(24)}, {Rat(0), Rat(25)});
  auto so = run_hybrid_da(sc, p, Coin::kSellerSide);
  REQUIRE(so.trades.size() == 1);
  CHECK(so.trades[0] == Trade{0, 0, Rat(25), Rat(25)});
  auto bo = run_hybrid_da(sc, p, Coin::kBuyerSide);
  REQUIRE(bo.trades.size() == 1);
  CHECK(bo.trades[0] == Trade{0, 0, Rat(24), Rat(24)});
  CHECK(bo.coin == Coin::kBuyerSide);

  auto p2 = prof({Rat(30), Rat(26)}, {Rat(0), Rat(25)});
  CHECK(run_hybrid_da(sc, p2, Coin::kSellerSide).trades == run_tr_da(sc.graph, p2).trades);

  auto p0 = prof({Rat(3), Rat(2)}, {Rat(0), Rat(25)});
  Scenario low{MarketGraph::complete(2, 2),
               {Distribution::uniform(Rat(0), Rat(4)), Distribution::uniform(Rat(0), Rat(4))},
               {Distribution::uniform(Rat(5), Rat(9)), Distribution::uniform(Rat(5), Rat(9))}};
  auto pq0 = prof({Rat(3), Rat(2)}, {Rat(6), Rat(7)});
  for (Coin c : kBothCoins) CHECK(run_hybrid_da(low, pq0, c).trades.empty());
  (void)p0;
}

TEST_CASE("hybrid double auction is monotone and budget balanced on small discrete markets") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 60; ++t) {
    auto sc = oracle::random_scenario(rng, MarketGraph::complete(2, 2), 3, 8);
    for (const auto& [p, pr] : oracle::all_profiles(sc)) {
      for (Coin c : kBothCoins) {
        auto o = run_hybrid_da(sc, p, c);
        check_ir_bb(o, p, true);
        for (int i = 0; i < 2; ++i) {
          if (!buyer_trades(o, i)) continue;
          for (const auto& a : sc.buyer_dists[i].atoms())
            if (a.value > p.b[i]) REQUIRE(buyer_trades(run_hybrid_da(sc, p.with(AgentId::buyer(i), a.value), c), i));
        }
        for (int j = 0; j < 2; ++j) {
          if (!o.trade_of(AgentId::seller(j))) continue;
          for (const auto& a : sc.seller_dists[j].atoms())
            if (a.value < p.s[j])
              REQUIRE(run_hybrid_da(sc, p.with(AgentId::seller(j), a.value), c).trade_of(AgentId::seller(j)));
        }
        if (efficient_trade_size_q(p) <= 1)
          for (const auto& tr : o.trades) REQUIRE(tr.buyer_payment == tr.seller_receipt);
      }
    }
  }
}

TEST_CASE("virtual matchings on the non-monotone example") {
  auto sc = non_monotone_market();
  auto p = prof({Rat(30), Rat(24)}, {Rat(0), Rat(25)});
  CHECK(gsom_weights(sc, p).buyer == std::vector<Rat>{Rat(-30), Rat(18)});
  auto m1 = run_gsom(sc, p);
  CHECK(m1.contains(Edge{1, 0}));
  auto m2 = run_gbom(sc, p);
  CHECK_FALSE(m2.contains(AgentId::buyer(1)));
  CHECK_FALSE(m2.contains(AgentId::seller(1)));

  Scenario bleak{MarketGraph::complete(2, 2),
                 {Distribution::uniform(Rat(0), Rat(10)), Distribution::uniform(Rat(0), Rat(10))},
                 {Distribution::uniform(Rat(0), Rat(10)), Distribution::uniform(Rat(0), Rat(10))}};
  auto low = prof({Rat(2), Rat(3)}, {Rat(8), Rat(9)});
  CHECK(run_gsom(bleak, low).empty());
  CHECK(run_gbom(bleak, low).empty());
  CHECK_THROWS_AS(run_rvwm(sc, prof({Rat(95), Rat(24)}, {Rat(0), Rat(25)}), Coin::kSellerSide), Error);
}

TEST_CASE("critical reports") {
  // bilateral seller-side rule: seller's critical cost equals the buyer's virtual value
  Scenario bil{MarketGraph::complete(1, 1), {Distribution::uniform(Rat(0), Rat(10))},
               {Distribution::uniform(Rat(0), Rat(10))}};
  auto p = prof({Rat(8)}, {Rat(1)});
  CHECK(critical_report(bil, p, Coin::kSellerSide, AgentId::seller(0)) == Rat(6));
  // buyer's critical bid inverts the virtual value at the seller's cost
  CHECK(critical_report(bil, p, Coin::kSellerSide, AgentId::buyer(0)) ==
        inverse_ironed_virtual_value(bil.buyer_dists[0], Rat(1)));
  CHECK(critical_report(bil, p, Coin::kSellerSide, AgentId::buyer(0)) == Rat(11, 2));
  // buyer-side rule: buyer pays the seller's virtual cost, seller gets (b + lo) / 2
  CHECK(critical_report(bil, p, Coin::kBuyerSide, AgentId::buyer(0)) == Rat(2));
  CHECK(critical_report(bil, p, Coin::kBuyerSide, AgentId::seller(0)) == Rat(4));
  CHECK_THROWS_AS(critical_report(bil, prof({Rat(1)}, {Rat(9)}), Coin::kSellerSide, AgentId::buyer(0)), Error);
}

TEST_CASE("critical reports match an exhaustive report sweep") {
  std::mt19937_64 rng(44);
  int checked = 0;
  for (int t = 0; t < 40; ++t) {
    auto g = t % 2 ? MarketGraph::complete(2, 2) : MarketGraph(2, 2, {{0, 0}, {0, 1}, {1, 1}});
    auto sc = oracle::random_scenario(rng, g, 3, 8);
    for (const auto& [p, pr] : oracle::all_profiles(sc)) {
      for (Coin rule : kBothCoins) {
        auto weights = [&](const ValuationProfile& q) {
          return rule == Coin::kSellerSide ? gsom_weights(sc, q) : gbom_weights(sc, q);
        };
        Matching m = oracle::brute_best(g, weights(p));
        auto o = run_rvwm(sc, p, rule);
        REQUIRE(o.matching() == m);
        check_ir_bb(o, p, false);
        for (const auto& tr : o.trades) {
          std::optional<Rat> lowest, highest;
          for (const auto& a : sc.buyer_dists[tr.buyer].atoms()) {
            auto q = p.with(AgentId::buyer(tr.buyer), a.value);
            if (!lowest && oracle::brute_best(g, weights(q)).contains(AgentId::buyer(tr.buyer))) lowest = a.value;
          }
          for (const auto& a : sc.seller_dists[tr.seller].atoms()) {
            auto q = p.with(AgentId::seller(tr.seller), a.value);
            if (oracle::brute_best(g, weights(q)).contains(AgentId::seller(tr.seller))) highest = a.value;
          }
          REQUIRE(tr.buyer_payment == *lowest);
          REQUIRE(tr.seller_receipt == *highest);
          ++checked;
        }
      }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("offering mechanism") {
  // double auction with q = 1 behaves like the hybrid's random-offer branch
  std::mt19937_64 rng(45);
  int q1 = 0;
  for (int t = 0; t < 60; ++t) {
    auto sc = oracle::random_scenario(rng, MarketGraph::complete(2, 2), 3, 8);
    for (const auto& [p, pr] : oracle::all_profiles(sc)) {
      if (efficient_trade_size_q(p) != 1) continue;
      ++q1;
      for (Coin c : kBothCoins) REQUIRE(run_offering_matching(sc, p, c).trades == run_hybrid_da(sc, p, c).trades);
    }
  }
  CHECK(q1 > 50);

  Scenario none{MarketGraph::complete(1, 1), {Distribution::point(Rat(1))}, {Distribution::point(Rat(2))}};
  for (Coin c : kBothCoins) CHECK(run_offering_matching(none, prof({Rat(1)}, {Rat(2)}), c).trades.empty());
}

TEST_CASE("offering mechanism on random matching markets") {
  std::mt19937_64 rng(46);
  for (int t = 0; t < 80; ++t) {
    auto g = oracle::random_graph(rng, 3, 3, 0.6);
    auto sc = oracle::random_scenario(rng, g, 2, 8);
    for (const auto& [p, pr] : oracle::all_profiles(sc)) {
      Matching m = first_best(g, p);
      for (const auto& [i, j] : m.pairs()) {
        auto prm = offering_params(sc, p, i, j);
        REQUIRE_NOTHROW(prm.validate());
        REQUIRE(prm.so_cap >= p.s[j]);
        REQUIRE(prm.bo_floor <= p.b[i]);
        // seller j still wins once buyer i leaves: the buyer-offer branch must trade
        if (matching_without(g, p, AgentId::buyer(i)).contains(AgentId::seller(j))) {
          REQUIRE(prm.bo_floor == vcg_buyer_payment(g, p, i));
          REQUIRE(run_bo(p.s[j], p.b[i], prm).traded);
        }
        if (matching_without(g, p, AgentId::seller(j)).contains(AgentId::buyer(i))) {
          REQUIRE(prm.so_cap == vcg_seller_payment(g, p, j));
        }
      }
      for (Coin c : kBothCoins) {
        auto o = run_offering_matching(sc, p, c);
        check_ir_bb(o, p, true);
        for (const auto& tr : o.trades) {
          REQUIRE(m.contains(Edge{tr.buyer, tr.seller}));
          REQUIRE(tr.buyer_payment == tr.seller_receipt);
          auto prm = offering_params(sc, p, tr.buyer, tr.seller);
          REQUIRE(tr.buyer_payment >= prm.bo_floor);
          REQUIRE(prm.so_cap >= tr.buyer_payment);
        }
      }
    }
  }
}

TEST_CASE("hybrid matching dispatch") {
  std::mt19937_64 rng(47);
  for (int t = 0; t < 60; ++t) {
    auto sc = oracle::random_scenario(rng, MarketGraph::complete(2, 2), 3, 8);
    for (const auto& [p, pr] : oracle::all_profiles(sc))
      for (Coin c : kBothCoins) REQUIRE(run_hybrid_matching(sc, p, c).trades == run_hybrid_da(sc, p, c).trades);
  }
  auto two_pairs = MarketGraph(2, 2, {{0, 0}, {1, 1}});
  auto p = prof({Rat(9), Rat(8)}, {Rat(1), Rat(2)});
  auto sc = point_scenario(two_pairs, p);
  // every class has one matched member, so the offering branch runs and trades both edges
  for (Coin c : kBothCoins) CHECK(run_hybrid_matching(sc, p, c).trades.size() == 2);
}

TEST_CASE("naive combinations on the non-monotone example") {
  auto sc = non_monotone_market();
  auto high = prof({Rat(30), Rat(26)}, {Rat(0), Rat(25)});
  auto low = prof({Rat(30), Rat(24)}, {Rat(0), Rat(25)});
  for (Coin c : kBothCoins) {
    CHECK_FALSE(buyer_trades(run_naive_max(sc, high, c), 1));
    CHECK_FALSE(buyer_trades(run_naive_qswitch(sc, high, c), 1));
  }
  CHECK(buyer_trades(run_naive_max(sc, low, Coin::kSellerSide), 1));
  CHECK_FALSE(buyer_trades(run_naive_max(sc, low, Coin::kBuyerSide), 1));
  CHECK(buyer_trades(run_naive_qswitch(sc, low, Coin::kSellerSide), 1));
  CHECK_FALSE(buyer_trades(run_naive_qswitch(sc, low, Coin::kBuyerSide), 1));

  // no efficient trade: both fall through to the virtual mechanism
  auto q0 = prof({Rat(20), Rat(10)}, {Rat(25), Rat(25)});
  Scenario sc0{MarketGraph::complete(2, 2),
               {Distribution::uniform(Rat(0), Rat(90)), Distribution::uniform(Rat(0), Rat(30))},
               {Distribution::point(Rat(25)), Distribution::point(Rat(25))}};
  for (Coin c : kBothCoins) {
    CHECK(run_naive_max(sc0, q0, c).trades == run_rvwm(sc0, q0, c).trades);
    CHECK(run_naive_qswitch(sc0, q0, c).trades == run_rvwm(sc0, q0, c).trades);
  }
  CHECK(run_naive_max(sc, high, Coin::kSellerSide, NaiveMaxRule::kRealized).trades ==
        run_tr_da(sc.graph, high).trades);
}

TEST_CASE("dispatcher and identifiers") {
  for (auto k : all_mechanisms()) CHECK(parse_mechanism(mechanism_id(k)) == k);
  CHECK_THROWS_AS(parse_mechanism("vcg"), Error);
  auto sc = non_monotone_market();
  auto p = prof({Rat(30), Rat(24)}, {Rat(0), Rat(25)});
  for (auto k : all_mechanisms()) {
    for (Coin c : kBothCoins) {
      auto o = run_mechanism(k, sc, p, c);
      CHECK(o.mechanism == mechanism_id(k));
      CHECK(o.coin.has_value() == uses_coin(k));
      check_ir_bb(o, p, direct_trade_balanced(k));
    }
  }
  CHECK(expected_gft(MechanismKind::kHybridDa, sc, p) == Rat(30));
  CHECK(expected_gft(MechanismKind::kRvwm, sc, p) == rvwm_expected_gft(sc, p));
}
