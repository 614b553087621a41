#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "twosided/bilateral.hpp"
#include "twosided/error.hpp"

using namespace twosided;

namespace {

Distribution small_discrete(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 4);
  std::uniform_int_distribution<int> value(0, 10);
  std::uniform_int_distribution<int> weight(1, 4);
  std::vector<int> vals;
  int n = count(rng);
  while (static_cast<int>(vals.size()) < n) {
    int v = value(rng);
    if (std::find(vals.begin(), vals.end(), v) == vals.end()) vals.push_back(v);
  }
  std::sort(vals.begin(), vals.end());
  std::vector<int> w;
  int total = 0;
  for (int k = 0; k < n; ++k) total += w.emplace_back(weight(rng));
  std::vector<Atom> atoms;
  for (int k = 0; k < n; ++k) atoms.push_back({Rat(vals[k]), Rat(w[k], total)});
  return Distribution::discrete(atoms);
}

void check_outcome(const BilateralOutcome& o, const Rat& s, const Rat& b, const RoParams& prm) {
  REQUIRE(o.traded == o.price.has_value());
  if (!o.traded) return;
  REQUIRE(*o.price >= prm.bo_floor);
  REQUIRE(prm.so_cap >= *o.price);
  REQUIRE(*o.price >= s);
  REQUIRE(*o.price <= b);
}

}  // namespace

TEST_CASE("seller-offer examples") {
  RoParams prm{Rat(25), Distribution::uniform(Rat(24), Rat(90)), Rat(0), Distribution::point(Rat(0))};
  auto o = run_so(Rat(0), Rat(30), prm);
  CHECK(o.traded);
  CHECK(*o.price == Rat(25));
  CHECK(o.offerer == Side::kSeller);

  RoParams pt{Rat(10), Distribution::point(Rat(7)), Rat(0), Distribution::point(Rat(3))};
  o = run_so(Rat(3), Rat(7), pt);
  CHECK(o.traded);
  CHECK(*o.price == Rat(7));

  RoParams hi{RatOrInf::infinity(), Distribution::discrete({{Rat(2), Rat(1, 2)}, {Rat(9), Rat(1, 2)}}), Rat(0),
              Distribution::point(Rat(0))};
  o = run_so(Rat(6), Rat(2), hi);
  CHECK_FALSE(o.traded);
  CHECK_FALSE(o.price.has_value());
  CHECK_THROWS_AS(run_so(Rat(11), Rat(20), pt), Error);
}

TEST_CASE("buyer-offer examples") {
  RoParams prm{Rat(25), Distribution::uniform(Rat(24), Rat(90)), Rat(24), Distribution::point(Rat(0))};
  auto o = run_bo(Rat(0), Rat(30), prm);
  CHECK(o.traded);
  CHECK(*o.price == Rat(24));
  CHECK(o.offerer == Side::kBuyer);

  RoParams above{RatOrInf::infinity(), Distribution::point(Rat(2)), Rat(0), Distribution::point(Rat(5))};
  CHECK_FALSE(run_bo(Rat(5), Rat(2), above).traded);

  RoParams pt{Rat(10), Distribution::point(Rat(7)), Rat(1), Distribution::point(Rat(4))};
  o = run_bo(Rat(4), Rat(9), pt);
  CHECK(o.traded);
  CHECK(*o.price == Rat(4));
  CHECK_THROWS_AS(run_bo(Rat(0), Rat(0), pt), Error);
}

TEST_CASE("random-offer expectation") {
  RoParams both{Rat(25), Distribution::uniform(Rat(24), Rat(90)), Rat(24), Distribution::point(Rat(0))};
  CHECK(expected_gft_ro(Rat(0), Rat(30), both) == Rat(30));
  RoParams none{RatOrInf::infinity(), Distribution::point(Rat(2)), Rat(0), Distribution::point(Rat(5))};
  CHECK(expected_gft_ro(Rat(5), Rat(2), none) == Rat(0));
  // SO posts 9 against a value of 8; BO posts the seller's known cost
  RoParams one{RatOrInf::infinity(), Distribution::discrete({{Rat(8), Rat(1, 10)}, {Rat(9), Rat(9, 10)}}), Rat(0),
               Distribution::point(Rat(1))};
  CHECK_FALSE(run_ro(Rat(1), Rat(8), one, Coin::kSellerSide).traded);
  CHECK(run_ro(Rat(1), Rat(8), one, Coin::kBuyerSide).traded);
  CHECK(expected_gft_ro(Rat(1), Rat(8), one) == Rat(7, 2));
}

TEST_CASE("parameter validation") {
  RoParams ok{Rat(5), Distribution::point(Rat(3)), Rat(2), Distribution::point(Rat(4))};
  CHECK_NOTHROW(ok.validate());
  RoParams bad_cap{Rat(3), Distribution::point(Rat(3)), Rat(2), Distribution::point(Rat(4))};
  CHECK_THROWS_AS(bad_cap.validate(), Error);
  RoParams bad_floor{Rat(5), Distribution::point(Rat(1)), Rat(2), Distribution::point(Rat(4))};
  CHECK_THROWS_AS(bad_floor.validate(), Error);
  RoParams inverted{Rat(1), Distribution::point(Rat(3)), Rat(2), Distribution::point(Rat(0))};
  CHECK_THROWS_AS(inverted.validate(), Error);
}

TEST_CASE("constrained offers stay in range and trade when guaranteed") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 2000; ++t) {
    auto db = small_discrete(rng);
    auto ds = small_discrete(rng);
    Rat b = db.atoms()[rng() % db.atoms().size()].value;
    Rat s = ds.atoms()[rng() % ds.atoms().size()].value;
    // floor below b and the buyer law; cap above s and the seller law
    Rat floor = oracle::random_rat(rng, 0, 10, 2);
    if (floor > b) floor = b;
    if (floor > db.support_min()) floor = db.support_min();
    RatOrInf cap = RatOrInf::infinity();
    if (rng() % 3) {
      Rat c = oracle::random_rat(rng, 0, 12, 2);
      c = max(c, max(s, max(floor, ds.support_max())));
      cap = c;
    }
    RoParams prm{cap, db, floor, ds};
    REQUIRE_NOTHROW(prm.validate());
    auto so = run_so(s, b, prm);
    auto bo = run_bo(s, b, prm);
    check_outcome(so, s, b, prm);
    check_outcome(bo, s, b, prm);
    if (floor >= s || cap <= b) REQUIRE((so.traded || bo.traded));
    if (so.traded && bo.traded) REQUIRE(expected_gft_ro(s, b, prm) == b - s);
  }
}

TEST_CASE("conditioning and constraints never lose a trade") {
  // exhaustive over profiles of random discrete pairs with floor <= s and cap >= b
  std::mt19937_64 rng(32);
  int checked = 0;
  for (int t = 0; t < 300; ++t) {
    auto db = small_discrete(rng);
    auto ds = small_discrete(rng);
    RoParams free = RoParams::unconstrained(db, ds);
    for (const auto& ab : db.atoms()) {
      for (const auto& as : ds.atoms()) {
        const Rat& b = ab.value;
        const Rat& s = as.value;
        for (int f = 0; f <= 10; f += 2) {
          for (int c = 0; c <= 12; c += 3) {
            Rat floor(f);
            Rat cap(c);
            if (floor > s || cap < b || cap < floor) continue;
            if (prob_at_least(db, floor).is_zero() || prob_at_most(ds, cap).is_zero()) continue;
            RoParams con{cap, condition_at_least(db, floor), floor, condition_at_most(ds, cap)};
            if (run_so(s, b, free).traded) REQUIRE(run_so(s, b, con).traded);
            if (run_bo(s, b, free).traded) REQUIRE(run_bo(s, b, con).traded);
            ++checked;
          }
        }
      }
    }
  }
  CHECK(checked > 1000);
}
