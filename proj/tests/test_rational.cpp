#include <gmpxx.h>

#include <random>

#include "doctest.h"
#include "twosided/error.hpp"
#include "twosided/rational.hpp"

using twosided::Rat;
using twosided::RatOrInf;

namespace {

mpq_class as_mpq(const Rat& r) {
  mpq_class q(r.str());
  q.canonicalize();
  return q;
}

Rat from_mpq(const mpq_class& q) { return Rat::parse(q.get_str()); }

}  // namespace

TEST_CASE("canonical form and text") {
  CHECK(Rat(2, 4).str() == "1/2");
  CHECK(Rat(-3, -6).str() == "1/2");
  CHECK(Rat(3, -6).str() == "-1/2");
  CHECK(Rat(0, 7).str() == "0/1");
  CHECK(Rat(5).str() == "5/1");
  CHECK(Rat::parse("25/4") == Rat(25, 4));
  CHECK(Rat::parse(" -10/4 ") == Rat(-5, 2));
  CHECK(Rat::parse("0.25") == Rat(1, 4));
  CHECK(Rat::parse("-1.5") == Rat(-3, 2));
  CHECK(Rat::parse("90") == Rat(90));
  CHECK_THROWS_AS(Rat::parse("1/0"), twosided::Error);
  CHECK_THROWS_AS(Rat::parse("abc"), twosided::Error);
  CHECK_THROWS_AS(Rat::parse(""), twosided::Error);
  CHECK_THROWS_AS(Rat(1, 0), twosided::Error);
}

TEST_CASE("ordering and sign") {
  CHECK(Rat(1, 3) < Rat(1, 2));
  CHECK(Rat(-1, 2) < Rat(0));
  CHECK(Rat(7, 3) > Rat(2));
  CHECK(Rat(-4, 6).sign() == -1);
  CHECK(Rat(0).is_zero());
  CHECK(twosided::abs(Rat(-3, 4)) == Rat(3, 4));
}

TEST_CASE("large values spill and return to the inline form") {
  Rat big = Rat::parse("123456789012345678901234567891/2");
  CHECK(big.str() == "123456789012345678901234567891/2");
  Rat back = big - big + Rat(1, 3);
  CHECK(back == Rat(1, 3));
  CHECK(back.str() == "1/3");
  Rat x(INT64_MAX);
  Rat y = x * x;
  CHECK(y / x == x);
  CHECK((x + Rat(1)) - Rat(1) == x);
  Rat tiny(1, INT64_MAX);
  CHECK(tiny * tiny * Rat(INT64_MAX) == tiny);
}

TEST_CASE("arithmetic agrees with GMP on random operands") {
  std::mt19937_64 rng(7);
  auto draw = [&rng]() {
    std::uniform_int_distribution<int> kind(0, 3);
    std::uniform_int_distribution<std::int64_t> small(-1000, 1000);
    std::uniform_int_distribution<std::int64_t> wide(-(std::int64_t{1} << 62), std::int64_t{1} << 62);
    switch (kind(rng)) {
      case 0:
        return Rat(small(rng), std::max<std::int64_t>(1, std::abs(small(rng))));
      case 1:
        return Rat(wide(rng), std::int64_t{1} << 32);
      case 2:
        return Rat(wide(rng), std::max<std::int64_t>(1, std::abs(wide(rng))));
      default:
        return Rat::parse(std::to_string(wide(rng)) + "123456789/" + std::to_string(1 + std::abs(small(rng))));
    }
  };
  for (int t = 0; t < 20000; ++t) {
    Rat a = draw();
    Rat b = draw();
    mpq_class qa = as_mpq(a);
    mpq_class qb = as_mpq(b);
    REQUIRE(a + b == from_mpq(qa + qb));
    REQUIRE(a - b == from_mpq(qa - qb));
    REQUIRE(a * b == from_mpq(qa * qb));
    if (!b.is_zero()) REQUIRE(a / b == from_mpq(qa / qb));
    int c = cmp(qa, qb);
    REQUIRE((a < b) == (c < 0));
    REQUIRE((a == b) == (c == 0));
    REQUIRE((a + b).str() == from_mpq(qa + qb).str());
  }
}

TEST_CASE("infinite bound compares above every rational") {
  RatOrInf inf = RatOrInf::infinity();
  CHECK(inf > Rat(1000000));
  CHECK(RatOrInf(Rat(3)) < inf);
  CHECK(RatOrInf(Rat(3)) == Rat(3));
  CHECK(inf.str() == "inf");
  CHECK_THROWS_AS(inf.value(), twosided::Error);
}

TEST_CASE("hash is stable across equal values") {
  CHECK(Rat(2, 4).hash() == Rat(1, 2).hash());
  CHECK(Rat(1, 2).hash() != Rat(1, 3).hash());
}
