#include "twosided/rational.hpp"

#include <gmpxx.h>

#include <cctype>
#include <limits>
#include <ostream>

#include "twosided/error.hpp"

namespace twosided {

struct Rat::Big {
  mpq_class q;
};

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();

u128 uabs(i128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

std::uint64_t gcd64(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    if ((a >> 64) == 0 && (b >> 64) == 0) {
      return gcd64(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
    }
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits(i128 v) { return v >= -static_cast<i128>(kMax) && v <= static_cast<i128>(kMax); }

mpz_class to_mpz(i128 v) {
  u128 m = uabs(v);
  mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(m >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(m)));
  mpz_class r = (hi << 64) + lo;
  return v < 0 ? mpz_class(-r) : r;
}

}  // namespace

struct RatOps {
  static Rat small(std::int64_t n, std::int64_t d) {
    Rat r;
    r.num_ = n;
    r.den_ = d;
    return r;
  }

  static Rat from_mpq(mpq_class q) {
    q.canonicalize();
    const mpz_class& n = q.get_num();
    const mpz_class& d = q.get_den();
    if (mpz_fits_slong_p(n.get_mpz_t()) && mpz_fits_slong_p(d.get_mpz_t())) {
      long nl = n.get_si();
      long dl = d.get_si();
      if (nl != std::numeric_limits<long>::min()) return small(nl, dl);
    }
    Rat r;
    r.big_ = std::make_shared<const Rat::Big>(Rat::Big{std::move(q)});
    return r;
  }

  // n/d already reduced, d > 0.
  static Rat from_reduced(i128 n, i128 d) {
    if (fits(n) && fits(d)) return small(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
    mpq_class q(to_mpz(n), to_mpz(d));
    return from_mpq(std::move(q));
  }

  static Rat reduce(i128 n, i128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    u128 g = gcd128(uabs(n), static_cast<u128>(d));
    if (g > 1) {
      n /= static_cast<i128>(g);
      d /= static_cast<i128>(g);
    }
    return from_reduced(n, d);
  }

  static mpq_class to_mpq(const Rat& r) {
    if (r.big_) return r.big_->q;
    return mpq_class(mpz_class(static_cast<long>(r.num_)), mpz_class(static_cast<long>(r.den_)));
  }

  static Rat add(const Rat& a, const Rat& b) {
    if (a.big_ || b.big_) return from_mpq(to_mpq(a) + to_mpq(b));
    if (a.den_ == b.den_) return reduce(static_cast<i128>(a.num_) + b.num_, a.den_);
    std::uint64_t g = gcd64(static_cast<std::uint64_t>(a.den_), static_cast<std::uint64_t>(b.den_));
    if (g == 1) {
      i128 n = static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_;
      i128 d = static_cast<i128>(a.den_) * b.den_;
      return from_reduced(n, d);
    }
    auto gi = static_cast<std::int64_t>(g);
    std::int64_t ad = a.den_ / gi;
    std::int64_t bd = b.den_ / gi;
    i128 t = static_cast<i128>(a.num_) * bd + static_cast<i128>(b.num_) * ad;
    if (t == 0) return {};
    u128 g2 = gcd128(uabs(t), g);
    i128 n = t / static_cast<i128>(g2);
    i128 d = static_cast<i128>(ad) * (b.den_ / static_cast<std::int64_t>(g2));
    return from_reduced(n, d);
  }

  static Rat mul(const Rat& a, const Rat& b) {
    if (a.big_ || b.big_) return from_mpq(to_mpq(a) * to_mpq(b));
    if (a.num_ == 0 || b.num_ == 0) return {};
    auto g1 = static_cast<std::int64_t>(
        gcd64(static_cast<std::uint64_t>(a.num_ < 0 ? -a.num_ : a.num_), static_cast<std::uint64_t>(b.den_)));
    auto g2 = static_cast<std::int64_t>(
        gcd64(static_cast<std::uint64_t>(b.num_ < 0 ? -b.num_ : b.num_), static_cast<std::uint64_t>(a.den_)));
    i128 n = static_cast<i128>(a.num_ / g1) * (b.num_ / g2);
    i128 d = static_cast<i128>(a.den_ / g2) * (b.den_ / g1);
    return from_reduced(n, d);
  }

  static Rat inverse(const Rat& a) {
    require(!a.is_zero(), ErrorKind::kInvalidArgument, "division by zero");
    if (a.big_) {
      mpq_class q = to_mpq(a);
      mpq_inv(q.get_mpq_t(), q.get_mpq_t());
      return from_mpq(std::move(q));
    }
    return a.num_ < 0 ? small(-a.den_, -a.num_) : small(a.den_, a.num_);
  }

  static int cmp(const Rat& a, const Rat& b) {
    if (a.big_ || b.big_) {
      int c = ::cmp(to_mpq(a), to_mpq(b));
      return (c > 0) - (c < 0);
    }
    if (a.den_ == b.den_) return (a.num_ > b.num_) - (a.num_ < b.num_);
    i128 l = static_cast<i128>(a.num_) * b.den_;
    i128 r = static_cast<i128>(b.num_) * a.den_;
    return (l > r) - (l < r);
  }
};

Rat::Rat(std::int64_t n) : num_(n), den_(1) {
  if (n == std::numeric_limits<std::int64_t>::min()) *this = RatOps::from_reduced(n, 1);
}

Rat::Rat(std::int64_t n, std::int64_t d) {
  require(d != 0, ErrorKind::kInvalidArgument, "zero denominator");
  *this = RatOps::reduce(n, d);
}

Rat Rat::parse(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  require(!s.empty(), ErrorKind::kInvalidArgument, "empty rational literal");

  auto digits_only = [](std::string_view t, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && !t.empty() && (t[0] == '-' || t[0] == '+')) i = 1;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    }
    return true;
  };

  mpq_class q;
  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string n = s.substr(0, slash);
    std::string d = s.substr(slash + 1);
    require(digits_only(n, true) && digits_only(d, false), ErrorKind::kInvalidArgument,
            "malformed rational literal '" + s + "'");
    if (n[0] == '+') n = n.substr(1);
    mpz_class dz(d, 10);
    require(dz != 0, ErrorKind::kInvalidArgument, "zero denominator in '" + s + "'");
    q = mpq_class(mpz_class(n, 10), dz);
  } else if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string ip = s.substr(0, dot);
    std::string fp = s.substr(dot + 1);
    bool neg = !ip.empty() && ip[0] == '-';
    if (!ip.empty() && (ip[0] == '-' || ip[0] == '+')) ip = ip.substr(1);
    if (ip.empty()) ip = "0";
    require(digits_only(ip, false) && (fp.empty() || digits_only(fp, false)), ErrorKind::kInvalidArgument,
            "malformed decimal literal '" + s + "'");
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, fp.size());
    mpz_class num(ip + fp, 10);
    q = mpq_class(neg ? mpz_class(-num) : num, scale);
  } else {
    require(digits_only(s, true), ErrorKind::kInvalidArgument, "malformed rational literal '" + s + "'");
    if (s[0] == '+') s = s.substr(1);
    q = mpq_class(mpz_class(s, 10));
  }
  return RatOps::from_mpq(std::move(q));
}

std::string Rat::numerator_str() const {
  return big_ ? big_->q.get_num().get_str() : std::to_string(num_);
}

std::string Rat::denominator_str() const {
  return big_ ? big_->q.get_den().get_str() : std::to_string(den_);
}

std::string Rat::str() const { return numerator_str() + "/" + denominator_str(); }

double Rat::to_double() const {
  if (big_) return big_->q.get_d();
  return static_cast<double>(num_) / static_cast<double>(den_);
}

int Rat::sign() const {
  if (big_) return sgn(big_->q);
  return (num_ > 0) - (num_ < 0);
}

bool Rat::is_integer() const { return big_ ? big_->q.get_den() == 1 : den_ == 1; }

Rat Rat::operator-() const {
  if (big_) return RatOps::from_mpq(-big_->q);
  return RatOps::small(-num_, den_);
}

Rat& Rat::operator+=(const Rat& o) { return *this = RatOps::add(*this, o); }
Rat& Rat::operator-=(const Rat& o) { return *this = RatOps::add(*this, -o); }
Rat& Rat::operator*=(const Rat& o) { return *this = RatOps::mul(*this, o); }
Rat& Rat::operator/=(const Rat& o) { return *this = RatOps::mul(*this, RatOps::inverse(o)); }

bool operator==(const Rat& a, const Rat& b) {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (a.big_ && b.big_) return a.big_->q == b.big_->q;
  return false;  // canonical forms differ in magnitude class
}

std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
  int c = RatOps::cmp(a, b);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::uint64_t Rat::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : str()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

const Rat& RatOrInf::value() const {
  require(!inf_, ErrorKind::kPrecondition, "value() on infinite bound");
  return v_;
}

}  // namespace twosided
