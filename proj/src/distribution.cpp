#include "twosided/distribution.hpp"

#include <algorithm>
#include <optional>

#include "twosided/error.hpp"

namespace twosided {

namespace {

struct Pt {
  Rat x, y;
};

// z-component of (a - o) x (b - o)
Rat cross(const Pt& o, const Pt& a, const Pt& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Slope of the hull segment over each interval (pts[k-1].x, pts[k].x], k = 1..n.
// upper=true keeps the concave envelope, false the convex one.
std::vector<Rat> envelope_slopes(const std::vector<Pt>& pts, bool upper) {
  std::vector<std::size_t> hull;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    while (hull.size() >= 2) {
      int turn = cross(pts[hull[hull.size() - 2]], pts[hull.back()], pts[k]).sign();
      if (upper ? turn >= 0 : turn <= 0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(k);
  }
  std::vector<Rat> slopes(pts.size() - 1);
  for (std::size_t h = 1; h < hull.size(); ++h) {
    const Pt& a = pts[hull[h - 1]];
    const Pt& b = pts[hull[h]];
    Rat slope = (b.y - a.y) / (b.x - a.x);
    for (std::size_t k = hull[h - 1] + 1; k <= hull[h]; ++k) slopes[k - 1] = slope;
  }
  return slopes;
}

std::size_t atom_index(const Distribution& d, const Rat& v) {
  const auto& a = d.atoms();
  auto it = std::lower_bound(a.begin(), a.end(), v, [](const Atom& x, const Rat& y) { return x.value < y; });
  require(it != a.end() && it->value == v, ErrorKind::kOutOfSupport,
          v.str() + " is not in the support of " + d.describe());
  return static_cast<std::size_t>(it - a.begin());
}

}  // namespace

Distribution Distribution::discrete(std::vector<Atom> atoms) {
  require(!atoms.empty(), ErrorKind::kInvalidArgument, "distribution needs at least one atom");
  Rat total;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    require(atoms[k].value.sign() >= 0, ErrorKind::kInvalidArgument, "support must be nonnegative");
    require(atoms[k].prob.sign() > 0, ErrorKind::kInvalidArgument, "atom probabilities must be positive");
    if (k > 0) require(atoms[k - 1].value < atoms[k].value, ErrorKind::kInvalidArgument, "atoms must be strictly ascending");
    total += atoms[k].prob;
  }
  require(total == Rat(1), ErrorKind::kInvalidArgument, "atom probabilities sum to " + total.str());
  Distribution d;
  d.discrete_ = true;
  d.atoms_ = std::move(atoms);
  const std::size_t n = d.atoms_.size();

  // revenue curve over values in descending order: (P(X >= v), v * P(X >= v))
  std::vector<Pt> rev{{Rat{}, Rat{}}};
  Rat q;
  for (std::size_t k = n; k-- > 0;) {
    q += d.atoms_[k].prob;
    rev.push_back({q, d.atoms_[k].value * q});
  }
  auto up = envelope_slopes(rev, true);
  d.ivv_.resize(n);
  for (std::size_t r = 0; r < n; ++r) d.ivv_[n - 1 - r] = up[r];

  // cost curve over costs in ascending order: (P(X <= s), s * P(X <= s))
  std::vector<Pt> cost{{Rat{}, Rat{}}};
  Rat g;
  for (std::size_t k = 0; k < n; ++k) {
    g += d.atoms_[k].prob;
    cost.push_back({g, d.atoms_[k].value * g});
  }
  d.ivc_ = envelope_slopes(cost, false);
  return d;
}

Distribution Distribution::point(const Rat& v) { return discrete({{v, Rat(1)}}); }

Distribution Distribution::uniform(const Rat& lo, const Rat& hi) {
  require(lo.sign() >= 0, ErrorKind::kInvalidArgument, "support must be nonnegative");
  require(lo < hi, ErrorKind::kInvalidArgument, "uniform needs lo < hi");
  Distribution d;
  d.discrete_ = false;
  d.lo_ = lo;
  d.hi_ = hi;
  return d;
}

bool Distribution::in_support(const Rat& x) const {
  if (!discrete_) return lo_ <= x && x <= hi_;
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x, [](const Atom& a, const Rat& y) { return a.value < y; });
  return it != atoms_.end() && it->value == x;
}

std::string Distribution::describe() const {
  if (!discrete_) return "Uniform[" + lo_.str() + ", " + hi_.str() + "]";
  std::string s = "Discrete{";
  for (std::size_t k = 0; k < atoms_.size(); ++k) {
    if (k) s += ", ";
    s += atoms_[k].value.str() + ":" + atoms_[k].prob.str();
  }
  return s + "}";
}

Rat prob_at_most(const Distribution& d, const Rat& p) {
  if (!d.is_discrete()) {
    if (p <= d.lo()) return {};
    if (p >= d.hi()) return Rat(1);
    return (p - d.lo()) / (d.hi() - d.lo());
  }
  Rat total;
  for (const auto& a : d.atoms()) {
    if (a.value > p) break;
    total += a.prob;
  }
  return total;
}

Rat cdf(const Distribution& d, const Rat& x) { return prob_at_most(d, x); }

Rat prob_at_least(const Distribution& d, const Rat& p) {
  if (!d.is_discrete()) {
    if (p <= d.lo()) return Rat(1);
    if (p >= d.hi()) return {};
    return (d.hi() - p) / (d.hi() - d.lo());
  }
  Rat total;
  for (auto it = d.atoms().rbegin(); it != d.atoms().rend() && it->value >= p; ++it) total += it->prob;
  return total;
}

Distribution condition_at_least(const Distribution& d, const Rat& c) {
  if (!d.is_discrete()) {
    require(c <= d.hi(), ErrorKind::kPrecondition, "conditioning " + d.describe() + " on >= " + c.str() + " has zero mass");
    if (c == d.hi()) return Distribution::point(c);  // limit of shrinking upper tails
    return c <= d.lo() ? d : Distribution::uniform(c, d.hi());
  }
  std::vector<Atom> kept;
  for (const auto& a : d.atoms())
    if (a.value >= c) kept.push_back(a);
  require(!kept.empty(), ErrorKind::kPrecondition, "conditioning " + d.describe() + " on >= " + c.str() + " has zero mass");
  if (kept.size() == d.atoms().size()) return d;
  Rat mass;
  for (const auto& a : kept) mass += a.prob;
  for (auto& a : kept) a.prob /= mass;
  return Distribution::discrete(std::move(kept));
}

Distribution condition_at_most(const Distribution& d, const Rat& c) {
  if (!d.is_discrete()) {
    require(c >= d.lo(), ErrorKind::kPrecondition, "conditioning " + d.describe() + " on <= " + c.str() + " has zero mass");
    if (c == d.lo()) return Distribution::point(c);
    return c >= d.hi() ? d : Distribution::uniform(d.lo(), c);
  }
  std::vector<Atom> kept;
  for (const auto& a : d.atoms())
    if (a.value <= c) kept.push_back(a);
  require(!kept.empty(), ErrorKind::kPrecondition, "conditioning " + d.describe() + " on <= " + c.str() + " has zero mass");
  if (kept.size() == d.atoms().size()) return d;
  Rat mass;
  for (const auto& a : kept) mass += a.prob;
  for (auto& a : kept) a.prob /= mass;
  return Distribution::discrete(std::move(kept));
}

Rat ironed_virtual_value(const Distribution& d, const Rat& v) {
  if (!d.is_discrete()) {
    require(d.in_support(v), ErrorKind::kOutOfSupport, v.str() + " is not in the support of " + d.describe());
    return v + v - d.hi();
  }
  return d.atom_virtual_values()[atom_index(d, v)];
}

Rat ironed_virtual_cost(const Distribution& d, const Rat& s) {
  if (!d.is_discrete()) {
    require(d.in_support(s), ErrorKind::kOutOfSupport, s.str() + " is not in the support of " + d.describe());
    return s + s - d.lo();
  }
  return d.atom_virtual_costs()[atom_index(d, s)];
}

Rat inverse_ironed_virtual_value(const Distribution& d, const Rat& theta) {
  if (!d.is_discrete()) {
    require(theta <= d.hi(), ErrorKind::kOutOfSupport, "virtual value " + theta.str() + " is unattainable");
    return max(d.lo(), (theta + d.hi()) / Rat(2));
  }
  const auto& iv = d.atom_virtual_values();
  for (std::size_t k = 0; k < iv.size(); ++k)
    if (iv[k] >= theta) return d.atoms()[k].value;
  fail(ErrorKind::kOutOfSupport, "virtual value " + theta.str() + " is unattainable");
}

Rat inverse_ironed_virtual_cost(const Distribution& d, const Rat& theta) {
  if (!d.is_discrete()) {
    require(theta >= d.lo(), ErrorKind::kOutOfSupport, "virtual cost " + theta.str() + " is unattainable");
    return min(d.hi(), (theta + d.lo()) / Rat(2));
  }
  const auto& ic = d.atom_virtual_costs();
  for (std::size_t k = ic.size(); k-- > 0;)
    if (ic[k] <= theta) return d.atoms()[k].value;
  fail(ErrorKind::kOutOfSupport, "virtual cost " + theta.str() + " is unattainable");
}

OfferResult optimal_seller_offer(const Rat& cost, const Distribution& target, const RatOrInf& cap) {
  require(cap >= cost, ErrorKind::kPrecondition, "seller offer cap " + cap.str() + " is below cost " + cost.str());
  std::vector<Rat> cand{cost};
  if (!cap.is_inf()) cand.push_back(cap.value());
  if (target.is_discrete()) {
    for (const auto& a : target.atoms()) cand.push_back(a.value);
  } else {
    Rat mid = max((cost + target.hi()) / Rat(2), target.lo());
    if (!cap.is_inf()) mid = min(mid, cap.value());
    cand.push_back(mid);
    cand.push_back(target.lo());
  }
  std::optional<OfferResult> best;
  for (const auto& p : cand) {
    if (p < cost || cap < p) continue;
    Rat u = (p - cost) * prob_at_least(target, p);
    if (!best || u > best->expected_utility || (u == best->expected_utility && p < best->price)) {
      best = OfferResult{p, u};
    }
  }
  return *best;
}

OfferResult optimal_buyer_offer(const Rat& value, const Distribution& target, const Rat& floor) {
  require(value >= floor, ErrorKind::kPrecondition, "buyer value " + value.str() + " is below floor " + floor.str());
  std::vector<Rat> cand{value, floor};
  if (target.is_discrete()) {
    for (const auto& a : target.atoms()) cand.push_back(a.value);
  } else {
    cand.push_back(min(max((value + target.lo()) / Rat(2), floor), target.hi()));
    cand.push_back(target.hi());
  }
  std::optional<OfferResult> best;
  for (const auto& p : cand) {
    if (p < floor || p > value) continue;
    Rat u = (value - p) * prob_at_most(target, p);
    if (!best || u > best->expected_utility || (u == best->expected_utility && p > best->price)) {
      best = OfferResult{p, u};
    }
  }
  return *best;
}

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

Rat sample(const Distribution& d, std::mt19937_64& rng) {
  if (!d.is_discrete()) {
    auto k = static_cast<std::int64_t>(rng() >> 32);
    return d.lo() + (d.hi() - d.lo()) * Rat(k, std::int64_t{1} << 32);
  }
  const auto& atoms = d.atoms();
  if (atoms.size() == 1) return atoms.front().value;
  Rat u(static_cast<std::int64_t>(rng() >> 2), std::int64_t{1} << 62);
  Rat cum;
  for (const auto& a : atoms) {
    cum += a.prob;
    if (u < cum) return a.value;
  }
  return atoms.back().value;
}

}  // namespace twosided
