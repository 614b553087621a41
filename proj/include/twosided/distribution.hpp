#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "twosided/rational.hpp"

namespace twosided {

struct Atom {
  Rat value;
  Rat prob;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Value or cost law: finitely many atoms, or uniform on [lo, hi].
class Distribution {
 public:
  /// Atoms must be strictly ascending, nonnegative, with positive probabilities summing to 1.
  static Distribution discrete(std::vector<Atom> atoms);
  static Distribution point(const Rat& v);
  static Distribution uniform(const Rat& lo, const Rat& hi);

  bool is_discrete() const { return discrete_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const Rat& lo() const { return lo_; }
  const Rat& hi() const { return hi_; }
  Rat support_min() const { return discrete_ ? atoms_.front().value : lo_; }
  Rat support_max() const { return discrete_ ? atoms_.back().value : hi_; }
  bool in_support(const Rat& x) const;
  /// Ironed virtual value / cost per atom, aligned with atoms().
  const std::vector<Rat>& atom_virtual_values() const { return ivv_; }
  const std::vector<Rat>& atom_virtual_costs() const { return ivc_; }
  std::string describe() const;

  friend bool operator==(const Distribution& a, const Distribution& b) {
    return a.discrete_ == b.discrete_ && a.atoms_ == b.atoms_ && a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

 private:
  bool discrete_ = true;
  std::vector<Atom> atoms_;
  Rat lo_, hi_;
  std::vector<Rat> ivv_, ivc_;
};

Rat cdf(const Distribution& d, const Rat& x);
Rat prob_at_least(const Distribution& d, const Rat& p);
Rat prob_at_most(const Distribution& d, const Rat& p);

/// Law of X given X >= c (resp. X <= c). Throws when the event is empty; a uniform law
/// conditioned on its endpoint degenerates to a point mass there.
Distribution condition_at_least(const Distribution& d, const Rat& c);
Distribution condition_at_most(const Distribution& d, const Rat& c);

Rat ironed_virtual_value(const Distribution& d, const Rat& v);
Rat ironed_virtual_cost(const Distribution& d, const Rat& s);
/// Smallest support value whose ironed virtual value is at least theta.
Rat inverse_ironed_virtual_value(const Distribution& d, const Rat& theta);
/// Largest support cost whose ironed virtual cost is at most theta.
Rat inverse_ironed_virtual_cost(const Distribution& d, const Rat& theta);

struct OfferResult {
  Rat price;
  Rat expected_utility;
};

/// Seller with `cost` posts the lowest price in [cost, cap] maximizing (p - cost) * P(X >= p).
OfferResult optimal_seller_offer(const Rat& cost, const Distribution& target, const RatOrInf& cap);
/// Buyer with `value` posts the highest price in [floor, value] maximizing (value - p) * P(X <= p).
OfferResult optimal_buyer_offer(const Rat& value, const Distribution& target, const Rat& floor);

/// Independent generator for replication `index` of a run seeded with `seed`.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index);

/// Uniform draws land on the grid lo + k (hi - lo) / 2^32; atoms are picked by inverse CDF
/// against a 62-bit uniform fraction.
Rat sample(const Distribution& d, std::mt19937_64& rng);

}  // namespace twosided
