#pragma once

#include <optional>

#include "twosided/distribution.hpp"
#include "twosided/model.hpp"
#include "twosided/rational.hpp"

namespace twosided {

/// Offer constraints and beliefs for one buyer/seller pair.
struct RoParams {
  RatOrInf so_cap = RatOrInf::infinity();  // highest price the seller may post
  Distribution so_target;                  // seller's belief about the buyer's value
  Rat bo_floor;                            // lowest price the buyer may post
  Distribution bo_target;                  // buyer's belief about the seller's cost

  /// Unconstrained parameters: no cap, zero floor.
  static RoParams unconstrained(const Distribution& buyer_dist, const Distribution& seller_dist);
  /// Throws unless cap >= floor >= 0, the cap covers bo_target and the floor lies below so_target.
  void validate() const;
};

struct BilateralOutcome {
  bool traded = false;
  std::optional<Rat> price;  // the posted price; present iff traded
  Side offerer = Side::kSeller;

  Rat gains(const Rat& s, const Rat& b) const { return traded ? b - s : Rat{}; }
};

/// Seller posts the optimal capped offer; the buyer accepts iff it is at most her value.
BilateralOutcome run_so(const Rat& s, const Rat& b, const RoParams& params);
/// Buyer posts the optimal floored offer; the seller accepts iff it is at least his cost.
BilateralOutcome run_bo(const Rat& s, const Rat& b, const RoParams& params);
/// kSellerSide runs the seller-offer branch, kBuyerSide the buyer-offer branch.
BilateralOutcome run_ro(const Rat& s, const Rat& b, const RoParams& params, Coin coin);

/// Average of both branches' gains.
Rat expected_gft_ro(const Rat& s, const Rat& b, const RoParams& params);

}  // namespace twosided
