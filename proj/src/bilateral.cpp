#include "twosided/bilateral.hpp"

#include "twosided/error.hpp"

namespace twosided {

RoParams RoParams::unconstrained(const Distribution& buyer_dist, const Distribution& seller_dist) {
  return RoParams{RatOrInf::infinity(), buyer_dist, Rat{}, seller_dist};
}

void RoParams::validate() const {
  require(bo_floor.sign() >= 0, ErrorKind::kInvalidArgument, "offer floor must be nonnegative");
  require(so_cap >= bo_floor, ErrorKind::kInvalidArgument,
          "offer cap " + so_cap.str() + " is below floor " + bo_floor.str());
  require(so_cap >= bo_target.support_max(), ErrorKind::kInvalidArgument,
          "offer cap " + so_cap.str() + " is below the support of " + bo_target.describe());
  require(bo_floor <= so_target.support_min(), ErrorKind::kInvalidArgument,
          "offer floor " + bo_floor.str() + " is above the support of " + so_target.describe());
}

BilateralOutcome run_so(const Rat& s, const Rat& b, const RoParams& params) {
  require(params.so_cap >= s, ErrorKind::kPrecondition,
          "seller cost " + s.str() + " exceeds offer cap " + params.so_cap.str());
  Rat offer = optimal_seller_offer(s, params.so_target, params.so_cap).price;
  BilateralOutcome out;
  out.offerer = Side::kSeller;
  if (offer <= b) {
    out.traded = true;
    out.price = offer;
  }
  return out;
}

BilateralOutcome run_bo(const Rat& s, const Rat& b, const RoParams& params) {
  require(b >= params.bo_floor, ErrorKind::kPrecondition,
          "buyer value " + b.str() + " is below offer floor " + params.bo_floor.str());
  Rat offer = optimal_buyer_offer(b, params.bo_target, params.bo_floor).price;
  BilateralOutcome out;
  out.offerer = Side::kBuyer;
  if (offer >= s) {
    out.traded = true;
    out.price = offer;
  }
  return out;
}

BilateralOutcome run_ro(const Rat& s, const Rat& b, const RoParams& params, Coin coin) {
  return coin == Coin::kSellerSide ? run_so(s, b, params) : run_bo(s, b, params);
}

Rat expected_gft_ro(const Rat& s, const Rat& b, const RoParams& params) {
  return (run_so(s, b, params).gains(s, b) + run_bo(s, b, params).gains(s, b)) / Rat(2);
}

}  // namespace twosided
