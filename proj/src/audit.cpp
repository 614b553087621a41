#include "twosided/audit.hpp"

#include <algorithm>
#include <array>

#include "twosided/error.hpp"
#include "twosided/lp.hpp"
#include "twosided/matching.hpp"

namespace twosided {

void AuditReport::record_failure(std::string what) {
  if (passed) witness = std::move(what);
  passed = false;
}

void AuditReport::merge(const AuditReport& other) {
  if (!other.passed && passed) {
    passed = false;
    witness = other.witness;
  }
  checks += other.checks;
}

ProfileSpace::ProfileSpace(const Scenario& sc, std::int64_t budget) : buyers_(sc.graph.buyer_count()) {
  sc.validate();
  for (const auto& d : sc.buyer_dists) laws_.push_back(&d);
  for (const auto& d : sc.seller_dists) laws_.push_back(&d);
  for (const auto* d : laws_) {
    require(d->is_discrete(), ErrorKind::kPrecondition, "exact enumeration needs finite supports, got " + d->describe());
    auto r = static_cast<std::int64_t>(d->atoms().size());
    require(size_ <= budget / r, ErrorKind::kBudgetExceeded,
            "profile space exceeds the enumeration budget of " + std::to_string(budget));
    radix_.push_back(r);
    size_ *= r;
  }
  stride_.assign(laws_.size(), 1);
  for (std::size_t k = laws_.size(); k-- > 1;) stride_[k - 1] = stride_[k] * radix_[k];
}

AgentId ProfileSpace::agent(int k) const { return k < buyers_ ? AgentId::buyer(k) : AgentId::seller(k - buyers_); }

ValuationProfile ProfileSpace::profile(std::int64_t idx) const {
  ValuationProfile p;
  for (int k = 0; k < agent_count(); ++k) {
    const Rat& v = laws_[k]->atoms()[digit(idx, k)].value;
    (k < buyers_ ? p.b : p.s).push_back(v);
  }
  return p;
}

Rat ProfileSpace::probability(std::int64_t idx) const {
  Rat pr(1);
  for (int k = 0; k < agent_count(); ++k) pr *= laws_[k]->atoms()[digit(idx, k)].prob;
  return pr;
}

namespace {

std::string describe(const ValuationProfile& p) {
  std::string s = "b=(";
  for (std::size_t i = 0; i < p.b.size(); ++i) s += (i ? "," : "") + p.b[i].str();
  s += ") s=(";
  for (std::size_t j = 0; j < p.s.size(); ++j) s += (j ? "," : "") + p.s[j].str();
  return s + ")";
}

void note_margin(AuditReport& r, const Rat& slack, bool first) {
  if (first || slack < r.margin) r.margin = slack;
}

MechanismFn bind(const Scenario& sc, MechanismKind k) {
  return [&sc, k](const ValuationProfile& p, Coin c) { return run_mechanism(k, sc, p, c); };
}

// Outcomes for every profile under both coins.
std::array<std::vector<TradeOutcome>, 2> all_outcomes(const ProfileSpace& ps, const MechanismFn& mech) {
  std::array<std::vector<TradeOutcome>, 2> out;
  for (Coin c : kBothCoins) {
    auto& v = out[static_cast<int>(c)];
    v.reserve(static_cast<std::size_t>(ps.size()));
    for (std::int64_t idx = 0; idx < ps.size(); ++idx) v.push_back(mech(ps.profile(idx), c));
  }
  return out;
}

Rat pair_gain(const ValuationProfile& p, const AgentId& u, const AgentId& v) {
  const AgentId& buyer = u.is_buyer() ? u : v;
  const AgentId& seller = u.is_buyer() ? v : u;
  return p.b[buyer.index] - p.s[seller.index];
}

}  // namespace

AuditReport audit_ex_post(const TradeOutcome& outcome, const ValuationProfile& p, bool strong) {
  AuditReport r;
  r.property = strong ? "ex-post IR and strong direct-trade budget balance" : "ex-post IR and direct-trade budget balance";
  r.instance = outcome.mechanism + " on " + describe(p);
  bool first = true;
  for (const auto& t : outcome.trades) {
    Rat buyer_slack = p.b.at(t.buyer) - t.buyer_payment;
    Rat seller_slack = t.seller_receipt - p.s.at(t.seller);
    Rat budget = t.buyer_payment - t.seller_receipt;
    note_margin(r, min(buyer_slack, min(seller_slack, budget)), first);
    first = false;
    r.checks += 3;
    std::string pair = "pair (" + std::to_string(t.buyer) + "," + std::to_string(t.seller) + ")";
    if (buyer_slack.sign() < 0) r.record_failure(pair + ": buyer pays " + t.buyer_payment.str() + " above value");
    if (seller_slack.sign() < 0) r.record_failure(pair + ": seller receives " + t.seller_receipt.str() + " below cost");
    if (budget.sign() < 0 || (strong && !budget.is_zero()))
      r.record_failure(pair + ": buyer pays " + t.buyer_payment.str() + ", seller receives " + t.seller_receipt.str());
  }
  return r;
}

AuditReport audit_ex_post_ir(const TradeOutcome& outcome, const ValuationProfile& p) {
  AuditReport r;
  r.property = "ex-post IR";
  r.instance = outcome.mechanism + " on " + describe(p);
  bool first = true;
  for (const auto& t : outcome.trades) {
    Rat buyer_slack = p.b.at(t.buyer) - t.buyer_payment;
    Rat seller_slack = t.seller_receipt - p.s.at(t.seller);
    note_margin(r, min(buyer_slack, seller_slack), first);
    first = false;
    r.checks += 2;
    std::string pair = "pair (" + std::to_string(t.buyer) + "," + std::to_string(t.seller) + ")";
    if (buyer_slack.sign() < 0) r.record_failure(pair + ": buyer pays " + t.buyer_payment.str() + " above value");
    if (seller_slack.sign() < 0) r.record_failure(pair + ": seller receives " + t.seller_receipt.str() + " below cost");
  }
  return r;
}

AuditReport audit_bic_exact(const Scenario& sc, const MechanismFn& mech, const std::string& label, std::int64_t budget) {
  ProfileSpace ps(sc, budget / 2);
  auto outcomes = all_outcomes(ps, mech);
  std::vector<Rat> prob;
  prob.reserve(static_cast<std::size_t>(ps.size()));
  for (std::int64_t idx = 0; idx < ps.size(); ++idx) prob.push_back(ps.probability(idx));

  AuditReport r;
  r.property = "interim incentive compatibility per coin";
  r.instance = label;
  bool first = true;
  for (Coin c : kBothCoins) {
    const auto& outs = outcomes[static_cast<int>(c)];
    for (int k = 0; k < ps.agent_count(); ++k) {
      AgentId a = ps.agent(k);
      const auto& atoms = ps.law(k).atoms();
      std::size_t n = atoms.size();
      std::vector<Rat> trade_prob(n), money(n);  // expected over the others, per report
      for (std::int64_t idx = 0; idx < ps.size(); ++idx) {
        const Trade* t = outs[static_cast<std::size_t>(idx)].trade_of(a);
        if (!t) continue;
        int d = ps.digit(idx, k);
        Rat others = prob[static_cast<std::size_t>(idx)] / atoms[d].prob;
        trade_prob[d] += others;
        money[d] += others * (a.is_buyer() ? t->buyer_payment : t->seller_receipt);
      }
      auto utility = [&](std::size_t report, const Rat& truth) {
        return a.is_buyer() ? trade_prob[report] * truth - money[report] : money[report] - trade_prob[report] * truth;
      };
      for (std::size_t ti = 0; ti < n; ++ti) {
        const Rat& truth = atoms[ti].value;
        Rat honest = utility(ti, truth);
        if (honest.sign() < 0)
          r.record_failure(a.str() + " of type " + truth.str() + " has negative interim utility under the " +
                           coin_name(c) + " coin");
        for (std::size_t ri = 0; ri < n; ++ri) {
          if (ri == ti) continue;
          Rat regret = utility(ri, truth) - honest;
          ++r.checks;
          if (first || regret > r.margin) r.margin = regret;
          first = false;
          if (regret.sign() > 0)
            r.record_failure(a.str() + " of type " + truth.str() + " gains " + regret.str() + " by reporting " +
                             atoms[ri].value.str() + " under the " + coin_name(c) + " coin");
        }
      }
    }
  }
  return r;
}

AuditReport audit_bic_exact(const Scenario& sc, MechanismKind k, std::int64_t budget) {
  return audit_bic_exact(sc, bind(sc, k), mechanism_id(k), budget);
}

AuditReport audit_ex_post_ic(const Scenario& sc, const MechanismFn& mech, const std::string& label, std::int64_t budget) {
  ProfileSpace ps(sc, budget / 2);
  auto outcomes = all_outcomes(ps, mech);
  AuditReport r;
  r.property = "ex-post incentive compatibility";
  r.instance = label;
  bool first = true;
  for (Coin c : kBothCoins) {
    const auto& outs = outcomes[static_cast<int>(c)];
    for (std::int64_t idx = 0; idx < ps.size(); ++idx) {
      ValuationProfile p = ps.profile(idx);
      for (int k = 0; k < ps.agent_count(); ++k) {
        AgentId a = ps.agent(k);
        const Rat& truth = p.value_of(a);
        Rat honest = outs[static_cast<std::size_t>(idx)].utility(a, truth);
        const auto& atoms = ps.law(k).atoms();
        for (int d = 0; d < static_cast<int>(atoms.size()); ++d) {
          if (d == ps.digit(idx, k)) continue;
          Rat regret = outs[static_cast<std::size_t>(ps.with_digit(idx, k, d))].utility(a, truth) - honest;
          ++r.checks;
          if (first || regret > r.margin) r.margin = regret;
          first = false;
          if (regret.sign() > 0)
            r.record_failure(a.str() + " at " + describe(p) + " gains " + regret.str() + " by reporting " +
                             atoms[d].value.str() + " under the " + coin_name(c) + " coin");
        }
      }
    }
  }
  return r;
}

AuditReport audit_ex_post_ic(const Scenario& sc, MechanismKind k, std::int64_t budget) {
  return audit_ex_post_ic(sc, bind(sc, k), mechanism_id(k), budget);
}

AuditReport check_half_rvwm(MechanismKind k, const Scenario& sc, const ValuationProfile& p) {
  AuditReport r;
  r.property = "at least half the virtual mechanism's expected GFT";
  r.instance = std::string(mechanism_id(k)) + " on " + describe(p);
  Rat mine = expected_gft(k, sc, p);
  Rat half = rvwm_expected_gft(sc, p) / Rat(2);
  r.margin = mine - half;
  r.checks = 1;
  if (r.margin.sign() < 0) r.record_failure("expected GFT " + mine.str() + " is below " + half.str());
  return r;
}

AuditReport check_expost_ratio(const TradeOutcome& outcome, const MarketGraph& g, const ValuationProfile& p) {
  AuditReport r;
  r.property = "realized fraction of first-best GFT";
  r.instance = outcome.mechanism + " on " + describe(p);
  ClassStats st = class_stats(g, p);
  Rat opt = gft(st.first_best, p);
  Rat got = outcome.gains(p);
  bool first = true;
  auto bound = [&](const Rat& frac, const char* name) {
    Rat slack = got - frac * opt;
    note_margin(r, slack, first);
    first = false;
    ++r.checks;
    if (slack.sign() < 0)
      r.record_failure("GFT " + got.str() + " is below " + name + " " + frac.str() + " of " + opt.str());
  };
  const Rat half(1, 2);
  if (st.alpha >= half) bound(st.alpha, "alpha");
  if (st.beta >= half) bound(st.beta, "beta");
  if (g.is_complete()) {
    int q = efficient_trade_size_q(p);
    if (q >= 2) bound(Rat(1) - Rat(1, q), "(q-1)/q");
  }
  return r;
}

namespace {

// Checks one union of the first-best matching m with a virtual matching mv. `favoured` is the
// side whose weights differ between the two: buyers for the seller-side rule.
void check_union(const MarketGraph& g, const ValuationProfile& p, const Matching& m, const Matching& mv, Side favoured,
                 const std::string& tag, AuditReport& r) {
  for (auto comp : alternating_decomposition(m, mv)) {
    ++r.checks;
    if (comp.cycle) {
      if (comp.vertices.size() != 2) r.record_failure(tag + ": alternating cycle through " +
                                                      std::to_string(comp.vertices.size()) + " agents");
      continue;
    }
    auto opens = [&](const AlternatingComponent& c) {
      return c.vertices.front().side == favoured && c.edges.front() == EdgeSource::kFirst;
    };
    if (!opens(comp)) {
      std::reverse(comp.vertices.begin(), comp.vertices.end());
      std::reverse(comp.edges.begin(), comp.edges.end());
    }
    if (!opens(comp)) {
      r.record_failure(tag + ": path from " + comp.vertices.front().str() + " to " + comp.vertices.back().str() +
                       " does not open with a first-best edge on the favoured side");
      continue;
    }
    const auto& v = comp.vertices;
    const std::size_t len = comp.edges.size();

    // interior agents of the other side survive the removal of their first-best partner
    for (std::size_t k = 1; k + 1 < v.size(); ++k) {
      if (v[k].side == favoured) continue;
      const AgentId& partner = comp.edges[k - 1] == EdgeSource::kFirst ? v[k - 1] : v[k + 1];
      ++r.checks;
      if (!matching_without(g, p, partner).contains(v[k]))
        r.record_failure(tag + ": interior " + v[k].str() + " leaves the first best without " + partner.str());
    }

    if (len % 2 == 1 && len >= 3) {
      const AgentId& head = v[0];
      const AgentId& tail_fav = v[v.size() - 2];
      const AgentId& tail_other = v.back();
      bool stronger = favoured == Side::kBuyer ? p.b[tail_fav.index] > p.b[head.index]
                                               : p.s[tail_fav.index] < p.s[head.index];
      ++r.checks;
      if (stronger) {
        if (!matching_without(g, p, tail_other).contains(tail_fav))
          r.record_failure(tag + ": " + tail_fav.str() + " drops out of the first best without " + tail_other.str());
      } else {
        Rat kept, virt;
        for (std::size_t e = 0; e < len; ++e) {
          Rat gain = pair_gain(p, v[e], v[e + 1]);
          if (comp.edges[e] == EdgeSource::kFirst) {
            if (e + 1 < len) kept += gain;
          } else {
            virt += gain;
          }
        }
        if (kept < virt)
          r.record_failure(tag + ": truncated first-best GFT " + kept.str() + " is below virtual GFT " + virt.str() +
                           " on the path from " + head.str());
      }
    }
  }
}

}  // namespace

AuditReport check_alternating_paths(const Scenario& sc, const ValuationProfile& p) {
  AuditReport r;
  r.property = "alternating-path structure";
  r.instance = describe(p);
  Matching m = first_best(sc.graph, p);
  check_union(sc.graph, p, m, run_gsom(sc, p), Side::kBuyer, "seller-side", r);
  check_union(sc.graph, p, m, run_gbom(sc, p), Side::kSeller, "buyer-side", r);
  return r;
}

Rat first_best_bilateral(const Distribution& buyer, const Distribution& seller) {
  require(buyer.is_discrete() && seller.is_discrete(), ErrorKind::kPrecondition, "bilateral benchmarks need finite supports");
  Rat total;
  for (const auto& b : buyer.atoms())
    for (const auto& s : seller.atoms())
      if (b.value > s.value) total += b.prob * s.prob * (b.value - s.value);
  return total;
}

Rat second_best_bilateral(const Distribution& buyer, const Distribution& seller) {
  require(buyer.is_discrete() && seller.is_discrete(), ErrorKind::kPrecondition, "bilateral benchmarks need finite supports");
  const auto& B = buyer.atoms();
  const auto& S = seller.atoms();
  const std::size_t nb = B.size();
  const std::size_t ns = S.size();
  // allocation x(k,l), then interim buyer utilities, then interim seller utilities
  auto xv = [&](std::size_t k, std::size_t l) { return k * ns + l; };
  const std::size_t ub = nb * ns;
  const std::size_t us = ub + nb;
  const std::size_t width = us + ns;

  LinearProgram lp;
  lp.objective.assign(width, Rat{});
  for (std::size_t k = 0; k < nb; ++k)
    for (std::size_t l = 0; l < ns; ++l) lp.objective[xv(k, l)] = B[k].prob * S[l].prob * (B[k].value - S[l].value);

  for (std::size_t k = 0; k < nb; ++k) {
    for (std::size_t l = 0; l < ns; ++l) {
      std::vector<Rat> row(width);
      row[xv(k, l)] = Rat(1);
      lp.add_row(std::move(row), Rat(1));
    }
  }
  // type k must not envy type k2: U(k2) + (b_k - b_k2) X(k2) <= U(k)
  for (std::size_t k = 0; k < nb; ++k) {
    for (std::size_t k2 = 0; k2 < nb; ++k2) {
      if (k == k2) continue;
      std::vector<Rat> row(width);
      row[ub + k2] += Rat(1);
      row[ub + k] -= Rat(1);
      for (std::size_t l = 0; l < ns; ++l) row[xv(k2, l)] = (B[k].value - B[k2].value) * S[l].prob;
      lp.add_row(std::move(row), Rat{});
    }
  }
  // seller type l versus l2: U(l2) - (s_l - s_l2) X(l2) <= U(l)
  for (std::size_t l = 0; l < ns; ++l) {
    for (std::size_t l2 = 0; l2 < ns; ++l2) {
      if (l == l2) continue;
      std::vector<Rat> row(width);
      row[us + l2] += Rat(1);
      row[us + l] -= Rat(1);
      for (std::size_t k = 0; k < nb; ++k) row[xv(k, l2)] = -(S[l].value - S[l2].value) * B[k].prob;
      lp.add_row(std::move(row), Rat{});
    }
  }
  // expected payments cover expected receipts: rents never exceed expected gains
  {
    std::vector<Rat> row(width);
    for (std::size_t k = 0; k < nb; ++k) row[ub + k] = B[k].prob;
    for (std::size_t l = 0; l < ns; ++l) row[us + l] = S[l].prob;
    for (std::size_t k = 0; k < nb; ++k)
      for (std::size_t l = 0; l < ns; ++l) row[xv(k, l)] = -lp.objective[xv(k, l)];
    lp.add_row(std::move(row), Rat{});
  }
  return solve_lp(lp).value;
}

}  // namespace twosided
