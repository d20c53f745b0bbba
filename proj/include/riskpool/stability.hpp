#ifndef RISKPOOL_STABILITY_HPP
#define RISKPOOL_STABILITY_HPP

#include <optional>
#include <vector>

#include "riskpool/pricing.hpp"
#include "riskpool/types.hpp"

namespace riskpool {

struct StabilityReport {
    bool stable = true;
    std::optional<PoolComposition> blocking_witness;
    std::optional<PriceSchedule> prices_at_witness;
    long compositions_checked = 0;
};

// Core stability of the grand coalition under `scheme`, by enumerating every
// composition (n_low, n_high) in [0, N_L] x [0, N_H] \ {(0,0)}. A composition
// blocks when every type present in it pays strictly less there than in the
// grand coalition (slack `epsilon`, in money units, guards float ties).
// Anonymity justifies enumerating compositions instead of player subsets.
//
// Among blocking compositions the reported witness maximizes the smallest
// per-type price improvement, scanning in lexicographically descending
// (n_low, n_high) order so ties resolve deterministically toward larger
// pools.
StabilityReport is_core_stable(const PricingScheme& scheme, const Population& pop,
                               const CostParams& params, double epsilon = 1e-9);

// The closed-form even-split stability condition:
//     cost(N_L, N_H) / (N_L + N_H)  <  cost(N_L, 0) / N_L.
// When true, the grand coalition under even-split pricing is core-stable
// against every composition, not just the all-low defection.
// Throws DomainError when N_L = 0.
bool evensplit_condition(const Population& pop, const CostParams& params);

// Demonstrates that max-subsidy pricing is tight: shaving epsilon_subsidy off
// the high-risk price (and raising the low-risk price by
// epsilon_subsidy * n_high / n_low to stay efficient) hands the all-low
// composition (N_L, 0) a strict incentive to defect. epsilon_subsidy = 0
// reduces to max-subsidy itself, which is stable.
StabilityReport max_subsidy_tightness(const Population& pop, const CostParams& params,
                                      double epsilon_subsidy);

enum class CascadePolicy { best_blocking, low_risk_exodus };

struct CascadeStep {
    int step = 0;
    PoolComposition departing;
    PoolComposition remaining;
    PriceSchedule prices_before;     // current pool, before the departure
    PriceSchedule prices_departing;  // what the departing group pays on its own
    PriceSchedule prices_after;      // remaining pool, re-priced
};

struct CascadeTrace {
    PoolComposition initial;
    std::vector<CascadeStep> steps;
    PoolComposition final_pool;
};

// Iterated defection: repeatedly remove the policy-selected blocking group
// from the current pool and re-price the remainder until no blocking group
// exists. best_blocking picks the same witness as is_core_stable;
// low_risk_exodus considers only the departure of all low-risk members
// currently in the pool. The trace is empty when the pool starts stable.
CascadeTrace cascade(const PricingScheme& scheme, const Population& pop,
                     const CostParams& params, CascadePolicy policy, double epsilon = 1e-9);

const char* cascade_policy_name(CascadePolicy policy);
CascadePolicy cascade_policy_from_name(const std::string& name);

}  // namespace riskpool

#endif  // RISKPOOL_STABILITY_HPP
