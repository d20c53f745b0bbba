#include "riskpool/stability.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "riskpool/cost.hpp"

namespace riskpool {

namespace {

// Smallest per-type improvement a deviating composition offers its members
// relative to what they currently pay; <= 0 means someone present does not
// strictly gain (with `epsilon` slack).
double blocking_improvement(const PoolComposition& comp, const PriceSchedule& at_comp,
                            const PriceSchedule& current, double epsilon) {
    double improvement = std::numeric_limits<double>::infinity();
    if (comp.n_low > 0) {
        if (!current.price_low) return -std::numeric_limits<double>::infinity();
        improvement = std::min(improvement, *current.price_low - *at_comp.price_low - epsilon);
    }
    if (comp.n_high > 0) {
        if (!current.price_high) return -std::numeric_limits<double>::infinity();
        improvement = std::min(improvement, *current.price_high - *at_comp.price_high - epsilon);
    }
    return improvement;
}

// Scan every sub-composition of `pool` for the blocking group with the best
// (max-min) improvement over `current` prices. Descending (n_low, n_high)
// scan order makes ties resolve toward larger pools.
struct BlockingSearch {
    std::optional<PoolComposition> witness;
    std::optional<PriceSchedule> witness_prices;
    double improvement = 0.0;
    long compositions_checked = 0;
};

BlockingSearch find_best_blocking(const PricingScheme& scheme, const PoolComposition& pool,
                                  const PriceSchedule& current, const Population& pop,
                                  const CostParams& params, double epsilon) {
    BlockingSearch best;
    for (int n_low = pool.n_low; n_low >= 0; --n_low) {
        for (int n_high = pool.n_high; n_high >= 0; --n_high) {
            const PoolComposition comp{n_low, n_high};
            if (comp.empty() || comp == pool) continue;
            best.compositions_checked += 1;
            const PriceSchedule at_comp = scheme.price(comp, pop, params);
            const double gain = blocking_improvement(comp, at_comp, current, epsilon);
            if (gain > 0.0 && (!best.witness || gain > best.improvement)) {
                best.witness = comp;
                best.witness_prices = at_comp;
                best.improvement = gain;
            }
        }
    }
    return best;
}

StabilityReport stability_of(const PricingScheme& scheme, const Population& pop,
                             const CostParams& params, double epsilon) {
    const PoolComposition grand = pop.grand();
    if (grand.empty()) {
        throw DomainError("is_core_stable: grand coalition must be nonempty");
    }
    if (epsilon < 0.0) {
        throw DomainError("is_core_stable: epsilon must be >= 0");
    }
    const PriceSchedule grand_prices = scheme.price(grand, pop, params);
    const BlockingSearch best =
        find_best_blocking(scheme, grand, grand_prices, pop, params, epsilon);

    StabilityReport report;
    report.compositions_checked = best.compositions_checked + 1;  // + grand itself
    if (best.witness) {
        report.stable = false;
        report.blocking_witness = best.witness;
        report.prices_at_witness = best.witness_prices;
    }
    return report;
}

// Max-subsidy with the high-risk price lowered by eps; the shortfall lands on
// the low-risk members (eps * n_high / n_low) to preserve efficiency. With no
// low-risk members present the discount is applied as-is: those compositions
// only ever price high-risk members above the grand coalition anyway.
class PerturbedMaxSubsidy : public PricingScheme {
public:
    explicit PerturbedMaxSubsidy(double eps) : eps_(eps) {}
    std::string_view id() const override { return "max_subsidy_minus_epsilon"; }
    PriceSchedule price(const PoolComposition& comp, const Population& pop,
                        const CostParams& params) const override {
        PriceSchedule schedule = max_subsidy_price(comp, pop, params);
        if (schedule.price_high) {
            *schedule.price_high -= eps_;
            if (schedule.price_low) {
                *schedule.price_low +=
                    eps_ * static_cast<double>(comp.n_high) / static_cast<double>(comp.n_low);
            }
        }
        return schedule;
    }

private:
    double eps_;
};

}  // namespace

StabilityReport is_core_stable(const PricingScheme& scheme, const Population& pop,
                               const CostParams& params, double epsilon) {
    return stability_of(scheme, pop, params, epsilon);
}

bool evensplit_condition(const Population& pop, const CostParams& params) {
    if (pop.low.count == 0) {
        throw DomainError("evensplit_condition: undefined without low-risk members");
    }
    const PoolComposition grand = pop.grand();
    const Money grand_average = cost(grand, pop, params) / grand.size();
    const Money low_alone_average = cost({pop.low.count, 0}, pop, params) / pop.low.count;
    return grand_average < low_alone_average;
}

StabilityReport max_subsidy_tightness(const Population& pop, const CostParams& params,
                                      double epsilon_subsidy) {
    if (pop.low.count == 0 || pop.high.count == 0) {
        throw DomainError("max_subsidy_tightness: both risk classes must be populated");
    }
    if (epsilon_subsidy < 0.0) {
        throw DomainError("max_subsidy_tightness: epsilon_subsidy must be >= 0");
    }
    const PerturbedMaxSubsidy perturbed(epsilon_subsidy);
    return stability_of(perturbed, pop, params, 1e-9);
}

CascadeTrace cascade(const PricingScheme& scheme, const Population& pop,
                     const CostParams& params, CascadePolicy policy, double epsilon) {
    const PoolComposition grand = pop.grand();
    if (grand.empty()) {
        throw DomainError("cascade: grand coalition must be nonempty");
    }

    CascadeTrace trace;
    trace.initial = grand;
    PoolComposition pool = grand;

    while (!pool.empty()) {
        const PriceSchedule current = scheme.price(pool, pop, params);

        std::optional<PoolComposition> departing;
        std::optional<PriceSchedule> departing_prices;
        if (policy == CascadePolicy::best_blocking) {
            BlockingSearch best = find_best_blocking(scheme, pool, current, pop, params, epsilon);
            departing = best.witness;
            departing_prices = best.witness_prices;
        } else {  // low_risk_exodus: all low-risk members walk out together
            const PoolComposition exodus{pool.n_low, 0};
            if (pool.n_low > 0 && exodus != pool) {
                const PriceSchedule at_exodus = scheme.price(exodus, pop, params);
                if (blocking_improvement(exodus, at_exodus, current, epsilon) > 0.0) {
                    departing = exodus;
                    departing_prices = at_exodus;
                }
            }
        }
        if (!departing) break;

        CascadeStep step;
        step.step = static_cast<int>(trace.steps.size()) + 1;
        step.departing = *departing;
        step.remaining = {pool.n_low - departing->n_low, pool.n_high - departing->n_high};
        step.prices_before = current;
        step.prices_departing = *departing_prices;
        if (!step.remaining.empty()) {
            step.prices_after = scheme.price(step.remaining, pop, params);
        }
        pool = step.remaining;
        trace.steps.push_back(std::move(step));
    }

    trace.final_pool = pool;
    return trace;
}

const char* cascade_policy_name(CascadePolicy policy) {
    return policy == CascadePolicy::best_blocking ? "best_blocking" : "low_risk_exodus";
}

CascadePolicy cascade_policy_from_name(const std::string& name) {
    if (name == "best_blocking") return CascadePolicy::best_blocking;
    if (name == "low_risk_exodus") return CascadePolicy::low_risk_exodus;
    throw DomainError("unknown cascade policy: " + name);
}

}  // namespace riskpool
