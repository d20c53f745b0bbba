#ifndef RISKPOOL_PRICING_HPP
#define RISKPOOL_PRICING_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "riskpool/types.hpp"

namespace riskpool {

// Per-person prices for a composition. A price is present exactly when the
// type has members in the composition, so efficiency sums have no spurious
// terms.
struct PriceSchedule {
    std::optional<Money> price_low;
    std::optional<Money> price_high;

    Money total(const PoolComposition& comp) const {
        return (price_low ? *price_low * comp.n_low : 0.0) +
               (price_high ? *price_high * comp.n_high : 0.0);
    }
};

// A pricing scheme maps a composition to a PriceSchedule. Schemes are
// stateless and anonymous: output depends only on counts, risks, and cost
// parameters.
class PricingScheme {
public:
    virtual ~PricingScheme() = default;
    virtual std::string_view id() const = 0;
    virtual PriceSchedule price(const PoolComposition& comp, const Population& pop,
                                const CostParams& params) const = 0;
};

// Everyone present pays cost/(n_low + n_high).
PriceSchedule even_split_price(const PoolComposition& comp, const Population& pop,
                               const CostParams& params);

// Each type pays its expected loss plus a variance-proportional share of the
// pooled buffer: price = V * (r + b_p * R / sqrt(n_L*R_L + n_H*R_H)).
// Insolvency model only; throws CapabilityError for expected_value.
PriceSchedule proportional_price(const PoolComposition& comp, const Population& pop,
                                 const CostParams& params);

// Low-risk members pay their homogeneous-pool average cost(n_L, 0)/n_L;
// high-risk members absorb exactly the incremental pooled cost.
PriceSchedule max_subsidy_price(const PoolComposition& comp, const Population& pop,
                                const CostParams& params);

// Exact Shapley value per type. The 2^n subset sum collapses to a sum over
// predecessor compositions (a, b), each weighted by
// C(n_L-1, a) * C(n_H, b) / (n * C(n-1, a+b)) for a low-risk member
// (symmetric for high); binomial ratios are evaluated in log space with
// compensated accumulation. Throws CapabilityError above 100,000 members.
PriceSchedule shapley_exact(const PoolComposition& comp, const Population& pop,
                            const CostParams& params);

struct SampledShapley {
    PriceSchedule prices;
    double stderr_low = 0.0;
    double stderr_high = 0.0;
    long permutations = 0;
};

// Monte-Carlo estimate of the Shapley value from random arrival orders,
// with the standard error of each per-type mean.
SampledShapley shapley_sampled(const PoolComposition& comp, const Population& pop,
                               const CostParams& params, long permutations, std::uint64_t seed);

// Analytic d(price_low)/d(r_high) of proportional pricing; the audit module
// cross-checks its finite differences against this closed form.
double proportional_price_low_slope_rh(const PoolComposition& comp, const Population& pop,
                                       const CostParams& params);

// Registered schemes, by their stable identifiers:
// "even_split", "proportional", "max_subsidy", "shapley".
const PricingScheme& scheme_by_id(std::string_view id);
const std::vector<std::string>& all_scheme_ids();
bool is_scheme_id(std::string_view id);

}  // namespace riskpool

#endif  // RISKPOOL_PRICING_HPP
