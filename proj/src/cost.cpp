#include "riskpool/cost.hpp"

#include <cmath>

namespace riskpool {

Money cost(const PoolComposition& comp, const Population& pop, const CostParams& params) {
    validate_composition(comp, pop);
    validate_params(params);
    validate_risk(pop.low.r, ValidationMode::probe, "population.low.r");
    validate_risk(pop.high.r, ValidationMode::probe, "population.high.r");

    const double mean_claims = pop.low.r * comp.n_low + pop.high.r * comp.n_high;
    if (params.model == Model::expected_value) {
        return params.insured_value * mean_claims;
    }
    const double claim_variance =
        variance_factor(pop.low.r) * comp.n_low + variance_factor(pop.high.r) * comp.n_high;
    return params.insured_value *
           (mean_claims + params.reserve_scale * params.b_p * std::sqrt(claim_variance));
}

Money marginal_cost(const PoolComposition& comp, RiskClass add_type, const Population& pop,
                    const CostParams& params) {
    PoolComposition grown = comp;
    (add_type == RiskClass::low ? grown.n_low : grown.n_high) += 1;
    return cost(grown, pop, params) - cost(comp, pop, params);
}

}  // namespace riskpool
