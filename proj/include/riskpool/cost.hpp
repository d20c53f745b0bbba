#ifndef RISKPOOL_COST_HPP
#define RISKPOOL_COST_HPP

#include "riskpool/types.hpp"

namespace riskpool {

// Total premium the pool must collect for a composition.
//
// expected_value model:  V * (r_L*n_L + r_H*n_H)
// insolvency model:      V * (r_L*n_L + r_H*n_H + b_p * sqrt(n_L*R_L + n_H*R_H))
//
// where R = r*(1-r). The insolvency form is the normal approximation of the
// claim-count distribution: premiums cover the mean plus b_p standard
// deviations, so the shortfall probability is about the upper-tail mass at
// b_p. Throws DomainError if the composition exceeds the population.
Money cost(const PoolComposition& comp, const Population& pop, const CostParams& params);

// cost(comp + one member of add_type) - cost(comp).
// Throws DomainError if the grown composition exceeds the population.
Money marginal_cost(const PoolComposition& comp, RiskClass add_type, const Population& pop,
                    const CostParams& params);

}  // namespace riskpool

#endif  // RISKPOOL_COST_HPP
