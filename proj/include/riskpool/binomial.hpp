#ifndef RISKPOOL_BINOMIAL_HPP
#define RISKPOOL_BINOMIAL_HPP

#include <vector>

#include "riskpool/types.hpp"

namespace riskpool {

// Log-probability mass function of Binomial(n, r) as a vector of n+1 values
// (index = claim count). r = 0 and r = 1 degenerate to point masses.
std::vector<double> binomial_log_pmf(int n, double r);

// Smallest premium C with P(V * K > C) <= p, where K is the exact claim
// count Binomial(n_low, r_low) + Binomial(n_high, r_high). No normal
// approximation: the two mass functions are convolved directly, with all
// accumulation in log space. Validation oracle for the closed-form cost.
//
// Throws CapabilityError when comp.size() > 5000 (enumeration bound) and
// DomainError when p is outside (0, 0.5).
Money exact_insolvency_quantile(const PoolComposition& comp, const Population& pop,
                                const CostParams& params, double p);

}  // namespace riskpool

#endif  // RISKPOOL_BINOMIAL_HPP
