#ifndef RISKPOOL_NORMAL_HPP
#define RISKPOOL_NORMAL_HPP

namespace riskpool {

// Upper-tail standard-normal quantile: the b with P(Z > b) = p, for
// 0 < p < 0.5 (so b > 0). bp_from_p(0.02275...) ~= 2. Throws DomainError
// outside (0, 0.5).
double bp_from_p(double p);

// Upper-tail probability P(Z > b_p). Inverse of bp_from_p; the round trip
// is exact to well below 1e-9.
double p_from_bp(double b_p);

// Lower-tail standard-normal quantile (Wichura's PPND16 rational
// approximation, absolute error below 1e-15 over (0,1)). Exposed for tests.
double inverse_normal_cdf(double p);

}  // namespace riskpool

#endif  // RISKPOOL_NORMAL_HPP
