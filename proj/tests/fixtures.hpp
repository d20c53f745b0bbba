#ifndef RISKPOOL_TESTS_FIXTURES_HPP
#define RISKPOOL_TESTS_FIXTURES_HPP

#include "riskpool/types.hpp"

namespace riskpool::fixtures {

// 500 low-risk at 2%, 500 high-risk at 2.5%, V = $1000, b_p = 2
inline Population table2_population() { return {{0.02, 500}, {0.025, 500}}; }

// High risk raised to 4%
inline Population table3_population() { return {{0.02, 500}, {0.04, 500}}; }

inline CostParams insolvency_params(double b_p = 2.0) {
    return {1000.0, Model::insolvency, b_p, 1.0};
}

inline CostParams expected_value_params() {
    return {1000.0, Model::expected_value, 0.0, 1.0};
}

}  // namespace riskpool::fixtures

#endif  // RISKPOOL_TESTS_FIXTURES_HPP
