#include "riskpool/submodularity.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "riskpool/cost.hpp"

namespace riskpool {

namespace {

void record_pair(const SetPair& pair, const Population& pop, const CostParams& params,
                 SubmodularityReport& report) {
    const double lhs = cost(pair.s(), pop, params) + cost(pair.t(), pop, params);
    const double rhs =
        cost(pair.set_union(), pop, params) + cost(pair.set_intersection(), pop, params);
    report.pairs_checked += 1;

    const double tol = 1e-9 * std::max(1.0, std::fabs(lhs) + std::fabs(rhs));
    bool violated = false;
    bool strictness = false;
    if (lhs < rhs - tol) {
        violated = true;
    } else if (strict_gap_required(pair, pop, params) && lhs <= rhs + tol) {
        violated = true;
        strictness = true;
    }
    if (violated) {
        report.violations += 1;
        report.passed = false;
        if (!report.first_counterexample) {
            report.first_counterexample = SubmodularityCounterexample{pair, lhs, rhs, strictness};
        }
    }
}

}  // namespace

bool strict_gap_required(const SetPair& pair, const Population& pop, const CostParams& params) {
    if (params.model == Model::expected_value) {
        return false;  // linear cost: always an equality
    }
    const double R_low = variance_factor(pop.low.r);
    const double R_high = variance_factor(pop.high.r);
    if (pair.low_only_s > 0 && pair.low_only_t > 0 && R_low > 0.0) return true;
    if (pair.high_only_s > 0 && pair.high_only_t > 0 && R_high > 0.0) return true;
    const bool cross = (pair.low_only_s > 0 && pair.high_only_t > 0) ||
                       (pair.high_only_s > 0 && pair.low_only_t > 0);
    return cross && R_low > 0.0 && R_high > 0.0;
}

SubmodularityReport check_submodularity(const Population& pop, const CostParams& params,
                                        long trials, std::uint64_t seed) {
    validate_params(params);
    if (trials <= 0) {
        throw DomainError("check_submodularity: trials must be > 0");
    }

    std::mt19937_64 rng(seed);
    auto split_three = [&rng](int total) {
        // only_s + only_t + shared <= total, each part uniform given the rest
        std::uniform_int_distribution<int> d1(0, total);
        const int a = d1(rng);
        std::uniform_int_distribution<int> d2(0, total - a);
        const int b = d2(rng);
        std::uniform_int_distribution<int> d3(0, total - a - b);
        return std::array<int, 3>{a, b, d3(rng)};
    };

    SubmodularityReport report;
    for (long i = 0; i < trials; ++i) {
        const auto lo = split_three(pop.low.count);
        const auto hi = split_three(pop.high.count);
        const SetPair pair{lo[0], lo[1], lo[2], hi[0], hi[1], hi[2]};
        record_pair(pair, pop, params, report);
    }
    return report;
}

SubmodularityReport check_submodularity_exhaustive(const Population& pop,
                                                   const CostParams& params, int max_count) {
    validate_params(params);
    if (max_count < 0) {
        throw DomainError("check_submodularity_exhaustive: max_count must be >= 0");
    }

    // Decompositions with S and T in [0, max_count]^2 per type; the union may
    // need up to 2*max_count members of a type.
    const int lo_cap = std::min(pop.low.count, 2 * max_count);
    const int hi_cap = std::min(pop.high.count, 2 * max_count);

    SubmodularityReport report;
    for (int ls = 0; ls <= std::min(max_count, lo_cap); ++ls)
    for (int lt = 0; lt + ls <= lo_cap && lt <= max_count; ++lt)
    for (int lb = 0; lb + lt + ls <= lo_cap && lb + std::max(ls, lt) <= max_count; ++lb)
    for (int hs = 0; hs <= std::min(max_count, hi_cap); ++hs)
    for (int ht = 0; ht + hs <= hi_cap && ht <= max_count; ++ht)
    for (int hb = 0; hb + ht + hs <= hi_cap && hb + std::max(hs, ht) <= max_count; ++hb) {
        const SetPair pair{ls, lt, lb, hs, ht, hb};
        record_pair(pair, pop, params, report);
    }
    return report;
}

}  // namespace riskpool
