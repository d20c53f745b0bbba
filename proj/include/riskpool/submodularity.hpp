#ifndef RISKPOOL_SUBMODULARITY_HPP
#define RISKPOOL_SUBMODULARITY_HPP

#include <cstdint>
#include <optional>

#include "riskpool/types.hpp"

namespace riskpool {

// A sampled pair of player sets, recorded as the per-type overlap
// decomposition: only_s / only_t / shared counts. S = only_s + shared,
// T = only_t + shared, union = only_s + only_t + shared, intersection =
// shared (componentwise per type).
struct SetPair {
    int low_only_s = 0, low_only_t = 0, low_shared = 0;
    int high_only_s = 0, high_only_t = 0, high_shared = 0;

    PoolComposition s() const { return {low_only_s + low_shared, high_only_s + high_shared}; }
    PoolComposition t() const { return {low_only_t + low_shared, high_only_t + high_shared}; }
    PoolComposition set_union() const {
        return {low_only_s + low_only_t + low_shared, high_only_s + high_only_t + high_shared};
    }
    PoolComposition set_intersection() const { return {low_shared, high_shared}; }
};

struct SubmodularityCounterexample {
    SetPair pair;
    double lhs = 0.0;    // cost(S) + cost(T)
    double rhs = 0.0;    // cost(S u T) + cost(S n T)
    bool strictness = false;  // false: inequality itself failed; true: required strict gap missing
};

struct SubmodularityReport {
    bool passed = true;
    long pairs_checked = 0;
    long violations = 0;
    std::optional<SubmodularityCounterexample> first_counterexample;
};

// Whether the submodular gap must be strictly positive for this pair: the
// devising sets must each contain members the other lacks, and those members
// must carry positive claim variance (R > 0) or the gap degenerates to zero.
bool strict_gap_required(const SetPair& pair, const Population& pop, const CostParams& params);

// Randomized check of cost(S) + cost(T) >= cost(S u T) + cost(S n T) over
// `trials` sampled overlap decompositions drawn inside the population, plus
// the strict form where strict_gap_required holds.
SubmodularityReport check_submodularity(const Population& pop, const CostParams& params,
                                        long trials, std::uint64_t seed);

// Exhaustive variant: every overlap decomposition whose S and T both fit in
// [0, max_count]^2 (population permitting).
SubmodularityReport check_submodularity_exhaustive(const Population& pop,
                                                   const CostParams& params, int max_count);

}  // namespace riskpool

#endif  // RISKPOOL_SUBMODULARITY_HPP
