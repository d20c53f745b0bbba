#include "riskpool/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "riskpool/cost.hpp"

namespace riskpool {

namespace {

constexpr int kShapleyMemberBound = 100000;

void require_nonempty(const PoolComposition& comp, const char* scheme) {
    if (comp.empty()) {
        throw DomainError(std::string(scheme) + ": composition must be nonempty");
    }
}

// Log-factorial table for 0..n, one allocation per Shapley evaluation.
std::vector<double> log_factorials(int n) {
    std::vector<double> lf(static_cast<size_t>(n) + 1, 0.0);
    for (int i = 2; i <= n; ++i) {
        lf[static_cast<size_t>(i)] = lf[static_cast<size_t>(i) - 1] + std::log(i);
    }
    return lf;
}

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

// Average marginal cost of one `added` member over predecessor compositions
// drawn from `others` low and high candidates.
Money shapley_type_value(RiskClass added, int others_low, int others_high,
                         const Population& pop, const CostParams& params,
                         const std::vector<double>& lfact) {
    const int n = others_low + others_high + 1;
    auto lchoose = [&lfact](int m, int k) {
        return lfact[static_cast<size_t>(m)] - lfact[static_cast<size_t>(k)] -
               lfact[static_cast<size_t>(m - k)];
    };
    const double log_n = std::log(static_cast<double>(n));

    KahanSum value;
    for (int a = 0; a <= others_low; ++a) {
        const double log_wa = lchoose(others_low, a);
        for (int b = 0; b <= others_high; ++b) {
            const double log_weight =
                log_wa + lchoose(others_high, b) - lchoose(n - 1, a + b) - log_n;
            const Money delta = marginal_cost({a, b}, added, pop, params);
            value.add(std::exp(log_weight) * delta);
        }
    }
    return value.sum;
}

class EvenSplitScheme : public PricingScheme {
public:
    std::string_view id() const override { return "even_split"; }
    PriceSchedule price(const PoolComposition& comp, const Population& pop,
                        const CostParams& params) const override {
        return even_split_price(comp, pop, params);
    }
};

class ProportionalScheme : public PricingScheme {
public:
    std::string_view id() const override { return "proportional"; }
    PriceSchedule price(const PoolComposition& comp, const Population& pop,
                        const CostParams& params) const override {
        return proportional_price(comp, pop, params);
    }
};

class MaxSubsidyScheme : public PricingScheme {
public:
    std::string_view id() const override { return "max_subsidy"; }
    PriceSchedule price(const PoolComposition& comp, const Population& pop,
                        const CostParams& params) const override {
        return max_subsidy_price(comp, pop, params);
    }
};

class ShapleyScheme : public PricingScheme {
public:
    std::string_view id() const override { return "shapley"; }
    PriceSchedule price(const PoolComposition& comp, const Population& pop,
                        const CostParams& params) const override {
        return shapley_exact(comp, pop, params);
    }
};

}  // namespace

PriceSchedule even_split_price(const PoolComposition& comp, const Population& pop,
                               const CostParams& params) {
    require_nonempty(comp, "even_split");
    const Money share = cost(comp, pop, params) / comp.size();
    PriceSchedule schedule;
    if (comp.n_low > 0) schedule.price_low = share;
    if (comp.n_high > 0) schedule.price_high = share;
    return schedule;
}

PriceSchedule proportional_price(const PoolComposition& comp, const Population& pop,
                                 const CostParams& params) {
    require_nonempty(comp, "proportional");
    validate_composition(comp, pop);
    validate_params(params);
    if (params.model != Model::insolvency) {
        throw CapabilityError("proportional: scheme is defined for the insolvency model only");
    }

    const double R_low = variance_factor(pop.low.r);
    const double R_high = variance_factor(pop.high.r);
    const double pooled_variance = R_low * comp.n_low + R_high * comp.n_high;
    const double b = params.reserve_scale * params.b_p;
    // With zero pooled variance there is no buffer to share.
    const double buffer_scale = pooled_variance > 0.0 ? b / std::sqrt(pooled_variance) : 0.0;

    PriceSchedule schedule;
    if (comp.n_low > 0) {
        schedule.price_low = params.insured_value * (pop.low.r + buffer_scale * R_low);
    }
    if (comp.n_high > 0) {
        schedule.price_high = params.insured_value * (pop.high.r + buffer_scale * R_high);
    }
    return schedule;
}

PriceSchedule max_subsidy_price(const PoolComposition& comp, const Population& pop,
                                const CostParams& params) {
    require_nonempty(comp, "max_subsidy");
    PriceSchedule schedule;
    if (comp.n_low == 0) {
        schedule.price_high = cost(comp, pop, params) / comp.n_high;
        return schedule;
    }
    const Money low_alone = cost({comp.n_low, 0}, pop, params);
    schedule.price_low = low_alone / comp.n_low;
    if (comp.n_high > 0) {
        schedule.price_high = (cost(comp, pop, params) - low_alone) / comp.n_high;
    }
    return schedule;
}

PriceSchedule shapley_exact(const PoolComposition& comp, const Population& pop,
                            const CostParams& params) {
    require_nonempty(comp, "shapley");
    validate_composition(comp, pop);
    validate_params(params);
    if (comp.size() > kShapleyMemberBound) {
        throw CapabilityError("shapley: pool size " + std::to_string(comp.size()) +
                              " exceeds the bound " + std::to_string(kShapleyMemberBound));
    }

    const auto lfact = log_factorials(comp.size());
    PriceSchedule schedule;
    if (comp.n_low > 0) {
        schedule.price_low =
            shapley_type_value(RiskClass::low, comp.n_low - 1, comp.n_high, pop, params, lfact);
    }
    if (comp.n_high > 0) {
        schedule.price_high =
            shapley_type_value(RiskClass::high, comp.n_low, comp.n_high - 1, pop, params, lfact);
    }
    return schedule;
}

SampledShapley shapley_sampled(const PoolComposition& comp, const Population& pop,
                               const CostParams& params, long permutations, std::uint64_t seed) {
    require_nonempty(comp, "shapley_sampled");
    validate_composition(comp, pop);
    validate_params(params);
    if (permutations <= 0) {
        throw DomainError("shapley_sampled: permutations must be > 0");
    }

    std::vector<RiskClass> order;
    order.reserve(static_cast<size_t>(comp.size()));
    order.insert(order.end(), static_cast<size_t>(comp.n_low), RiskClass::low);
    order.insert(order.end(), static_cast<size_t>(comp.n_high), RiskClass::high);

    std::mt19937_64 rng(seed);
    // Per-permutation per-type mean marginal; permutation means are i.i.d.
    // samples of the type's Shapley value.
    KahanSum sum_low, sum_high, sumsq_low, sumsq_high;
    for (long t = 0; t < permutations; ++t) {
        std::shuffle(order.begin(), order.end(), rng);
        PoolComposition pool{0, 0};
        double acc_low = 0.0, acc_high = 0.0;
        for (RiskClass member : order) {
            const Money delta = marginal_cost(pool, member, pop, params);
            if (member == RiskClass::low) {
                acc_low += delta;
                pool.n_low += 1;
            } else {
                acc_high += delta;
                pool.n_high += 1;
            }
        }
        if (comp.n_low > 0) {
            const double mean = acc_low / comp.n_low;
            sum_low.add(mean);
            sumsq_low.add(mean * mean);
        }
        if (comp.n_high > 0) {
            const double mean = acc_high / comp.n_high;
            sum_high.add(mean);
            sumsq_high.add(mean * mean);
        }
    }

    auto finalize = [permutations](const KahanSum& s, const KahanSum& sq, double& err) {
        const double mean = s.sum / permutations;
        const double var =
            std::max(0.0, sq.sum / permutations - mean * mean) /
            std::max<long>(1, permutations - 1) * permutations;
        err = std::sqrt(var / permutations);
        return mean;
    };

    SampledShapley result;
    result.permutations = permutations;
    if (comp.n_low > 0) {
        result.prices.price_low = finalize(sum_low, sumsq_low, result.stderr_low);
    }
    if (comp.n_high > 0) {
        result.prices.price_high = finalize(sum_high, sumsq_high, result.stderr_high);
    }
    return result;
}

double proportional_price_low_slope_rh(const PoolComposition& comp, const Population& pop,
                                       const CostParams& params) {
    validate_composition(comp, pop);
    validate_params(params);
    if (params.model != Model::insolvency) {
        throw CapabilityError("proportional: scheme is defined for the insolvency model only");
    }
    const double R_low = variance_factor(pop.low.r);
    const double R_high = variance_factor(pop.high.r);
    const double pooled = R_low * comp.n_low + R_high * comp.n_high;
    if (pooled <= 0.0) return 0.0;
    const double b = params.reserve_scale * params.b_p;
    // d/dr_H of V*(r_L + b*R_L/sqrt(pooled)) through R_H = r_H(1-r_H).
    return -params.insured_value * b * R_low * comp.n_high * (1.0 - 2.0 * pop.high.r) /
           (2.0 * std::pow(pooled, 1.5));
}

const PricingScheme& scheme_by_id(std::string_view id) {
    static const EvenSplitScheme even_split;
    static const ProportionalScheme proportional;
    static const MaxSubsidyScheme max_subsidy;
    static const ShapleyScheme shapley;
    if (id == even_split.id()) return even_split;
    if (id == proportional.id()) return proportional;
    if (id == max_subsidy.id()) return max_subsidy;
    if (id == shapley.id()) return shapley;
    throw DomainError("unknown pricing scheme: " + std::string(id));
}

const std::vector<std::string>& all_scheme_ids() {
    static const std::vector<std::string> ids{"even_split", "proportional", "max_subsidy",
                                              "shapley"};
    return ids;
}

bool is_scheme_id(std::string_view id) {
    const auto& ids = all_scheme_ids();
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

}  // namespace riskpool
