#include "riskpool/binomial.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace riskpool {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kEnumerationBound = 5000;

double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    if (a < b) std::swap(a, b);
    return a + std::log1p(std::exp(b - a));
}

double log_choose(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

std::vector<double> binomial_log_pmf(int n, double r) {
    std::vector<double> lpmf(static_cast<size_t>(n) + 1, kNegInf);
    if (r <= 0.0) {
        lpmf[0] = 0.0;
        return lpmf;
    }
    if (r >= 1.0) {
        lpmf[static_cast<size_t>(n)] = 0.0;
        return lpmf;
    }
    const double log_r = std::log(r);
    const double log_q = std::log1p(-r);
    for (int k = 0; k <= n; ++k) {
        lpmf[static_cast<size_t>(k)] = log_choose(n, k) + k * log_r + (n - k) * log_q;
    }
    return lpmf;
}

Money exact_insolvency_quantile(const PoolComposition& comp, const Population& pop,
                                const CostParams& params, double p) {
    validate_composition(comp, pop);
    validate_params(params);
    if (!(p > 0.0) || !(p < 0.5)) {
        throw DomainError("exact_insolvency_quantile: p must lie in (0, 0.5), got " +
                          std::to_string(p));
    }
    if (comp.size() > kEnumerationBound) {
        throw CapabilityError("exact_insolvency_quantile: pool size " +
                              std::to_string(comp.size()) + " exceeds the enumeration bound " +
                              std::to_string(kEnumerationBound));
    }

    const std::vector<double> low = binomial_log_pmf(comp.n_low, pop.low.r);
    const std::vector<double> high = binomial_log_pmf(comp.n_high, pop.high.r);

    const int total = comp.size();
    std::vector<double> lpmf(static_cast<size_t>(total) + 1, kNegInf);
    for (int k = 0; k <= total; ++k) {
        const int j_lo = std::max(0, k - comp.n_high);
        const int j_hi = std::min(comp.n_low, k);
        double acc = kNegInf;
        for (int j = j_lo; j <= j_hi; ++j) {
            acc = log_add(acc, low[static_cast<size_t>(j)] + high[static_cast<size_t>(k - j)]);
        }
        lpmf[static_cast<size_t>(k)] = acc;
    }

    // log_survival[k] = log P(K > k), accumulated from the top so small tail
    // masses are not lost to underflow.
    std::vector<double> log_survival(static_cast<size_t>(total) + 1, kNegInf);
    for (int k = total - 1; k >= 0; --k) {
        log_survival[static_cast<size_t>(k)] =
            log_add(log_survival[static_cast<size_t>(k) + 1], lpmf[static_cast<size_t>(k) + 1]);
    }

    // P(V*K > C) for C in [kV, (k+1)V) equals P(K > k); the smallest feasible
    // premium is k*V for the first k whose survival mass is within p.
    const double log_p = std::log(p);
    for (int k = 0; k <= total; ++k) {
        if (log_survival[static_cast<size_t>(k)] <= log_p) {
            return params.insured_value * k;
        }
    }
    return params.insured_value * total;  // unreachable: survival at `total` is 0
}

}  // namespace riskpool
