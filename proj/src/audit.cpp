#include "riskpool/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "riskpool/cost.hpp"
#include "riskpool/stability.hpp"

namespace riskpool {

namespace {

constexpr double kEfficiencyTol = 1e-9;       // relative
constexpr double kIndependenceTol = 1e-6;     // of price scale
constexpr double kRelativeStep = 1e-6;

Population with_high_risk(Population pop, double r) {
    pop.high.r = r;
    return pop;
}

Population with_low_risk(Population pop, double r) {
    pop.low.r = r;
    return pop;
}

std::optional<Money> price_of(const PriceSchedule& schedule, RiskClass type) {
    return type == RiskClass::low ? schedule.price_low : schedule.price_high;
}

// price of `own` type as a function of the partner type's risk
std::optional<Money> price_at_partner_risk(const PricingScheme& scheme, RiskClass own,
                                           const PoolComposition& comp, const Population& pop,
                                           const CostParams& params, double partner_r) {
    if (partner_r < 0.0 || partner_r >= 1.0) return std::nullopt;
    const Population probe = own == RiskClass::low ? with_high_risk(pop, partner_r)
                                                   : with_low_risk(pop, partner_r);
    return price_of(scheme.price(comp, probe, params), own);
}

IndependenceSide independence_side(const PricingScheme& scheme, RiskClass own,
                                   const Population& pop, const CostParams& params,
                                   const std::vector<double>& partner_risks,
                                   std::vector<int> partner_counts) {
    const PoolComposition grand = pop.grand();
    IndependenceSide side;

    if (partner_counts.empty()) {
        const int partner_total = own == RiskClass::low ? pop.high.count : pop.low.count;
        for (int c : {partner_total, partner_total - 1, partner_total - 2}) {
            if (c >= 1) partner_counts.push_back(c);
        }
    }

    const auto base = price_of(scheme.price(grand, pop, params), own);
    side.scale = std::max(1.0, base ? std::fabs(*base) : 0.0);

    for (double r : partner_risks) {
        const double h = r * kRelativeStep;
        const auto up = price_at_partner_risk(scheme, own, grand, pop, params, r + h);
        const auto down = price_at_partner_risk(scheme, own, grand, pop, params, r - h);
        if (!up || !down || h == 0.0) {
            side.probes_skipped += 1;
            continue;
        }
        side.max_risk_sensitivity =
            std::max(side.max_risk_sensitivity, std::fabs((*up - *down) / (2.0 * h)));
    }

    for (int n : partner_counts) {
        if (n < 1) {
            side.probes_skipped += 1;
            continue;
        }
        const bool own_low = own == RiskClass::low;
        const PoolComposition at{own_low ? grand.n_low : n, own_low ? n : grand.n_high};
        const PoolComposition below{own_low ? grand.n_low : n - 1, own_low ? n - 1 : grand.n_high};
        if (at.n_low > pop.low.count || at.n_high > pop.high.count) {
            side.probes_skipped += 1;
            continue;
        }
        const auto p_at = price_of(scheme.price(at, pop, params), own);
        const auto p_below = price_of(scheme.price(below, pop, params), own);
        if (!p_at || !p_below) {
            side.probes_skipped += 1;
            continue;
        }
        side.max_count_sensitivity =
            std::max(side.max_count_sensitivity, std::fabs(*p_at - *p_below));
    }

    side.pass = side.max_risk_sensitivity <= kIndependenceTol * side.scale &&
                side.max_count_sensitivity <= kIndependenceTol * side.scale;
    return side;
}

}  // namespace

EfficiencyAudit audit_efficiency(const PricingScheme& scheme, const Population& pop,
                                 const CostParams& params,
                                 const std::vector<PoolComposition>& grid) {
    EfficiencyAudit audit;
    for (const PoolComposition& comp : grid) {
        if (comp.empty()) continue;
        const PriceSchedule schedule = scheme.price(comp, pop, params);
        const Money required = cost(comp, pop, params);
        const double residual = std::fabs(schedule.total(comp) - required);
        audit.max_abs_residual = std::max(audit.max_abs_residual, residual);
        audit.max_rel_residual =
            std::max(audit.max_rel_residual, residual / std::max(1.0, std::fabs(required)));
        audit.compositions += 1;
    }
    audit.pass = audit.compositions > 0 && audit.max_rel_residual <= kEfficiencyTol;
    return audit;
}

IndependenceAudit audit_independence(const PricingScheme& scheme, const Population& pop,
                                     const CostParams& params, const IndependenceProbes& probes) {
    IndependenceProbes p = probes;
    if (p.partner_risks.empty()) {
        p.partner_risks = default_independence_probes(pop).partner_risks;
    }

    IndependenceAudit audit;
    audit.low = independence_side(scheme, RiskClass::low, pop, params, p.partner_risks,
                                  p.partner_counts);
    audit.high = independence_side(scheme, RiskClass::high, pop, params, p.partner_risks,
                                   p.partner_counts);
    return audit;
}

AlignedAudit audit_aligned_incentives(const PricingScheme& scheme, const Population& pop,
                                      const CostParams& params,
                                      const std::vector<double>& r_high_probes,
                                      bool efficiency_pass) {
    const PoolComposition grand = pop.grand();
    AlignedAudit audit;
    audit.slope_min = std::numeric_limits<double>::infinity();
    audit.slope_max = -std::numeric_limits<double>::infinity();

    for (double r : r_high_probes) {
        const double h = r * kRelativeStep;
        const auto up = price_at_partner_risk(scheme, RiskClass::low, grand, pop, params, r + h);
        const auto down = price_at_partner_risk(scheme, RiskClass::low, grand, pop, params, r - h);
        if (!up || !down || h == 0.0) {
            audit.probes_skipped += 1;
            continue;
        }
        const double slope = (*up - *down) / (2.0 * h);
        audit.slope_min = std::min(audit.slope_min, slope);
        audit.slope_max = std::max(audit.slope_max, slope);
        audit.probed_risks.push_back(r);
    }
    audit.aligned = !audit.probed_risks.empty() && audit.slope_min > 0.0;

    // price_high along its own risk r_high = 1e-2, 1e-3, ...: the limit
    // hypothesis is met when the sequence settles.
    std::vector<double> tail;
    for (int k = 2; k <= 8; ++k) {
        const Population probe = with_high_risk(pop, std::pow(10.0, -k));
        if (const auto p = price_of(scheme.price(grand, probe, params), RiskClass::high)) {
            tail.push_back(*p);
        }
    }
    if (tail.size() >= 2) {
        const double last_delta = std::fabs(tail[tail.size() - 1] - tail[tail.size() - 2]);
        const double scale = std::max(1.0, std::fabs(tail.back()));
        audit.limit_hypothesis_met = last_delta <= 1e-3 * scale;
        if (audit.limit_hypothesis_met) audit.limit_c = tail.back();
    }

    if (efficiency_pass && audit.aligned) {
        bool all_stable = true;
        for (double r : audit.probed_risks) {
            const Population probe = with_high_risk(pop, r);
            if (!is_core_stable(scheme, probe, params).stable) {
                all_stable = false;
                break;
            }
        }
        audit.stable_at_all_probes = all_stable;
    }
    return audit;
}

std::vector<PoolComposition> efficiency_grid(const Population& pop, int points_per_axis) {
    auto axis = [points_per_axis](int n) {
        std::vector<int> points{0};
        const int step = std::max(1, n / std::max(1, points_per_axis - 1));
        for (int v = step; v < n; v += step) points.push_back(v);
        if (n > 0) points.push_back(n);
        return points;
    };
    std::vector<PoolComposition> grid;
    for (int a : axis(pop.low.count)) {
        for (int b : axis(pop.high.count)) {
            if (a + b > 0) grid.push_back({a, b});
        }
    }
    return grid;
}

std::vector<double> default_aligned_probes() {
    return {1e-3, 3e-3, 0.01, 0.03, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45};
}

IndependenceProbes default_independence_probes(const Population& pop) {
    IndependenceProbes probes;
    for (double f : {0.5, 0.75, 1.0, 1.25, 1.5}) {
        const double low_based = pop.low.r * f;
        const double high_based = pop.high.r * f;
        for (double r : {low_based, high_based}) {
            if (r > 1e-4 && r < 0.999) probes.partner_risks.push_back(r);
        }
    }
    std::sort(probes.partner_risks.begin(), probes.partner_risks.end());
    probes.partner_risks.erase(
        std::unique(probes.partner_risks.begin(), probes.partner_risks.end()),
        probes.partner_risks.end());
    // Count probes default per side inside the audit (the partner population
    // differs between the two sides).
    return probes;
}

AuditReport run_full_audit(const PricingScheme& scheme, const Population& pop,
                           const CostParams& params) {
    AuditReport report;
    report.scheme = std::string(scheme.id());
    report.efficiency = audit_efficiency(scheme, pop, params, efficiency_grid(pop));
    report.independence = audit_independence(scheme, pop, params, {});
    report.aligned = audit_aligned_incentives(scheme, pop, params, default_aligned_probes(),
                                              report.efficiency.pass);

    report.no_efficient_independent_combo =
        !(report.efficiency.pass && report.independence.low.pass && report.independence.high.pass);
    report.no_efficient_aligned_stable_combo =
        !(report.efficiency.pass && report.aligned.aligned &&
          report.aligned.stable_at_all_probes.value_or(false));
    return report;
}

}  // namespace riskpool
