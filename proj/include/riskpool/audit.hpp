#ifndef RISKPOOL_AUDIT_HPP
#define RISKPOOL_AUDIT_HPP

#include <optional>
#include <string>
#include <vector>

#include "riskpool/pricing.hpp"
#include "riskpool/types.hpp"

namespace riskpool {

struct EfficiencyAudit {
    double max_abs_residual = 0.0;
    double max_rel_residual = 0.0;
    bool pass = false;  // max_rel_residual <= 1e-9
    long compositions = 0;
};

// Sensitivity of one type's price to the *other* type's inputs.
struct IndependenceSide {
    double max_risk_sensitivity = 0.0;   // max |d price / d r_other| (central differences)
    double max_count_sensitivity = 0.0;  // max |price(.., n) - price(.., n-1)|
    double scale = 1.0;                  // max(1, |price at the base point|)
    bool pass = false;                   // both sensitivities <= 1e-6 * scale
    int probes_skipped = 0;
};

struct IndependenceAudit {
    IndependenceSide low;   // price_low vs (r_high, n_high)
    IndependenceSide high;  // price_high vs (r_low, n_low)
};

struct AlignedAudit {
    double slope_min = 0.0;  // d price_low / d r_high across the probed interval
    double slope_max = 0.0;
    bool aligned = false;  // slope strictly positive at every probe
    std::vector<double> probed_risks;
    int probes_skipped = 0;
    std::optional<double> limit_c;  // price_high as r_high -> 0
    bool limit_hypothesis_met = false;
    // Core stability at every probed r_high; evaluated only when efficiency
    // and alignment both hold (that is the only case the verdict needs, and
    // it keeps schemes with expensive stability enumeration auditable).
    std::optional<bool> stable_at_all_probes;
};

struct AuditReport {
    std::string scheme;
    EfficiencyAudit efficiency;
    IndependenceAudit independence;
    AlignedAudit aligned;
    // Forbidden property patterns; both must stay true for every scheme over
    // a strictly submodular cost.
    bool no_efficient_independent_combo = false;  // !(efficient && indep_low && indep_high)
    bool no_efficient_aligned_stable_combo = false;
};

// Probe values for the other type's risk and composition count. Defaults are
// derived from the scenario when a list is empty.
struct IndependenceProbes {
    std::vector<double> partner_risks;
    std::vector<int> partner_counts;
};

// Max efficiency residual |n_L*p_L + n_H*p_H - cost| over the grid.
EfficiencyAudit audit_efficiency(const PricingScheme& scheme, const Population& pop,
                                 const CostParams& params,
                                 const std::vector<PoolComposition>& grid);

// Finite differencing of each type's price against the other type's risk
// (relative step 1e-6) and unit count changes. Probes that leave the valid
// domain are skipped and counted.
IndependenceAudit audit_independence(const PricingScheme& scheme, const Population& pop,
                                     const CostParams& params, const IndependenceProbes& probes);

// Slope of price_low in r_high across `r_high_probes` (aligned means strictly
// positive throughout), the r_high -> 0 limit of price_high, and - when the
// verdict requires it - core stability at each probed risk.
AlignedAudit audit_aligned_incentives(const PricingScheme& scheme, const Population& pop,
                                      const CostParams& params,
                                      const std::vector<double>& r_high_probes,
                                      bool efficiency_pass);

// Default probe grids.
std::vector<PoolComposition> efficiency_grid(const Population& pop, int points_per_axis = 6);
std::vector<double> default_aligned_probes();
IndependenceProbes default_independence_probes(const Population& pop);

// All three audits plus the impossibility-pattern verdicts.
AuditReport run_full_audit(const PricingScheme& scheme, const Population& pop,
                           const CostParams& params);

}  // namespace riskpool

#endif  // RISKPOOL_AUDIT_HPP
