#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "riskpool/audit.hpp"
#include "riskpool/cost.hpp"
#include "riskpool/stability.hpp"

using namespace riskpool;
using namespace riskpool::fixtures;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Everyone pays a flat $30 regardless of the pool: deliberately inefficient.
class FlatThirty : public PricingScheme {
public:
    std::string_view id() const override { return "flat_thirty"; }
    PriceSchedule price(const PoolComposition& comp, const Population&,
                        const CostParams&) const override {
        PriceSchedule schedule;
        if (comp.n_low > 0) schedule.price_low = 30.0;
        if (comp.n_high > 0) schedule.price_high = 30.0;
        return schedule;
    }
};

}  // namespace

TEST_CASE("efficient-by-construction schemes show residuals at float noise") {
    const Population pop = table2_population();
    const CostParams params = insolvency_params();
    const auto grid = efficiency_grid(pop);
    for (const char* id : {"proportional", "even_split", "max_subsidy"}) {
        const EfficiencyAudit audit = audit_efficiency(scheme_by_id(id), pop, params, grid);
        CHECK(audit.pass);
        CHECK(audit.max_rel_residual <= 1e-9);
    }
}

TEST_CASE("the flat-price scheme fails efficiency with the expected residual") {
    const Population pop = table2_population();
    const FlatThirty flat;
    const EfficiencyAudit audit =
        audit_efficiency(flat, pop, insolvency_params(), {{500, 500}});
    CHECK_FALSE(audit.pass);
    // |30,000 - 31,878.17| = 1,878.17
    CHECK_THAT(audit.max_abs_residual, WithinAbs(1878.17, 0.01));
    CHECK_THAT(audit.max_abs_residual,
               WithinAbs(cost({500, 500}, pop, insolvency_params()) - 30000.0, 1e-9));
}

TEST_CASE("max-subsidy: low price independent of the high side, high price not") {
    const IndependenceAudit audit = audit_independence(
        scheme_by_id("max_subsidy"), table2_population(), insolvency_params(), {});
    CHECK(audit.low.pass);
    CHECK(audit.low.max_risk_sensitivity <= 1e-6 * audit.low.scale);
    CHECK(audit.low.max_count_sensitivity == 0.0);
    CHECK_FALSE(audit.high.pass);
    CHECK(audit.high.max_count_sensitivity > 1e-3);  // varies visibly with n_low
}

TEST_CASE("proportional pricing fails independence on both sides") {
    const IndependenceAudit audit = audit_independence(
        scheme_by_id("proportional"), table2_population(), insolvency_params(), {});
    CHECK_FALSE(audit.low.pass);
    CHECK_FALSE(audit.high.pass);
}

TEST_CASE("even-split and Shapley prices depend on the partner type") {
    for (const char* id : {"even_split", "shapley"}) {
        const IndependenceAudit audit =
            audit_independence(scheme_by_id(id), table2_population(), insolvency_params(), {});
        CHECK_FALSE(audit.low.pass);
        CHECK_FALSE(audit.high.pass);
    }
}

TEST_CASE("proportional slope in partner risk is negative and matches the closed form") {
    const Population pop = table2_population();
    const CostParams params = insolvency_params();
    const AlignedAudit audit = audit_aligned_incentives(
        scheme_by_id("proportional"), pop, params, default_aligned_probes(), true);
    CHECK_FALSE(audit.aligned);
    CHECK(audit.slope_max < 0.0);
    // finite differences against the analytic derivative at the scenario risk
    const double analytic = proportional_price_low_slope_rh(pop.grand(), pop, params);
    const AlignedAudit at_scenario = audit_aligned_incentives(
        scheme_by_id("proportional"), pop, params, {pop.high.r}, true);
    CHECK_THAT(at_scenario.slope_min, WithinRel(analytic, 1e-4));
    // proportional keeps everyone below their standalone price, so the limit
    // of the high price is 0; stability was not probed (alignment failed).
    REQUIRE(audit.limit_c.has_value());
    CHECK_THAT(*audit.limit_c, WithinAbs(0.0, 0.05));
    CHECK_FALSE(audit.stable_at_all_probes.has_value());
}

TEST_CASE("max-subsidy has exactly zero slope: neither aligned nor anti-social") {
    const AlignedAudit audit =
        audit_aligned_incentives(scheme_by_id("max_subsidy"), table2_population(),
                                 insolvency_params(), default_aligned_probes(), true);
    CHECK_FALSE(audit.aligned);
    CHECK_THAT(audit.slope_min, WithinAbs(0.0, 1e-6));
    CHECK_THAT(audit.slope_max, WithinAbs(0.0, 1e-6));
}

TEST_CASE("even-split is aligned but loses stability at some probed risks") {
    const Population pop = table2_population();
    const CostParams params = insolvency_params();
    const AlignedAudit audit = audit_aligned_incentives(
        scheme_by_id("even_split"), pop, params, default_aligned_probes(), true);
    CHECK(audit.aligned);
    CHECK(audit.slope_min > 0.0);
    REQUIRE(audit.stable_at_all_probes.has_value());
    CHECK_FALSE(*audit.stable_at_all_probes);
    // the common price tends to the low-risk-only average as r_high -> 0
    REQUIRE(audit.limit_c.has_value());
    CHECK_THAT(*audit.limit_c, WithinAbs(16.26, 0.05));
}

TEST_CASE("the stability flip sits strictly inside the swept risk interval") {
    const CostParams params = insolvency_params();
    auto stable_at = [&](double rh) {
        const Population pop{{0.02, 500}, {rh, 500}};
        return evensplit_condition(pop, params);
    };
    CHECK(stable_at(0.025));
    CHECK_FALSE(stable_at(0.04));
    // bisect the flip point
    double lo = 0.025, hi = 0.04;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (stable_at(mid) ? lo : hi) = mid;
    }
    CHECK(lo > 0.025);
    CHECK(hi < 0.04);
    // on either side of the flip, enumeration agrees with the condition
    const Population just_stable{{0.02, 500}, {lo - 1e-4, 500}};
    const Population just_unstable{{0.02, 500}, {hi + 1e-4, 500}};
    CHECK(is_core_stable(scheme_by_id("even_split"), just_stable, params).stable);
    CHECK_FALSE(is_core_stable(scheme_by_id("even_split"), just_unstable, params).stable);
}

TEST_CASE("no bundled scheme achieves the impossible property patterns") {
    for (auto pop : {table2_population(), table3_population()}) {
        for (const auto& id : all_scheme_ids()) {
            const AuditReport report =
                run_full_audit(scheme_by_id(id), pop, insolvency_params());
            CHECK(report.no_efficient_independent_combo);
            CHECK(report.no_efficient_aligned_stable_combo);
            // all four bundled schemes are efficient; what gives is
            // independence or alignment/stability
            CHECK(report.efficiency.pass);
        }
    }
}

namespace {

// High price blows up as the high risk vanishes; the limit hypothesis the
// aligned audit relies on does not hold for this scheme.
class DivergentHighPrice : public PricingScheme {
public:
    std::string_view id() const override { return "divergent_high"; }
    PriceSchedule price(const PoolComposition& comp, const Population& pop,
                        const CostParams& params) const override {
        PriceSchedule schedule;
        const Money total = cost(comp, pop, params);
        if (comp.n_high > 0) {
            schedule.price_high = 1.0 / std::max(pop.high.r, 1e-300);
            if (comp.n_low == 0) schedule.price_high = total / comp.n_high;
        }
        if (comp.n_low > 0) {
            const Money high_side =
                comp.n_high > 0 ? *schedule.price_high * comp.n_high : 0.0;
            schedule.price_low = (total - high_side) / comp.n_low;
        }
        return schedule;
    }
};

}  // namespace

TEST_CASE("a divergent high-price limit is recorded as hypothesis-not-met") {
    const DivergentHighPrice scheme;
    const AlignedAudit audit = audit_aligned_incentives(
        scheme, table2_population(), insolvency_params(), default_aligned_probes(), true);
    CHECK_FALSE(audit.limit_hypothesis_met);
    CHECK_FALSE(audit.limit_c.has_value());
}

TEST_CASE("probes that leave the domain are recorded, not fatal") {
    // partner risks pushed past 1 get skipped
    IndependenceProbes probes;
    probes.partner_risks = {0.9991, 2.0};
    const IndependenceAudit audit = audit_independence(
        scheme_by_id("even_split"), table2_population(), insolvency_params(), probes);
    CHECK(audit.low.probes_skipped >= 1);
}
