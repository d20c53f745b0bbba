// Acceptance suite: one line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "riskpool/audit.hpp"
#include "riskpool/binomial.hpp"
#include "riskpool/cost.hpp"
#include "riskpool/normal.hpp"
#include "riskpool/pricing.hpp"
#include "riskpool/reporting.hpp"
#include "riskpool/stability.hpp"
#include "riskpool/submodularity.hpp"

using namespace riskpool;

namespace {

int failures = 0;

class Criterion {
public:
    Criterion(int number, std::string title)
        : number_(number), title_(std::move(title)), start_(clock_type::now()) {}

    void require(bool ok, const std::string& detail) {
        if (!ok && problems_.size() < 4) problems_.push_back(detail);
        ok_ = ok_ && ok;
    }

    void require_near(double actual, double expected, double tol, const std::string& what) {
        std::ostringstream detail;
        detail << what << ": got " << actual << ", want " << expected << " +/- " << tol;
        require(std::fabs(actual - expected) <= tol, detail.str());
    }

    void require_runtime_below(double seconds) { budget_ = seconds; }

    ~Criterion() {
        const double elapsed =
            std::chrono::duration<double>(clock_type::now() - start_).count();
        if (budget_ > 0.0 && elapsed >= budget_) {
            std::ostringstream detail;
            detail << "runtime " << elapsed << "s exceeds " << budget_ << "s";
            problems_.push_back(detail.str());
            ok_ = false;
        }
        std::printf("[%s] criterion %d: %s (%.2fs)\n", ok_ ? "PASS" : "FAIL", number_,
                    title_.c_str(), elapsed);
        for (const auto& problem : problems_) {
            std::printf("       - %s\n", problem.c_str());
        }
        if (!ok_) failures += 1;
    }

private:
    using clock_type = std::chrono::steady_clock;
    int number_;
    std::string title_;
    clock_type::time_point start_;
    std::vector<std::string> problems_;
    bool ok_ = true;
    double budget_ = 0.0;
};

const Population kTable2{{0.02, 500}, {0.025, 500}};
const Population kTable3{{0.02, 500}, {0.04, 500}};
const CostParams kInsolvency{1000.0, Model::insolvency, 2.0, 1.0};

struct RandomScenario {
    Population pop;
    CostParams params;
};

std::vector<RandomScenario> equivalence_grid(int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> counts(1, 60);
    std::uniform_real_distribution<double> risk(0.001, 0.499);
    std::uniform_real_distribution<double> bp(0.5, 3.0);
    std::vector<RandomScenario> grid;
    grid.reserve(count);
    for (int i = 0; i < count; ++i) {
        double r1 = risk(rng), r2 = risk(rng);
        if (r1 > r2) std::swap(r1, r2);
        if (r2 - r1 < 1e-6) r2 += 1e-4;
        RandomScenario s;
        s.pop = {{r1, counts(rng)}, {r2, counts(rng)}};
        s.params = {1000.0, Model::insolvency, bp(rng), 1.0};
        grid.push_back(s);
    }
    return grid;
}

void criterion_1_tables() {
    Criterion c(1, "table reproduction");
    c.require_runtime_below(1.0);

    const GoldenTable t1 = make_table1();
    c.require_near(*t1.rows[0].low, 20.0, 1e-9, "table1 separate low");
    c.require_near(*t1.rows[0].high, 25.0, 1e-9, "table1 separate high");
    c.require_near(*t1.rows[1].low, 22.50, 1e-9, "table1 even split");
    c.require_near(*t1.rows[2].low, 20.0, 1e-9, "table1 proportional low");
    c.require_near(*t1.rows[2].high, 25.0, 1e-9, "table1 proportional high");
    for (int row = 0; row < 3; ++row) {
        c.require_near(t1.rows[row].total, 22500.0, 1e-6, "table1 total");
    }

    const GoldenTable t2 = make_table2();
    c.require_near(*t2.rows[0].low, 32.52, 0.005, "table2 separate low");
    c.require_near(*t2.rows[0].high, 38.96, 0.005, "table2 separate high");
    c.require_near(*t2.rows[1].low, 31.88, 0.005, "table2 even split");
    c.require_near(*t2.rows[1].high, 31.88, 0.005, "table2 even split high");
    c.require_near(*t2.rows[2].low, 28.36, 0.005, "table2 proportional low");
    c.require_near(*t2.rows[2].high, 35.40, 0.005, "table2 proportional high");
    c.require_near(t2.rows[1].total, 31878.0, 1.0, "table2 pooled total");

    const GoldenTable t3 = make_table3();
    c.require_near(*t3.rows[0].high, 57.53, 0.005, "table3 separate high");
    c.require_near(*t3.rows[1].low, 40.77, 0.005, "table3 even split");
    c.require_near(*t3.rows[2].low, 27.28, 0.005, "table3 proportional low");
    c.require_near(*t3.rows[2].high, 54.26, 0.005, "table3 proportional high");
    c.require_near(t3.rows[0].total, 45024.0, 2.0, "table3 separate total");
    c.require_near(t3.rows[1].total, 40770.0, 1.0, "table3 pooled total");
}

void criterion_2_submodularity() {
    Criterion c(2, "submodularity suite");
    c.require_runtime_below(5.0);

    const Population pop{{0.02, 500}, {0.04, 500}};
    const auto random_report = check_submodularity(pop, kInsolvency, 10000, 20240818);
    c.require(random_report.passed && random_report.violations == 0,
              "randomized pairs reported violations");
    c.require(random_report.pairs_checked == 10000, "randomized pair count");

    const auto grid_report = check_submodularity_exhaustive(pop, kInsolvency, 6);
    c.require(grid_report.passed && grid_report.violations == 0,
              "exhaustive [0,6]^2 grid reported violations");

    // strictness is part of both checks; spot-check a disjoint pair anyway
    const SetPair disjoint{6, 0, 0, 0, 6, 0};
    const double lhs = cost(disjoint.s(), pop, kInsolvency) + cost(disjoint.t(), pop, kInsolvency);
    const double rhs = cost(disjoint.set_union(), pop, kInsolvency) +
                       cost(disjoint.set_intersection(), pop, kInsolvency);
    c.require(lhs > rhs, "strict gap on a disjoint pair");
}

void criterion_3_evenstab_equivalence() {
    Criterion c(3, "even-split condition equals enumerated core stability");
    c.require_runtime_below(30.0);

    const auto grid = equivalence_grid(500, 424243);
    const PricingScheme& even = scheme_by_id("even_split");
    int mismatches = 0;
    for (const auto& s : grid) {
        const bool condition = evensplit_condition(s.pop, s.params);
        const bool enumerated = is_core_stable(even, s.pop, s.params).stable;
        if (condition != enumerated) mismatches += 1;
    }
    std::ostringstream detail;
    detail << mismatches << " of " << grid.size() << " scenarios disagreed";
    c.require(mismatches == 0, detail.str());
}

void criterion_4_max_subsidy() {
    Criterion c(4, "max-subsidy stability and tightness");

    const auto grid = equivalence_grid(500, 424243);
    const PricingScheme& max_subsidy = scheme_by_id("max_subsidy");
    int unstable = 0, bad_witness = 0;
    for (const auto& s : grid) {
        if (!is_core_stable(max_subsidy, s.pop, s.params).stable) unstable += 1;
        for (double eps : {1e-4, 1e-2, 1.0}) {
            const StabilityReport tight = max_subsidy_tightness(s.pop, s.params, eps);
            const PoolComposition expected{s.pop.low.count, 0};
            if (tight.stable || !tight.blocking_witness ||
                !(*tight.blocking_witness == expected)) {
                bad_witness += 1;
            }
        }
    }
    c.require(unstable == 0,
              std::to_string(unstable) + " scenarios had an unstable max-subsidy pool");
    c.require(bad_witness == 0,
              std::to_string(bad_witness) +
                  " perturbed runs missed the (N_L, 0) blocking witness");
}

void criterion_5_shapley() {
    Criterion c(5, "Shapley oracle agreement, core membership, efficiency");

    // composition sum vs exhaustive permutation enumeration, n <= 8
    double worst = 0.0;
    for (const Population& pop : {kTable2, Population{{0.31, 8}, {0.44, 8}}}) {
        for (int a = 0; a <= 8; ++a) {
            for (int b = 0; a + b <= 8; ++b) {
                if (a + b == 0) continue;
                const PoolComposition comp{a, b};
                const PriceSchedule exact = shapley_exact(comp, pop, kInsolvency);
                const PriceSchedule oracle =
                    oracles::permutation_shapley(comp, pop, kInsolvency);
                if (a > 0) worst = std::max(worst, std::fabs(*exact.price_low - *oracle.price_low));
                if (b > 0)
                    worst = std::max(worst, std::fabs(*exact.price_high - *oracle.price_high));
            }
        }
    }
    std::ostringstream detail;
    detail << "max |composition sum - permutation oracle| = " << worst;
    c.require(worst <= 1e-10, detail.str());

    // no blocking composition on any population with n <= 12
    const PricingScheme& shapley = scheme_by_id("shapley");
    int blocked = 0;
    for (int a = 0; a <= 12; ++a) {
        for (int b = 0; a + b <= 12; ++b) {
            if (a + b == 0) continue;
            const Population pop{{0.02, a}, {0.025, b}};
            if (!is_core_stable(shapley, pop, kInsolvency).stable) blocked += 1;
        }
    }
    c.require(blocked == 0,
              std::to_string(blocked) + " small populations had a blocking composition");

    // efficiency at the pooled scenario
    const PoolComposition grand{500, 500};
    const PriceSchedule prices = shapley_exact(grand, kTable2, kInsolvency);
    const Money total = cost(grand, kTable2, kInsolvency);
    const double residual = std::fabs(prices.total(grand) - total) / total;
    c.require(residual <= 1e-9,
              "efficiency residual " + std::to_string(residual) + " above 1e-9 relative");
}

void criterion_6_audit() {
    Criterion c(6, "impossibility patterns and the proportional slope");

    for (const Population& pop : {kTable2, kTable3}) {
        for (const auto& id : all_scheme_ids()) {
            const AuditReport report = run_full_audit(scheme_by_id(id), pop, kInsolvency);
            c.require(report.no_efficient_independent_combo,
                      id + ": efficiency + both independences held simultaneously");
            c.require(report.no_efficient_aligned_stable_combo,
                      id + ": efficiency + alignment + stability held simultaneously");
        }
    }

    // finite differences vs closed form for the proportional anti-social slope
    const PoolComposition grand{500, 500};
    const double analytic = proportional_price_low_slope_rh(grand, kTable2, kInsolvency);
    const double h = kTable2.high.r * 1e-6;
    Population up = kTable2, down = kTable2;
    up.high.r += h;
    down.high.r -= h;
    const double fd = (*proportional_price(grand, up, kInsolvency).price_low -
                       *proportional_price(grand, down, kInsolvency).price_low) /
                      (2.0 * h);
    c.require(fd < 0.0, "finite-difference slope is not negative");
    c.require(std::fabs(fd - analytic) <= 1e-4 * std::fabs(analytic),
              "finite-difference slope disagrees with the closed form");
}

void criterion_7_normal_fidelity() {
    Criterion c(7, "binomial convolution vs closed form; quantile round trip");

    const double p = 0.02275;
    for (const PoolComposition comp : {PoolComposition{500, 0}, {0, 500}, {500, 500}}) {
        const Money approx = cost(comp, kTable2, kInsolvency);
        const Money exact = exact_insolvency_quantile(comp, kTable2, kInsolvency, p);
        std::ostringstream what;
        what << "pool (" << comp.n_low << ", " << comp.n_high << ")";
        c.require_near(exact, approx, kInsolvency.insured_value, what.str());
    }

    double worst = 0.0;
    for (double prob = 1e-4; prob <= 0.49; prob += 1e-3) {
        worst = std::max(worst, std::fabs(p_from_bp(bp_from_p(prob)) - prob));
    }
    worst = std::max(worst, std::fabs(p_from_bp(bp_from_p(0.49)) - 0.49));
    std::ostringstream detail;
    detail << "max round-trip error " << worst;
    c.require(worst <= 1e-9, detail.str());
}

void criterion_8_cascade() {
    Criterion c(8, "defection cascade on the worked scenarios");

    const CascadeTrace spiral = cascade(scheme_by_id("even_split"), kTable3, kInsolvency,
                                        CascadePolicy::low_risk_exodus);
    c.require(spiral.steps.size() == 1,
              "expected exactly one step, got " + std::to_string(spiral.steps.size()));
    if (spiral.steps.size() == 1) {
        c.require(spiral.steps[0].departing == PoolComposition{500, 0},
                  "departing group is not (500, 0)");
        c.require(spiral.steps[0].prices_after.price_high.has_value(),
                  "remainder price missing");
        if (spiral.steps[0].prices_after.price_high) {
            c.require_near(*spiral.steps[0].prices_after.price_high, 57.53, 0.005,
                           "remainder per-person price");
        }
    }

    const CascadeTrace stable = cascade(scheme_by_id("even_split"), kTable2, kInsolvency,
                                        CascadePolicy::low_risk_exodus);
    c.require(stable.steps.empty(), "stable scenario produced a nonempty trace");
}

}  // namespace

int main() {
    criterion_1_tables();
    criterion_2_submodularity();
    criterion_3_evenstab_equivalence();
    criterion_4_max_subsidy();
    criterion_5_shapley();
    criterion_6_audit();
    criterion_7_normal_fidelity();
    criterion_8_cascade();
    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
