#include "riskpool/runner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "riskpool/audit.hpp"
#include "riskpool/cost.hpp"
#include "riskpool/pricing.hpp"
#include "riskpool/reporting.hpp"

namespace riskpool {

using nlohmann::json;

namespace {

json schedule_to_json(const PriceSchedule& schedule) {
    json doc;
    doc["price_low"] = schedule.price_low ? json(*schedule.price_low) : json(nullptr);
    doc["price_high"] = schedule.price_high ? json(*schedule.price_high) : json(nullptr);
    return doc;
}

json composition_to_json(const PoolComposition& comp) {
    return json{{"n_low", comp.n_low}, {"n_high", comp.n_high}};
}

// Rough marginal-evaluation count of enumerating every composition with
// exact Shapley prices; beyond the cap the analysis is skipped rather than
// left to run for minutes.
double shapley_enumeration_work(const Population& pop) {
    const double a = pop.low.count;
    const double b = pop.high.count;
    return (a * (a + 1.0) / 2.0 + a + 1.0) * (b * (b + 1.0) / 2.0 + b + 1.0) * 2.0;
}

constexpr double kShapleyEnumerationCap = 2e8;

bool stability_tractable(const std::string& scheme, const Population& pop) {
    return scheme != "shapley" || shapley_enumeration_work(pop) <= kShapleyEnumerationCap;
}

json prices_analysis(const Scenario& s) {
    json rows = json::array();
    const PoolComposition grand = s.population.grand();

    // Reference row: what each type would pay alone in homogeneous pools.
    {
        json row;
        row["scheme"] = "separate_pools";
        Money total = 0.0;
        json rounded;
        if (grand.n_low > 0) {
            const Money alone = cost({grand.n_low, 0}, s.population, s.params);
            row["price_low"] = alone / grand.n_low;
            rounded["price_low"] = round_half_even(alone / grand.n_low, 2);
            total += alone;
        } else {
            row["price_low"] = nullptr;
        }
        if (grand.n_high > 0) {
            const Money alone = cost({0, grand.n_high}, s.population, s.params);
            row["price_high"] = alone / grand.n_high;
            rounded["price_high"] = round_half_even(alone / grand.n_high, 2);
            total += alone;
        } else {
            row["price_high"] = nullptr;
        }
        row["total"] = total;
        rounded["total"] = round_half_even(total, 0);
        row["rounded"] = std::move(rounded);
        rows.push_back(std::move(row));
    }

    for (const auto& id : s.schemes) {
        const PriceSchedule schedule = scheme_by_id(id).price(grand, s.population, s.params);
        json row = schedule_to_json(schedule);
        row["scheme"] = id;
        row["total"] = schedule.total(grand);
        json rounded;
        if (schedule.price_low) rounded["price_low"] = round_half_even(*schedule.price_low, 2);
        if (schedule.price_high) rounded["price_high"] = round_half_even(*schedule.price_high, 2);
        rounded["total"] = round_half_even(schedule.total(grand), 0);
        row["rounded"] = std::move(rounded);
        rows.push_back(std::move(row));
    }
    return rows;
}

json stability_analysis(const Scenario& s, const RunOptions& options,
                        std::vector<std::string>& notes) {
    json section;
    json rows = json::array();
    int ran = 0;
    for (const auto& id : s.schemes) {
        json row;
        row["scheme"] = id;
        if (!stability_tractable(id, s.population)) {
            row["skipped"] = "population too large for exact Shapley enumeration";
            notes.push_back("stability: " + id + " skipped (population too large for exact "
                            "Shapley enumeration over all compositions)");
            rows.push_back(std::move(row));
            continue;
        }
        const StabilityReport report =
            is_core_stable(scheme_by_id(id), s.population, s.params, options.epsilon);
        row["stable"] = report.stable;
        row["compositions_checked"] = report.compositions_checked;
        row["witness"] = report.blocking_witness ? composition_to_json(*report.blocking_witness)
                                                 : json(nullptr);
        row["prices_at_witness"] =
            report.prices_at_witness ? schedule_to_json(*report.prices_at_witness) : json(nullptr);
        rows.push_back(std::move(row));
        ran += 1;
    }
    if (ran == 0) {
        throw CapabilityError("stability: no requested scheme fits the enumeration bound");
    }
    section["schemes"] = std::move(rows);
    if (s.population.low.count > 0) {
        section["evensplit_condition"] = evensplit_condition(s.population, s.params);
    }
    return section;
}

json cascade_analysis(const Scenario& s, const RunOptions& options,
                      std::vector<std::string>& notes) {
    json rows = json::array();
    int ran = 0;
    for (const auto& id : s.schemes) {
        json row;
        row["scheme"] = id;
        row["policy"] = cascade_policy_name(options.policy);
        if (options.policy == CascadePolicy::best_blocking &&
            !stability_tractable(id, s.population)) {
            row["skipped"] = "population too large for exact Shapley enumeration";
            notes.push_back("cascade: " + id + " skipped (population too large)");
            rows.push_back(std::move(row));
            continue;
        }
        const CascadeTrace trace =
            cascade(scheme_by_id(id), s.population, s.params, options.policy, options.epsilon);
        json steps = json::array();
        for (const CascadeStep& step : trace.steps) {
            steps.push_back(json{{"step", step.step},
                                 {"departing", composition_to_json(step.departing)},
                                 {"remaining", composition_to_json(step.remaining)},
                                 {"prices_before", schedule_to_json(step.prices_before)},
                                 {"prices_departing", schedule_to_json(step.prices_departing)},
                                 {"prices_after", schedule_to_json(step.prices_after)}});
        }
        row["steps"] = std::move(steps);
        row["final_pool"] = composition_to_json(trace.final_pool);
        rows.push_back(std::move(row));
        ran += 1;
    }
    if (ran == 0) {
        throw CapabilityError("cascade: no requested scheme fits the enumeration bound");
    }
    return rows;
}

json audit_to_json(const AuditReport& report) {
    json doc;
    doc["scheme"] = report.scheme;
    doc["efficiency"] = {{"max_abs_residual", report.efficiency.max_abs_residual},
                         {"max_rel_residual", report.efficiency.max_rel_residual},
                         {"pass", report.efficiency.pass},
                         {"compositions", report.efficiency.compositions}};
    auto side = [](const IndependenceSide& s) {
        return json{{"max_risk_sensitivity", s.max_risk_sensitivity},
                    {"max_count_sensitivity", s.max_count_sensitivity},
                    {"scale", s.scale},
                    {"pass", s.pass},
                    {"probes_skipped", s.probes_skipped}};
    };
    doc["independence"] = {{"low", side(report.independence.low)},
                           {"high", side(report.independence.high)}};
    json aligned = {{"slope_min", report.aligned.slope_min},
                    {"slope_max", report.aligned.slope_max},
                    {"aligned", report.aligned.aligned},
                    {"probed_risks", report.aligned.probed_risks},
                    {"probes_skipped", report.aligned.probes_skipped},
                    {"limit_hypothesis_met", report.aligned.limit_hypothesis_met}};
    aligned["limit_c"] = report.aligned.limit_c ? json(*report.aligned.limit_c) : json(nullptr);
    aligned["stable_at_all_probes"] = report.aligned.stable_at_all_probes
                                          ? json(*report.aligned.stable_at_all_probes)
                                          : json(nullptr);
    doc["aligned"] = std::move(aligned);
    doc["no_efficient_independent_combo"] = report.no_efficient_independent_combo;
    doc["no_efficient_aligned_stable_combo"] = report.no_efficient_aligned_stable_combo;
    return doc;
}

json audit_analysis(const Scenario& s) {
    json rows = json::array();
    for (const auto& id : s.schemes) {
        const AuditReport report = run_full_audit(scheme_by_id(id), s.population, s.params);
        if (!report.no_efficient_independent_combo || !report.no_efficient_aligned_stable_combo) {
            // Both patterns are impossible over a strictly submodular cost;
            // seeing one means the engine itself is broken.
            throw std::logic_error("audit: impossibility pattern violated for scheme " + id);
        }
        rows.push_back(audit_to_json(report));
    }
    return rows;
}

json shapley_analysis(const Scenario& s, const RunOptions& options) {
    const PoolComposition grand = s.population.grand();
    const PriceSchedule exact = shapley_exact(grand, s.population, s.params);
    const SampledShapley sampled = shapley_sampled(grand, s.population, s.params,
                                                   options.shapley_permutations, options.seed);
    json doc;
    doc["exact"] = schedule_to_json(exact);
    doc["exact"]["total"] = exact.total(grand);
    doc["sampled"] = schedule_to_json(sampled.prices);
    doc["sampled"]["stderr_low"] = sampled.stderr_low;
    doc["sampled"]["stderr_high"] = sampled.stderr_high;
    doc["sampled"]["permutations"] = sampled.permutations;
    doc["sampled"]["seed"] = options.seed;
    auto sigma = [](std::optional<Money> a, std::optional<Money> b, double err) {
        if (!a || !b) return json(nullptr);
        return err > 0.0 ? json(std::fabs(*a - *b) / err) : json(0.0);
    };
    doc["agreement_sigma"] = {
        {"low", sigma(exact.price_low, sampled.prices.price_low, sampled.stderr_low)},
        {"high", sigma(exact.price_high, sampled.prices.price_high, sampled.stderr_high)}};
    return doc;
}

std::string fmt_opt_money(const json& value, int decimals) {
    return value.is_null() ? std::string("-") : format_money(value.get<double>(), decimals);
}

std::string fmt_comp(const json& comp) {
    if (comp.is_null()) return "-";
    std::ostringstream out;
    out << "(" << comp["n_low"].get<int>() << ", " << comp["n_high"].get<int>() << ")";
    return out.str();
}

}  // namespace

RunOutcome run_scenario(const Scenario& scenario, const RunOptions& options) {
    RunOutcome outcome;
    json& doc = outcome.report;
    doc["schema"] = 1;
    doc["scenario"] = json::parse(serialize_scenario(scenario));
    doc["options"] = {{"seed", options.seed},
                      {"epsilon", options.epsilon},
                      {"policy", cascade_policy_name(options.policy)},
                      {"shapley_permutations", options.shapley_permutations}};
    json results;
    for (const auto& analysis : scenario.analyses) {
        if (analysis == "prices") {
            results["prices"] = prices_analysis(scenario);
        } else if (analysis == "stability") {
            results["stability"] = stability_analysis(scenario, options, outcome.notes);
        } else if (analysis == "cascade") {
            results["cascade"] = cascade_analysis(scenario, options, outcome.notes);
        } else if (analysis == "audit") {
            results["audit"] = audit_analysis(scenario);
        } else if (analysis == "shapley") {
            results["shapley"] = shapley_analysis(scenario, options);
        }
    }
    doc["results"] = std::move(results);
    doc["notes"] = outcome.notes;
    return outcome;
}

nlohmann::json sweep_scenario(const Scenario& scenario, const SweepSpec& spec,
                              const RunOptions& options) {
    static const std::vector<std::string> params{"r_H", "r_L", "N_L", "N_H", "b_p"};
    if (std::find(params.begin(), params.end(), spec.param) == params.end()) {
        throw DomainError("sweep: param must be one of r_H, r_L, N_L, N_H, b_p");
    }
    if (spec.steps < 1) {
        throw DomainError("sweep: steps must be >= 1");
    }
    if (spec.param == "b_p" && scenario.params.model != Model::insolvency) {
        throw DomainError("sweep: b_p applies to the insolvency model only");
    }

    json sweep;
    sweep["param"] = spec.param;
    sweep["scenario"] = scenario.name;
    sweep["schemes"] = scenario.schemes;
    json rows = json::array();
    for (int i = 0; i < spec.steps; ++i) {
        const double value =
            spec.steps == 1 ? spec.from
                            : spec.from + (spec.to - spec.from) * i / (spec.steps - 1);
        json row;
        row["value"] = value;
        try {
            Scenario probe = scenario;
            if (spec.param == "r_H") {
                probe.population.high.r = value;
            } else if (spec.param == "r_L") {
                probe.population.low.r = value;
            } else if (spec.param == "N_L") {
                probe.population.low.count = static_cast<int>(std::llround(value));
            } else if (spec.param == "N_H") {
                probe.population.high.count = static_cast<int>(std::llround(value));
            } else {
                probe.params.b_p = value;
                if (!(value > 0.0)) throw DomainError("sweep: b_p must be > 0");
            }
            validate_population(probe.population, ValidationMode::strict);
            if (probe.population.grand().empty()) {
                throw DomainError("sweep: population emptied");
            }

            const PoolComposition grand = probe.population.grand();
            json prices;
            for (const auto& id : probe.schemes) {
                const PriceSchedule schedule =
                    scheme_by_id(id).price(grand, probe.population, probe.params);
                prices[id] = schedule_to_json(schedule);
            }
            row["prices"] = std::move(prices);
            if (probe.population.low.count > 0) {
                row["evensplit_condition"] = evensplit_condition(probe.population, probe.params);
            }
            row["even_split_stable"] =
                is_core_stable(scheme_by_id("even_split"), probe.population, probe.params,
                               options.epsilon)
                    .stable;
        } catch (const DomainError& e) {
            row["skipped"] = e.what();
        }
        rows.push_back(std::move(row));
    }
    sweep["rows"] = std::move(rows);
    return sweep;
}

std::string render_run_markdown(const Scenario& scenario, const RunOutcome& outcome) {
    const json& doc = outcome.report;
    std::ostringstream out;
    out << "# Scenario: " << (scenario.name.empty() ? "(unnamed)" : scenario.name) << "\n\n";
    out << "Population: " << scenario.population.low.count << " low risk (r = "
        << scenario.population.low.r << "), " << scenario.population.high.count
        << " high risk (r = " << scenario.population.high.r << "); V = "
        << format_money(scenario.params.insured_value, 0) << ", model = "
        << model_name(scenario.params.model);
    if (scenario.params.model == Model::insolvency) {
        out << ", b_p = " << scenario.params.b_p;
    }
    out << "\n";

    const json& results = doc["results"];
    if (results.contains("prices")) {
        out << "\n## Prices\n\n";
        out << "| Scheme | Low risk | High risk | Total |\n|---|---|---|---|\n";
        for (const auto& row : results["prices"]) {
            const auto id = row["scheme"].get<std::string>();
            out << "| " << (id == "separate_pools" ? "(separate pools)" : id) << " | "
                << fmt_opt_money(row["price_low"], 2) << " | "
                << fmt_opt_money(row["price_high"], 2) << " | "
                << format_money(row["total"].get<double>(), 0) << " |\n";
        }
    }
    if (results.contains("stability")) {
        const json& section = results["stability"];
        out << "\n## Core stability\n\n";
        out << "| Scheme | Stable | Blocking witness | Witness low | Witness high |\n"
            << "|---|---|---|---|---|\n";
        for (const auto& row : section["schemes"]) {
            out << "| " << row["scheme"].get<std::string>() << " | ";
            if (row.contains("skipped")) {
                out << "skipped: " << row["skipped"].get<std::string>() << " | - | - | - |\n";
                continue;
            }
            out << (row["stable"].get<bool>() ? "yes" : "no") << " | "
                << fmt_comp(row["witness"]) << " | ";
            if (row["prices_at_witness"].is_null()) {
                out << "- | - |\n";
            } else {
                out << fmt_opt_money(row["prices_at_witness"]["price_low"], 2) << " | "
                    << fmt_opt_money(row["prices_at_witness"]["price_high"], 2) << " |\n";
            }
        }
        if (section.contains("evensplit_condition")) {
            out << "\nEven-split stability condition (grand average < low-risk standalone "
                   "average): "
                << (section["evensplit_condition"].get<bool>() ? "holds" : "fails") << "\n";
        }
    }
    if (results.contains("cascade")) {
        out << "\n## Defection cascade\n";
        for (const auto& row : results["cascade"]) {
            out << "\n### " << row["scheme"].get<std::string>() << " ("
                << row["policy"].get<std::string>() << ")\n\n";
            if (row.contains("skipped")) {
                out << "skipped: " << row["skipped"].get<std::string>() << "\n";
                continue;
            }
            if (row["steps"].empty()) {
                out << "No defections: the pool is stable.\n";
                continue;
            }
            out << "| Step | Departing | Remaining | Departing now pay | Remaining now pay "
                   "|\n|---|---|---|---|---|\n";
            for (const auto& step : row["steps"]) {
                const json& dep = step["prices_departing"];
                const json& after = step["prices_after"];
                out << "| " << step["step"].get<int>() << " | " << fmt_comp(step["departing"])
                    << " | " << fmt_comp(step["remaining"]) << " | "
                    << fmt_opt_money(dep["price_low"], 2) << " / "
                    << fmt_opt_money(dep["price_high"], 2) << " | "
                    << fmt_opt_money(after["price_low"], 2) << " / "
                    << fmt_opt_money(after["price_high"], 2) << " |\n";
            }
        }
    }
    if (results.contains("audit")) {
        out << "\n## Pricing audit\n\n";
        out << "| Scheme | Efficient | Low price independent | High price independent | "
               "Aligned | Limit c |\n|---|---|---|---|---|---|\n";
        for (const auto& row : results["audit"]) {
            out << "| " << row["scheme"].get<std::string>() << " | "
                << (row["efficiency"]["pass"].get<bool>() ? "yes" : "no") << " | "
                << (row["independence"]["low"]["pass"].get<bool>() ? "yes" : "no") << " | "
                << (row["independence"]["high"]["pass"].get<bool>() ? "yes" : "no") << " | "
                << (row["aligned"]["aligned"].get<bool>() ? "yes" : "no") << " | "
                << fmt_opt_money(row["aligned"]["limit_c"], 2) << " |\n";
        }
    }
    if (results.contains("shapley")) {
        const json& sh = results["shapley"];
        out << "\n## Shapley prices\n\n";
        out << "| | Low risk | High risk |\n|---|---|---|\n";
        out << "| Exact | " << fmt_opt_money(sh["exact"]["price_low"], 2) << " | "
            << fmt_opt_money(sh["exact"]["price_high"], 2) << " |\n";
        out << "| Sampled (" << sh["sampled"]["permutations"].get<long>() << " permutations) | "
            << fmt_opt_money(sh["sampled"]["price_low"], 2) << " | "
            << fmt_opt_money(sh["sampled"]["price_high"], 2) << " |\n";
    }
    for (const auto& note : outcome.notes) {
        out << "\nNote: " << note << "\n";
    }
    return out.str();
}

std::string render_run_csv(const Scenario&, const RunOutcome& outcome) {
    const json& results = outcome.report["results"];
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(6);
    if (results.contains("prices")) {
        out << "# prices\nscheme,price_low,price_high,total\n";
        for (const auto& row : results["prices"]) {
            out << row["scheme"].get<std::string>() << ",";
            if (!row["price_low"].is_null()) out << row["price_low"].get<double>();
            out << ",";
            if (!row["price_high"].is_null()) out << row["price_high"].get<double>();
            out << "," << row["total"].get<double>() << "\n";
        }
    }
    if (results.contains("stability")) {
        out << "# stability\nscheme,stable,witness_n_low,witness_n_high,note\n";
        for (const auto& row : results["stability"]["schemes"]) {
            out << row["scheme"].get<std::string>() << ",";
            if (row.contains("skipped")) {
                out << ",,," << row["skipped"].get<std::string>() << "\n";
                continue;
            }
            out << (row["stable"].get<bool>() ? "true" : "false") << ",";
            if (!row["witness"].is_null()) {
                out << row["witness"]["n_low"].get<int>() << ","
                    << row["witness"]["n_high"].get<int>();
            } else {
                out << ",";
            }
            out << ",\n";
        }
    }
    if (results.contains("cascade")) {
        out << "# cascade\nscheme,policy,step,departing_n_low,departing_n_high,remaining_n_low,"
               "remaining_n_high\n";
        for (const auto& row : results["cascade"]) {
            if (row.contains("skipped")) continue;
            for (const auto& step : row["steps"]) {
                out << row["scheme"].get<std::string>() << ","
                    << row["policy"].get<std::string>() << "," << step["step"].get<int>() << ","
                    << step["departing"]["n_low"].get<int>() << ","
                    << step["departing"]["n_high"].get<int>() << ","
                    << step["remaining"]["n_low"].get<int>() << ","
                    << step["remaining"]["n_high"].get<int>() << "\n";
            }
        }
    }
    if (results.contains("audit")) {
        out << "# audit\nscheme,efficient,independent_low,independent_high,aligned,limit_c\n";
        for (const auto& row : results["audit"]) {
            out << row["scheme"].get<std::string>() << ","
                << (row["efficiency"]["pass"].get<bool>() ? "true" : "false") << ","
                << (row["independence"]["low"]["pass"].get<bool>() ? "true" : "false") << ","
                << (row["independence"]["high"]["pass"].get<bool>() ? "true" : "false") << ","
                << (row["aligned"]["aligned"].get<bool>() ? "true" : "false") << ",";
            if (!row["aligned"]["limit_c"].is_null()) {
                out << row["aligned"]["limit_c"].get<double>();
            }
            out << "\n";
        }
    }
    if (results.contains("shapley")) {
        const json& sh = results["shapley"];
        out << "# shapley\nkind,price_low,price_high,stderr_low,stderr_high\n";
        out << "exact,";
        if (!sh["exact"]["price_low"].is_null()) out << sh["exact"]["price_low"].get<double>();
        out << ",";
        if (!sh["exact"]["price_high"].is_null()) out << sh["exact"]["price_high"].get<double>();
        out << ",,\n";
        out << "sampled,";
        if (!sh["sampled"]["price_low"].is_null())
            out << sh["sampled"]["price_low"].get<double>();
        out << ",";
        if (!sh["sampled"]["price_high"].is_null())
            out << sh["sampled"]["price_high"].get<double>();
        out << "," << sh["sampled"]["stderr_low"].get<double>() << ","
            << sh["sampled"]["stderr_high"].get<double>() << "\n";
    }
    return out.str();
}

std::string render_sweep_markdown(const nlohmann::json& sweep) {
    std::ostringstream out;
    out << "# Sweep of " << sweep["param"].get<std::string>() << "\n\n";
    out << "| " << sweep["param"].get<std::string>();
    for (const auto& id : sweep["schemes"]) {
        out << " | " << id.get<std::string>() << " low/high";
    }
    out << " | condition | even-split stable |\n|---";
    for (size_t i = 0; i < sweep["schemes"].size() + 2; ++i) out << "|---";
    out << "|\n";
    for (const auto& row : sweep["rows"]) {
        out << "| " << row["value"].get<double>();
        if (row.contains("skipped")) {
            for (size_t i = 0; i < sweep["schemes"].size(); ++i) out << " | -";
            out << " | skipped | " << row["skipped"].get<std::string>() << " |\n";
            continue;
        }
        for (const auto& id : sweep["schemes"]) {
            const json& p = row["prices"][id.get<std::string>()];
            out << " | " << fmt_opt_money(p["price_low"], 2) << " / "
                << fmt_opt_money(p["price_high"], 2);
        }
        out << " | "
            << (row.contains("evensplit_condition")
                    ? (row["evensplit_condition"].get<bool>() ? "holds" : "fails")
                    : "-")
            << " | " << (row["even_split_stable"].get<bool>() ? "yes" : "no") << " |\n";
    }
    return out.str();
}

std::string render_sweep_csv(const nlohmann::json& sweep) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(6);
    out << "value";
    for (const auto& id : sweep["schemes"]) {
        const auto name = id.get<std::string>();
        out << "," << name << "_price_low," << name << "_price_high";
    }
    out << ",evensplit_condition,even_split_stable,note\n";
    for (const auto& row : sweep["rows"]) {
        out << row["value"].get<double>();
        if (row.contains("skipped")) {
            for (size_t i = 0; i < sweep["schemes"].size(); ++i) out << ",,";
            out << ",,," << "\"" << row["skipped"].get<std::string>() << "\"\n";
            continue;
        }
        for (const auto& id : sweep["schemes"]) {
            const json& p = row["prices"][id.get<std::string>()];
            out << ",";
            if (!p["price_low"].is_null()) out << p["price_low"].get<double>();
            out << ",";
            if (!p["price_high"].is_null()) out << p["price_high"].get<double>();
        }
        out << ","
            << (row.contains("evensplit_condition")
                    ? (row["evensplit_condition"].get<bool>() ? "true" : "false")
                    : "")
            << "," << (row["even_split_stable"].get<bool>() ? "true" : "false") << ",\n";
    }
    return out.str();
}

}  // namespace riskpool
