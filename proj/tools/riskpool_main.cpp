#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "riskpool/reporting.hpp"
#include "riskpool/runner.hpp"

namespace {

using riskpool::RunOptions;
using riskpool::Scenario;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitCapability = 3;
constexpr int kExitInternal = 4;

void print_run(const Scenario& scenario, const riskpool::RunOutcome& outcome,
               const std::string& format) {
    if (format == "json-report") {
        std::cout << outcome.report.dump(2) << "\n";
    } else if (format == "csv") {
        std::cout << riskpool::render_run_csv(scenario, outcome);
    } else {
        std::cout << riskpool::render_run_markdown(scenario, outcome);
    }
}

void print_tables(const std::string& format) {
    const auto tables = riskpool::make_all_tables();
    if (format == "json-report") {
        nlohmann::json doc;
        doc["schema"] = 1;
        doc["tables"] = nlohmann::json::array();
        for (const auto& table : tables) doc["tables"].push_back(riskpool::table_to_json(table));
        std::cout << doc.dump(2) << "\n";
        return;
    }
    for (const auto& table : tables) {
        if (format == "csv") {
            std::cout << riskpool::render_csv(table) << "\n";
        } else {
            std::cout << riskpool::render_markdown(table) << "\n";
        }
    }
}

void print_sweep(const nlohmann::json& sweep, const std::string& format) {
    if (format == "json-report") {
        nlohmann::json doc;
        doc["schema"] = 1;
        doc["sweep"] = sweep;
        std::cout << doc.dump(2) << "\n";
    } else if (format == "csv") {
        std::cout << riskpool::render_sweep_csv(sweep);
    } else {
        std::cout << riskpool::render_sweep_markdown(sweep);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "riskpool - pricing, stability, and fairness analysis for two-type "
        "insurance risk pools"};
    app.require_subcommand(1);

    std::string format = "markdown";
    std::uint64_t seed = 42;
    double epsilon = 1e-9;
    std::string policy = "best_blocking";
    long permutations = 2000;
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"markdown", "csv", "json-report"}))
        ->capture_default_str();
    app.add_option("--seed", seed, "RNG seed for sampled analyses")->capture_default_str();
    app.add_option("--epsilon", epsilon, "Strict-preference slack in money units")
        ->capture_default_str();
    app.add_option("--policy", policy, "Cascade defection policy")
        ->check(CLI::IsMember({"best_blocking", "low_risk_exodus"}))
        ->capture_default_str();
    app.add_option("--permutations", permutations, "Sample size for the Monte-Carlo Shapley")
        ->capture_default_str();

    std::string scenario_arg;
    auto add_scenario_arg = [&scenario_arg](CLI::App* sub) {
        sub->add_option("scenario", scenario_arg,
                        "Scenario file path, or a bundled name (table1, table2, table3)")
            ->required();
        sub->fallthrough();
    };

    auto* cmd_run = app.add_subcommand("run", "Run the analyses a scenario requests");
    add_scenario_arg(cmd_run);

    auto* cmd_tables =
        app.add_subcommand("tables", "Regenerate the three bundled pricing tables");
    cmd_tables->fallthrough();

    auto* cmd_sweep = app.add_subcommand(
        "sweep", "Sweep one parameter and report prices and even-split stability");
    std::string sweep_param;
    double sweep_from = 0.0, sweep_to = 0.0;
    int sweep_steps = 1;
    cmd_sweep->add_option("--param", sweep_param, "One of r_H, r_L, N_L, N_H, b_p")->required();
    cmd_sweep->add_option("--from", sweep_from, "First sampled value")->required();
    cmd_sweep->add_option("--to", sweep_to, "Last sampled value")->required();
    cmd_sweep->add_option("--steps", sweep_steps, "Number of sampled values")
        ->capture_default_str();
    add_scenario_arg(cmd_sweep);

    auto* cmd_audit = app.add_subcommand("audit", "Audit the scenario's pricing schemes");
    add_scenario_arg(cmd_audit);
    auto* cmd_stability =
        app.add_subcommand("stability", "Core-stability certificates for the scenario");
    add_scenario_arg(cmd_stability);
    auto* cmd_shapley =
        app.add_subcommand("shapley", "Exact and sampled Shapley prices for the scenario");
    add_scenario_arg(cmd_shapley);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        RunOptions options;
        options.seed = seed;
        options.epsilon = epsilon;
        options.policy = riskpool::cascade_policy_from_name(policy);
        options.shapley_permutations = permutations;

        if (cmd_tables->parsed()) {
            print_tables(format);
            return kExitOk;
        }
        if (cmd_sweep->parsed()) {
            const Scenario scenario = riskpool::load_scenario(scenario_arg);
            riskpool::SweepSpec spec{sweep_param, sweep_from, sweep_to, sweep_steps};
            print_sweep(riskpool::sweep_scenario(scenario, spec, options), format);
            return kExitOk;
        }

        Scenario scenario = riskpool::load_scenario(scenario_arg);
        if (cmd_audit->parsed()) {
            scenario.analyses = {"audit"};
        } else if (cmd_stability->parsed()) {
            scenario.analyses = {"stability"};
        } else if (cmd_shapley->parsed()) {
            scenario.analyses = {"shapley"};
        }
        const auto outcome = riskpool::run_scenario(scenario, options);
        print_run(scenario, outcome, format);
        return kExitOk;
    } catch (const riskpool::DomainError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const riskpool::CapabilityError& e) {
        std::cerr << "capability error: " << e.what() << "\n";
        return kExitCapability;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
