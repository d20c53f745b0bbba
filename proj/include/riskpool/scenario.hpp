#ifndef RISKPOOL_SCENARIO_HPP
#define RISKPOOL_SCENARIO_HPP

#include <optional>
#include <string>
#include <vector>

#include "riskpool/types.hpp"

namespace riskpool {

// A scenario file: population, cost parameters, which schemes to price and
// which analyses to run. Exactly one of b_p / p may be supplied; a supplied
// p is converted through the normal quantile and remembered so serialization
// round-trips the original field.
struct Scenario {
    int schema = 1;
    std::string name;
    Population population;
    CostParams params;
    std::optional<double> given_p;
    std::vector<std::string> schemes;
    std::vector<std::string> analyses;
};

// Analyses the engine knows how to run.
const std::vector<std::string>& all_analysis_ids();

// Parse and validate scenario JSON. Throws DomainError with diagnostics that
// name the offending field and constraint.
Scenario parse_scenario(const std::string& json_text);

// Canonical serialization; parse(serialize(s)) == s.
std::string serialize_scenario(const Scenario& scenario);

// "table1", "table2", "table3" — the worked examples shipped with the tool.
const std::vector<std::string>& bundled_scenario_names();
Scenario bundled_scenario(const std::string& name);

// Read a scenario from a file path, falling back to a bundled name.
Scenario load_scenario(const std::string& path_or_name);

}  // namespace riskpool

#endif  // RISKPOOL_SCENARIO_HPP
