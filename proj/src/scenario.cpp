#include "riskpool/scenario.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "riskpool/normal.hpp"
#include "riskpool/pricing.hpp"

namespace riskpool {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& constraint) {
    throw DomainError("scenario." + field + ": " + constraint);
}

double require_number(const json& node, const std::string& field, const std::string& shown) {
    if (!node.contains(field) || !node[field].is_number()) {
        fail(shown, "required number is missing or not numeric");
    }
    return node[field].get<double>();
}

RiskProfile parse_profile(const json& node, const std::string& prefix) {
    if (!node.is_object()) fail(prefix, "must be an object with fields r and count");
    if (!node.contains("r") || !node["r"].is_number()) {
        fail(prefix + ".r", "required number is missing or not numeric");
    }
    if (!node.contains("count") || !node["count"].is_number_integer()) {
        fail(prefix + ".count", "required non-negative integer is missing or not integral");
    }
    RiskProfile profile;
    profile.r = node["r"].get<double>();
    const auto count = node["count"].get<long long>();
    if (count < 0) fail(prefix + ".count", "must be >= 0");
    if (count > 10'000'000) fail(prefix + ".count", "count is implausibly large");
    profile.count = static_cast<int>(count);
    if (profile.r < 0.0 || profile.r >= 0.5) {
        fail(prefix + ".r", "must satisfy 0 <= r < 0.5");
    }
    return profile;
}

std::vector<std::string> parse_id_list(const json& node, const std::string& field,
                                       const std::vector<std::string>& known) {
    if (!node.contains(field)) return {};
    if (!node[field].is_array()) fail(field, "must be an array of identifiers");
    std::vector<std::string> out;
    for (const auto& item : node[field]) {
        if (!item.is_string()) fail(field, "entries must be strings");
        const auto id = item.get<std::string>();
        if (std::find(known.begin(), known.end(), id) == known.end()) {
            std::string choices;
            for (const auto& k : known) choices += (choices.empty() ? "" : ", ") + k;
            fail(field, "unknown identifier '" + id + "' (known: " + choices + ")");
        }
        if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
    }
    return out;
}

}  // namespace

const std::vector<std::string>& all_analysis_ids() {
    static const std::vector<std::string> ids{"prices", "stability", "cascade", "audit",
                                              "shapley"};
    return ids;
}

Scenario parse_scenario(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw DomainError(std::string("scenario: not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) fail("(root)", "must be a JSON object");

    Scenario scenario;
    if (!doc.contains("schema") || !doc["schema"].is_number_integer()) {
        fail("schema", "required integer field");
    }
    scenario.schema = doc["schema"].get<int>();
    if (scenario.schema != 1) fail("schema", "unsupported version (expected 1)");

    if (doc.contains("name")) {
        if (!doc["name"].is_string()) fail("name", "must be a string");
        scenario.name = doc["name"].get<std::string>();
    }

    if (!doc.contains("population") || !doc["population"].is_object()) {
        fail("population", "required object with fields low and high");
    }
    const auto& popnode = doc["population"];
    if (!popnode.contains("low")) fail("population.low", "required object");
    if (!popnode.contains("high")) fail("population.high", "required object");
    scenario.population.low = parse_profile(popnode["low"], "population.low");
    scenario.population.high = parse_profile(popnode["high"], "population.high");

    if (!doc.contains("cost") || !doc["cost"].is_object()) {
        fail("cost", "required object with fields V, model, and b_p or p");
    }
    const auto& costnode = doc["cost"];
    scenario.params.insured_value = require_number(costnode, "V", "cost.V");
    if (scenario.params.insured_value <= 0.0) fail("cost.V", "must be > 0");

    if (!costnode.contains("model") || !costnode["model"].is_string()) {
        fail("cost.model", "required string: expected_value or insolvency");
    }
    const auto model = costnode["model"].get<std::string>();
    if (model == "expected_value") {
        scenario.params.model = Model::expected_value;
    } else if (model == "insolvency") {
        scenario.params.model = Model::insolvency;
    } else {
        fail("cost.model", "must be expected_value or insolvency, got '" + model + "'");
    }

    const bool has_bp = costnode.contains("b_p");
    const bool has_p = costnode.contains("p");
    if (scenario.params.model == Model::insolvency) {
        if (has_bp == has_p) {
            fail("cost", "exactly one of b_p / p must be supplied for the insolvency model");
        }
        if (has_bp) {
            scenario.params.b_p = require_number(costnode, "b_p", "cost.b_p");
            if (scenario.params.b_p <= 0.0) fail("cost.b_p", "must be > 0");
        } else {
            const double p = require_number(costnode, "p", "cost.p");
            if (p <= 0.0 || p >= 0.5) fail("cost.p", "must satisfy 0 < p < 0.5");
            scenario.given_p = p;
            scenario.params.b_p = bp_from_p(p);
        }
    } else if (has_bp || has_p) {
        fail("cost", "b_p / p are not accepted by the expected_value model");
    }
    if (costnode.contains("reserve_scale")) {
        scenario.params.reserve_scale = require_number(costnode, "reserve_scale", "cost.reserve_scale");
        if (scenario.params.reserve_scale <= 0.0) fail("cost.reserve_scale", "must be > 0");
    }

    scenario.schemes = parse_id_list(doc, "schemes", all_scheme_ids());
    if (scenario.schemes.empty()) fail("schemes", "at least one scheme identifier is required");
    scenario.analyses = parse_id_list(doc, "analyses", all_analysis_ids());
    if (scenario.analyses.empty()) scenario.analyses = {"prices"};

    validate_population(scenario.population, ValidationMode::strict);
    if (scenario.population.grand().empty()) {
        fail("population", "population must contain at least one member");
    }
    return scenario;
}

std::string serialize_scenario(const Scenario& scenario) {
    json doc;
    doc["schema"] = scenario.schema;
    if (!scenario.name.empty()) doc["name"] = scenario.name;
    doc["population"]["low"] = {{"r", scenario.population.low.r},
                                {"count", scenario.population.low.count}};
    doc["population"]["high"] = {{"r", scenario.population.high.r},
                                 {"count", scenario.population.high.count}};
    doc["cost"]["V"] = scenario.params.insured_value;
    doc["cost"]["model"] = model_name(scenario.params.model);
    if (scenario.params.model == Model::insolvency) {
        if (scenario.given_p) {
            doc["cost"]["p"] = *scenario.given_p;
        } else {
            doc["cost"]["b_p"] = scenario.params.b_p;
        }
    }
    if (scenario.params.reserve_scale != 1.0) {
        doc["cost"]["reserve_scale"] = scenario.params.reserve_scale;
    }
    doc["schemes"] = scenario.schemes;
    doc["analyses"] = scenario.analyses;
    return doc.dump(2) + "\n";
}

const std::vector<std::string>& bundled_scenario_names() {
    static const std::vector<std::string> names{"table1", "table2", "table3"};
    return names;
}

Scenario bundled_scenario(const std::string& name) {
    Scenario scenario;
    scenario.name = name;
    scenario.population.low = {0.02, 500};
    scenario.params.insured_value = 1000.0;
    scenario.analyses = {"prices", "stability"};
    if (name == "table1") {
        scenario.population.high = {0.025, 500};
        scenario.params.model = Model::expected_value;
        // proportional pricing is insolvency-only; under expected value the
        // actuarial price is what max_subsidy and shapley produce anyway.
        scenario.schemes = {"even_split", "max_subsidy", "shapley"};
    } else if (name == "table2") {
        scenario.population.high = {0.025, 500};
        scenario.params.model = Model::insolvency;
        scenario.params.b_p = 2.0;
        scenario.schemes = {"even_split", "proportional", "max_subsidy", "shapley"};
    } else if (name == "table3") {
        scenario.population.high = {0.04, 500};
        scenario.params.model = Model::insolvency;
        scenario.params.b_p = 2.0;
        scenario.schemes = {"even_split", "proportional", "max_subsidy", "shapley"};
    } else {
        throw DomainError("unknown bundled scenario: " + name);
    }
    return scenario;
}

Scenario load_scenario(const std::string& path_or_name) {
    const auto& names = bundled_scenario_names();
    if (!std::filesystem::exists(path_or_name) &&
        std::find(names.begin(), names.end(), path_or_name) != names.end()) {
        return bundled_scenario(path_or_name);
    }
    std::ifstream in(path_or_name);
    if (!in) {
        throw DomainError("scenario file not found: " + path_or_name);
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario(text.str());
}

}  // namespace riskpool
