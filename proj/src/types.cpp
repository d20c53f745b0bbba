#include "riskpool/types.hpp"

#include <cmath>
#include <sstream>

namespace riskpool {

void validate_risk(double r, ValidationMode mode, const std::string& field) {
    if (!std::isfinite(r) || r < 0.0) {
        throw DomainError(field + ": risk must be finite and >= 0, got " + std::to_string(r));
    }
    const double upper = (mode == ValidationMode::strict) ? 0.5 : 1.0;
    if (r >= upper) {
        std::ostringstream msg;
        msg << field << ": risk must be < " << upper
            << (mode == ValidationMode::strict ? " in strict mode" : "") << ", got " << r;
        throw DomainError(msg.str());
    }
}

void validate_population(const Population& pop, ValidationMode mode) {
    validate_risk(pop.low.r, mode, "population.low.r");
    validate_risk(pop.high.r, mode, "population.high.r");
    if (pop.low.count < 0) {
        throw DomainError("population.low.count: must be >= 0");
    }
    if (pop.high.count < 0) {
        throw DomainError("population.high.count: must be >= 0");
    }
    if (mode == ValidationMode::strict && pop.high.count > 0 && pop.low.count > 0 &&
        !(pop.low.r < pop.high.r)) {
        throw DomainError("population: strict mode requires low.r < high.r");
    }
}

void validate_params(const CostParams& params) {
    if (!(params.insured_value > 0.0) || !std::isfinite(params.insured_value)) {
        throw DomainError("cost.V: insured value must be > 0");
    }
    if (params.model == Model::insolvency) {
        if (!(params.b_p > 0.0) || !std::isfinite(params.b_p)) {
            throw DomainError("cost.b_p: insolvency multiplier must be > 0");
        }
        if (!(params.reserve_scale > 0.0) || !std::isfinite(params.reserve_scale)) {
            throw DomainError("cost.reserve_scale: must be > 0");
        }
    }
}

void validate_composition(const PoolComposition& comp, const Population& pop) {
    if (comp.n_low < 0 || comp.n_high < 0) {
        throw DomainError("composition: counts must be >= 0");
    }
    if (comp.n_low > pop.low.count || comp.n_high > pop.high.count) {
        std::ostringstream msg;
        msg << "composition (" << comp.n_low << ", " << comp.n_high
            << ") exceeds population (" << pop.low.count << ", " << pop.high.count << ")";
        throw DomainError(msg.str());
    }
}

const char* model_name(Model model) {
    return model == Model::expected_value ? "expected_value" : "insolvency";
}

const char* risk_class_name(RiskClass rc) {
    return rc == RiskClass::low ? "low" : "high";
}

}  // namespace riskpool
