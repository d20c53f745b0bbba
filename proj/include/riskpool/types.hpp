#ifndef RISKPOOL_TYPES_HPP
#define RISKPOOL_TYPES_HPP

#include <stdexcept>
#include <string>

namespace riskpool {

// Money is plain double end to end; rounding to cents happens only when
// rendering reports (see reporting.hpp).
using Money = double;

// Input that violates a model precondition (bad risk value, composition
// exceeding the population, empty pool where one is required, ...).
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Request that is well-formed but outside what this engine can compute
// (size bounds, scheme/model mismatches).
class CapabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Model {
    expected_value,  // premiums cover the expected claim value only
    insolvency       // premiums cover mean + b_p standard deviations of claims
};

enum class RiskClass { low, high };

// strict: the usual modelling regime, 0 <= r_low < r_high < 0.5.
// probe: relaxed regime used by audit probes that push r_high toward 0
// (or past r_low); only 0 <= r < 1 is required.
enum class ValidationMode { strict, probe };

// One risk class: per-period loss probability and how many such people exist.
struct RiskProfile {
    double r = 0.0;
    int count = 0;
};

// A coalition pi(n_low, n_high): counts of each type present in a pool.
struct PoolComposition {
    int n_low = 0;
    int n_high = 0;

    int size() const { return n_low + n_high; }
    bool empty() const { return size() == 0; }

    friend bool operator==(const PoolComposition&, const PoolComposition&) = default;
};

// The full two-type population; the grand coalition is pi(low.count, high.count).
struct Population {
    RiskProfile low;
    RiskProfile high;

    PoolComposition grand() const { return {low.count, high.count}; }
};

// Cost-function parameters. b_p is the insolvency multiplier (upper-tail
// standard-normal quantile of the allowed shortfall probability); it is
// ignored by the expected_value model. reserve_scale is an optional factor
// on the buffer term, default 1 (extension hook for insurer capital
// compensation).
struct CostParams {
    double insured_value = 0.0;  // V
    Model model = Model::insolvency;
    double b_p = 0.0;
    double reserve_scale = 1.0;
};

// R(r) = r * (1 - r), the per-member claim-count variance.
inline double variance_factor(double r) { return r * (1.0 - r); }

void validate_risk(double r, ValidationMode mode, const std::string& field);
void validate_population(const Population& pop, ValidationMode mode);
void validate_params(const CostParams& params);
// Composition must fit inside the population.
void validate_composition(const PoolComposition& comp, const Population& pop);

const char* model_name(Model model);
const char* risk_class_name(RiskClass rc);

}  // namespace riskpool

#endif  // RISKPOOL_TYPES_HPP
