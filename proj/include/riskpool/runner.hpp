#ifndef RISKPOOL_RUNNER_HPP
#define RISKPOOL_RUNNER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "riskpool/scenario.hpp"
#include "riskpool/stability.hpp"

namespace riskpool {

struct RunOptions {
    std::uint64_t seed = 42;
    double epsilon = 1e-9;
    CascadePolicy policy = CascadePolicy::best_blocking;
    long shapley_permutations = 2000;
};

struct RunOutcome {
    nlohmann::json report;  // machine-readable document; renderers read from it
    std::vector<std::string> notes;
};

// Run the scenario's requested analyses. Throws DomainError / CapabilityError
// for unservable requests; analyses that partially apply record per-scheme
// skip notes instead.
RunOutcome run_scenario(const Scenario& scenario, const RunOptions& options);

struct SweepSpec {
    std::string param;  // r_H | r_L | N_L | N_H | b_p
    double from = 0.0;
    double to = 0.0;
    int steps = 1;  // number of sampled values, endpoints included
};

// One row per sampled value: grand-coalition prices per scheme, the
// even-split closed-form stability condition, and the enumerated even-split
// verdict. Rows whose value leaves the valid domain are skipped with a note.
nlohmann::json sweep_scenario(const Scenario& scenario, const SweepSpec& spec,
                              const RunOptions& options);

std::string render_run_markdown(const Scenario& scenario, const RunOutcome& outcome);
std::string render_run_csv(const Scenario& scenario, const RunOutcome& outcome);
std::string render_sweep_markdown(const nlohmann::json& sweep);
std::string render_sweep_csv(const nlohmann::json& sweep);

}  // namespace riskpool

#endif  // RISKPOOL_RUNNER_HPP
