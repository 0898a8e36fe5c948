#include "run.hpp"

#include <cmath>
#include <stdexcept>

namespace swarmkit {

void validate(const StopRule& rule) {
    if (!(rule.delta_stall > 0.0)) throw std::invalid_argument("stop.delta_stall: must be positive");
    if (rule.n_stall == 0) throw std::invalid_argument("stop.n_stall: must be positive");
}

std::string_view stop_reason_name(StopReason reason) {
    return reason == StopReason::Stalled ? "stalled" : "max_iterations";
}

RunReport run(const SolverParams& params, const ObjectiveSpec& objective, const StopRule& stop,
              std::uint64_t seed, const RunOptions& options) {
    validate(stop);
    SwarmState state = initial_state(params, objective, options.particles, options.init, seed);
    const NoiseSource rng(seed);

    RunReport report;
    if (options.record_trajectory) report.consensus_trajectory.push_back(state.consensus);
    std::vector<double> previous = state.consensus;
    std::size_t stalled = 0;
    for (std::size_t it = 0; it < stop.max_iter; ++it) {
        step(state, params, objective, rng);
        ++report.iterations;
        if (options.record_trajectory) report.consensus_trajectory.push_back(state.consensus);

        double moved = 0.0;
        for (std::size_t k = 0; k < state.d; ++k) {
            const double delta = state.consensus[k] - previous[k];
            moved += delta * delta;
        }
        previous = state.consensus;
        stalled = std::sqrt(moved) < stop.delta_stall ? stalled + 1 : 0;
        if (stalled >= stop.n_stall) {
            report.reason = StopReason::Stalled;
            break;
        }
    }
    report.final_consensus = state.consensus;
    return report;
}

SwarmState simulate(const SolverParams& params, const ObjectiveSpec& objective,
                    std::size_t particles, const InitialLaw& init, std::uint64_t seed,
                    std::size_t steps) {
    SwarmState state = initial_state(params, objective, particles, init, seed);
    const NoiseSource rng(seed);
    for (std::size_t s = 0; s < steps; ++s) step(state, params, objective, rng);
    return state;
}

}  // namespace swarmkit
