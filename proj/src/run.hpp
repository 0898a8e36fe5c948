#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "objectives.hpp"
#include "swarm.hpp"

namespace swarmkit {

// Stop when the consensus point moves less than delta_stall (Euclidean) for
// n_stall consecutive iterations, or after max_iter iterations.
struct StopRule {
    double delta_stall = 1.0e-4;
    std::size_t n_stall = 250;
    std::size_t max_iter = 10000;

    friend bool operator==(const StopRule&, const StopRule&) = default;
};

void validate(const StopRule& rule);

enum class StopReason { Stalled, MaxIterations };
std::string_view stop_reason_name(StopReason reason);

struct RunOptions {
    std::size_t particles = 100;
    InitialLaw init{};
    bool record_trajectory = true;
};

struct RunReport {
    // consensus_trajectory[0] is the consensus of the initial state.
    std::vector<std::vector<double>> consensus_trajectory;
    std::vector<double> final_consensus;
    std::size_t iterations = 0;
    StopReason reason = StopReason::MaxIterations;
};

RunReport run(const SolverParams& params, const ObjectiveSpec& objective, const StopRule& stop,
              std::uint64_t seed, const RunOptions& options = {});

// Advances a freshly initialized swarm a fixed number of steps (no stop rule).
SwarmState simulate(const SolverParams& params, const ObjectiveSpec& objective,
                    std::size_t particles, const InitialLaw& init, std::uint64_t seed,
                    std::size_t steps);

}  // namespace swarmkit
