#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace swarmkit {

struct ConsensusParams {
    double alpha = 5.0e4;
    // Subtract the minimum cost before exponentiating. Forced on for alpha > 100.
    bool stabilized = true;
};

struct MemorySwitchParams {
    double beta = 3.0e3;
    double nu = 50.0;
};

inline constexpr double kStabilizeAbove = 100.0;

// Normalized Laplace weights exp(-alpha*c_i) / sum_j exp(-alpha*c_j).
// Throws on an empty input or a NaN cost.
std::vector<double> consensus_weights(std::span<const double> costs, const ConsensusParams& params);

// Weighted average of the rows of a row-major n x d matrix.
std::vector<double> weighted_consensus(std::span<const double> points, std::size_t dim,
                                       std::span<const double> costs,
                                       const ConsensusParams& params);

// Same as above, writing into `out` (length d) without allocating the result.
void weighted_consensus_into(std::span<const double> points, std::size_t dim,
                             std::span<const double> costs, const ConsensusParams& params,
                             std::span<double> out, std::vector<double>& scratch);

// S^beta = 1 + tanh(beta * (cost_y - cost_x)); 2 means "x is better, replace y".
inline double memory_switch(double cost_x, double cost_y, double beta);

// Index of the lowest cost, ties to the lowest index.
std::size_t argmin_index(std::span<const double> costs);
std::vector<double> argmin_point(std::span<const double> points, std::size_t dim,
                                 std::span<const double> costs);

}  // namespace swarmkit

#include <cmath>

inline double swarmkit::memory_switch(double cost_x, double cost_y, double beta) {
    return 1.0 + std::tanh(beta * (cost_y - cost_x));
}
