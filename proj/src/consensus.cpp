#include "consensus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swarmkit {

namespace {

void fill_weights(std::span<const double> costs, const ConsensusParams& params,
                  std::vector<double>& w) {
    if (costs.empty()) throw std::invalid_argument("consensus of an empty ensemble");
    if (params.alpha < 0.0) throw std::invalid_argument("consensus alpha must be nonnegative");
    w.resize(costs.size());

    const bool stabilized = params.stabilized || params.alpha > kStabilizeAbove;
    double ref = 0.0;
    if (stabilized) {
        ref = costs[0];
        for (double c : costs) {
            if (std::isnan(c)) throw std::invalid_argument("NaN cost in consensus");
            ref = std::min(ref, c);
        }
    }

    // Sequential sum in index order keeps results bit-stable.
    double total = 0.0;
    for (std::size_t i = 0; i < costs.size(); ++i) {
        if (std::isnan(costs[i])) throw std::invalid_argument("NaN cost in consensus");
        w[i] = std::exp(-params.alpha * (costs[i] - ref));
        total += w[i];
    }
    if (!(total > 0.0) || !std::isfinite(total)) {
        throw std::domain_error("consensus weights underflowed; enable stabilization");
    }
    for (double& wi : w) wi /= total;
}

}  // namespace

std::vector<double> consensus_weights(std::span<const double> costs, const ConsensusParams& params) {
    std::vector<double> w;
    fill_weights(costs, params, w);
    return w;
}

void weighted_consensus_into(std::span<const double> points, std::size_t dim,
                             std::span<const double> costs, const ConsensusParams& params,
                             std::span<double> out, std::vector<double>& scratch) {
    if (dim == 0 || points.size() != costs.size() * dim || out.size() != dim) {
        throw std::invalid_argument("weighted_consensus: shape mismatch");
    }
    fill_weights(costs, params, scratch);
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < costs.size(); ++i) {
        const double wi = scratch[i];
        if (wi == 0.0) continue;
        const double* row = points.data() + i * dim;
        for (std::size_t k = 0; k < dim; ++k) out[k] += wi * row[k];
    }
    // The weights sum to one only up to rounding; keep the result in the hull.
    for (std::size_t k = 0; k < dim; ++k) {
        double lo = points[k];
        double hi = points[k];
        for (std::size_t i = 1; i < costs.size(); ++i) {
            const double p = points[i * dim + k];
            lo = std::min(lo, p);
            hi = std::max(hi, p);
        }
        out[k] = std::clamp(out[k], lo, hi);
    }
}

std::vector<double> weighted_consensus(std::span<const double> points, std::size_t dim,
                                       std::span<const double> costs,
                                       const ConsensusParams& params) {
    std::vector<double> out(dim);
    std::vector<double> scratch;
    weighted_consensus_into(points, dim, costs, params, out, scratch);
    return out;
}

std::size_t argmin_index(std::span<const double> costs) {
    if (costs.empty()) throw std::invalid_argument("argmin of an empty ensemble");
    std::size_t best = 0;
    for (std::size_t i = 1; i < costs.size(); ++i) {
        if (costs[i] < costs[best]) best = i;
    }
    return best;
}

std::vector<double> argmin_point(std::span<const double> points, std::size_t dim,
                                 std::span<const double> costs) {
    if (dim == 0 || points.size() != costs.size() * dim) {
        throw std::invalid_argument("argmin_point: shape mismatch");
    }
    const std::size_t i = argmin_index(costs);
    return {points.begin() + static_cast<std::ptrdiff_t>(i * dim),
            points.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim)};
}

}  // namespace swarmkit
