#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "objectives.hpp"

namespace swarmkit {

enum class SwarmMode { DiscretePSO, SDPSO_NoMemory, SDPSO_Memory, CBO, CBO_LocalBest };
enum class NoiseKind { Gaussian01, UniformSqrt3 };
enum class BoundaryPolicy { None, ClampToBox };

// Coefficients shared by every scheme. Single-coefficient modes (no-memory
// SD-PSO, CBO) read the global-best pair lambda2/sigma2. Discrete PSO uses
// acceleration coefficients c_k = 2 * lambda_k.
struct SolverParams {
    SwarmMode mode = SwarmMode::SDPSO_NoMemory;
    double m = 0.0;
    double gamma = 1.0;  // always 1 - m
    double lambda1 = 0.0;
    double lambda2 = 1.0;
    double sigma1 = 0.0;
    double sigma2 = 0.5773502691896258;
    double nu = 50.0;
    double beta = 3.0e3;
    double alpha = 5.0e4;
    double dt = 0.01;
    NoiseKind noise = NoiseKind::Gaussian01;
    BoundaryPolicy boundary = BoundaryPolicy::None;
    bool pso_constraint = false;

    void set_inertia(double inertia) {
        m = inertia;
        gamma = 1.0 - inertia;
    }

    friend bool operator==(const SolverParams&, const SolverParams&) = default;
};

// lambda_k = c_k / 2, sigma_k = c_k / (2 sqrt 3).
SolverParams pso_constrained(SwarmMode mode, double c1, double c2, double inertia);

// Throws std::invalid_argument naming the offending field.
void validate(const SolverParams& params);

bool has_velocity(SwarmMode mode);
bool has_memory(SwarmMode mode);

std::string_view mode_name(SwarmMode mode);
SwarmMode parse_mode(std::string_view name);
std::string_view noise_name(NoiseKind kind);
NoiseKind parse_noise(std::string_view name);
std::string_view boundary_name(BoundaryPolicy policy);
BoundaryPolicy parse_boundary(std::string_view name);

// Initial law of (X, V). Positions default to uniform on the objective box.
struct InitialLaw {
    enum class Position { UniformBox, Uniform, Gaussian };
    enum class Velocity { Zero, Gaussian, Uniform };

    Position position = Position::UniformBox;
    double x_lower = -3.0;  // Uniform: [x_lower, x_upper]
    double x_upper = 3.0;
    double x_mean = 0.0;  // Gaussian
    double x_std = 1.0;
    Velocity velocity = Velocity::Zero;
    double v_scale = 0.0;  // Gaussian std or Uniform half-width

    friend bool operator==(const InitialLaw&, const InitialLaw&) = default;
};

// Ensemble arrays, all row-major n x d. `v` is empty for the first-order CBO
// modes and `y` is empty for modes without memory.
struct SwarmState {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<double> x;
    std::vector<double> v;
    std::vector<double> y;
    std::uint64_t step = 0;

    // Consensus point of the current state (X-bar, Y-bar, or the running
    // global best for discrete PSO) and the costs it was computed from.
    std::vector<double> consensus;
    std::vector<double> cost;
    bool consensus_fresh = false;
    double best_cost = 0.0;  // discrete PSO global best value
};

SwarmState initial_state(const SolverParams& params, const ObjectiveSpec& objective,
                         std::size_t n, const InitialLaw& law, std::uint64_t seed);

// Noise matrices for one step, n x d each. Channel 1 multiplies the local-best
// terms, channel 2 the global-best terms. Discrete PSO stores R1, R2 in [0,1].
struct StepNoise {
    std::vector<double> theta1;
    std::vector<double> theta2;
};

// Per-step noise generator. Streams are keyed on (seed, particle, step, channel).
class NoiseSource {
public:
    explicit NoiseSource(std::uint64_t seed) : seed_(seed) {}

    void draw(const SolverParams& params, std::size_t n, std::size_t d, std::uint64_t step,
              StepNoise& out) const;
    void fill(NoiseKind kind, std::size_t n, std::size_t d, std::uint64_t step,
              std::uint64_t channel, std::span<double> out) const;
    void fill_uniform01(std::size_t n, std::size_t d, std::uint64_t step, std::uint64_t channel,
                        std::span<double> out) const;

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
};

// Recomputes the consensus point and cost cache from the current state.
void refresh_consensus(SwarmState& state, const SolverParams& params,
                       const ObjectiveSpec& objective);

// Deterministic kernels with explicit consensus input and noise. They advance
// the state by one step without touching the consensus cache. Kernels with a
// memory variable clamp X (when the policy asks for it) before relaxing Y, so
// Y stays inside the box; the others leave the boundary to the caller.
void advance_discrete_pso(SwarmState& state, const SolverParams& params,
                          const ObjectiveSpec& objective, std::span<const double> r1,
                          std::span<const double> r2);
void advance_sdpso_no_memory(SwarmState& state, const SolverParams& params,
                             std::span<const double> consensus, std::span<const double> theta);
void advance_sdpso_memory(SwarmState& state, const SolverParams& params,
                          const ObjectiveSpec& objective, std::span<const double> consensus,
                          std::span<const double> cost_y, std::span<const double> theta1,
                          std::span<const double> theta2);
void advance_cbo(SwarmState& state, const SolverParams& params, std::span<const double> consensus,
                 std::span<const double> theta);
void advance_cbo_local_best(SwarmState& state, const SolverParams& params,
                            const ObjectiveSpec& objective, std::span<const double> consensus,
                            std::span<const double> cost_y, std::span<const double> theta1,
                            std::span<const double> theta2);

// Full steps: consensus from the frozen current state, noise draw, update,
// boundary, cache refresh. Each throws if params.mode does not match.
void step_discrete_pso(SwarmState& state, const SolverParams& params,
                       const ObjectiveSpec& objective, const NoiseSource& rng);
void step_sdpso_no_memory(SwarmState& state, const SolverParams& params,
                          const ObjectiveSpec& objective, const NoiseSource& rng);
void step_sdpso_memory(SwarmState& state, const SolverParams& params,
                       const ObjectiveSpec& objective, const NoiseSource& rng);
void step_cbo(SwarmState& state, const SolverParams& params, const ObjectiveSpec& objective,
              const NoiseSource& rng);
void step_cbo_local_best(SwarmState& state, const SolverParams& params,
                         const ObjectiveSpec& objective, const NoiseSource& rng);

// Dispatches on params.mode.
void step(SwarmState& state, const SolverParams& params, const ObjectiveSpec& objective,
          const NoiseSource& rng);

// Projects every coordinate of X onto the box. V and Y are left alone.
void apply_boundary(SwarmState& state, const Box& box);

}  // namespace swarmkit
