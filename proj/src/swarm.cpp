#include "swarm.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "consensus.hpp"
#include "rng.hpp"

namespace swarmkit {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

void require_mode(const SolverParams& params, SwarmMode expected) {
    if (params.mode != expected) {
        throw std::invalid_argument("step for mode '" + std::string(mode_name(expected)) +
                                    "' called with mode '" + std::string(mode_name(params.mode)) +
                                    "'");
    }
}

void require_size(std::span<const double> s, std::size_t expected, const char* what) {
    if (s.size() != expected) {
        throw std::invalid_argument(std::string(what) + " has size " + std::to_string(s.size()) +
                                    ", expected " + std::to_string(expected));
    }
}

// Convex relaxation of the local best toward x: y <- (1-w) y + w x with
// w = nu dt S^beta. w == 1 reproduces the classical replacement exactly.
void relax_memory(SwarmState& state, const SolverParams& params, const ObjectiveSpec& objective,
                  std::span<const double> cost_y) {
    const std::size_t d = state.d;
    const double rate = params.nu * params.dt;
    for (std::size_t i = 0; i < state.n; ++i) {
        const std::span<const double> xi(state.x.data() + i * d, d);
        const double cost_x = evaluate(objective, xi);
        const double w = rate * memory_switch(cost_x, cost_y[i], params.beta);
        if (w == 0.0) continue;
        double* yi = state.y.data() + i * d;
        for (std::size_t k = 0; k < d; ++k) yi[k] = (1.0 - w) * yi[k] + w * xi[k];
    }
}

}  // namespace

SolverParams pso_constrained(SwarmMode mode, double c1, double c2, double inertia) {
    SolverParams p;
    p.mode = mode;
    p.set_inertia(inertia);
    p.lambda1 = c1 / 2.0;
    p.lambda2 = c2 / 2.0;
    p.sigma1 = c1 / (2.0 * kSqrt3);
    p.sigma2 = c2 / (2.0 * kSqrt3);
    p.pso_constraint = true;
    return p;
}

void validate(const SolverParams& p) {
    auto fail = [](const std::string& field, const std::string& why) {
        throw std::invalid_argument("solver." + field + ": " + why);
    };
    if (!(p.dt > 0.0) || !std::isfinite(p.dt)) fail("dt", "must be positive");
    if (!(p.m >= 0.0 && p.m <= 1.0)) fail("m", "inertia must lie in [0, 1]");
    if (std::abs(p.gamma - (1.0 - p.m)) > 1e-12) fail("gamma", "must equal 1 - m");
    if (p.lambda1 < 0.0) fail("lambda1", "must be nonnegative");
    if (p.lambda2 < 0.0) fail("lambda2", "must be nonnegative");
    if (p.sigma1 < 0.0) fail("sigma1", "must be nonnegative");
    if (p.sigma2 < 0.0) fail("sigma2", "must be nonnegative");
    if (p.alpha < 0.0) fail("alpha", "must be nonnegative");
    if (has_memory(p.mode)) {
        if (!(p.beta > 0.0)) fail("beta", "must be positive");
        if (!(p.nu > 0.0)) fail("nu", "must be positive");
    }
    if (has_velocity(p.mode) && p.mode != SwarmMode::DiscretePSO && !(p.m + p.gamma * p.dt > 0.0)) {
        fail("m", "m + gamma*dt must be positive");
    }
    if (p.pso_constraint) {
        auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
        if (!close(p.sigma1, p.lambda1 / kSqrt3)) fail("sigma1", "violates sigma1 = lambda1/sqrt(3)");
        if (!close(p.sigma2, p.lambda2 / kSqrt3)) fail("sigma2", "violates sigma2 = lambda2/sqrt(3)");
    }
}

bool has_velocity(SwarmMode mode) {
    return mode == SwarmMode::DiscretePSO || mode == SwarmMode::SDPSO_NoMemory ||
           mode == SwarmMode::SDPSO_Memory;
}

bool has_memory(SwarmMode mode) {
    return mode == SwarmMode::DiscretePSO || mode == SwarmMode::SDPSO_Memory ||
           mode == SwarmMode::CBO_LocalBest;
}

std::string_view mode_name(SwarmMode mode) {
    switch (mode) {
        case SwarmMode::DiscretePSO: return "discrete_pso";
        case SwarmMode::SDPSO_NoMemory: return "sdpso_no_memory";
        case SwarmMode::SDPSO_Memory: return "sdpso_memory";
        case SwarmMode::CBO: return "cbo";
        case SwarmMode::CBO_LocalBest: return "cbo_local_best";
    }
    return "unknown";
}

SwarmMode parse_mode(std::string_view name) {
    for (SwarmMode m : {SwarmMode::DiscretePSO, SwarmMode::SDPSO_NoMemory, SwarmMode::SDPSO_Memory,
                        SwarmMode::CBO, SwarmMode::CBO_LocalBest}) {
        if (mode_name(m) == name) return m;
    }
    throw std::invalid_argument("unknown mode '" + std::string(name) + "'");
}

std::string_view noise_name(NoiseKind kind) {
    return kind == NoiseKind::Gaussian01 ? "gaussian" : "uniform";
}

NoiseKind parse_noise(std::string_view name) {
    if (name == "gaussian") return NoiseKind::Gaussian01;
    if (name == "uniform") return NoiseKind::UniformSqrt3;
    throw std::invalid_argument("unknown noise '" + std::string(name) + "'");
}

std::string_view boundary_name(BoundaryPolicy policy) {
    return policy == BoundaryPolicy::None ? "none" : "clamp";
}

BoundaryPolicy parse_boundary(std::string_view name) {
    if (name == "none") return BoundaryPolicy::None;
    if (name == "clamp") return BoundaryPolicy::ClampToBox;
    throw std::invalid_argument("unknown boundary '" + std::string(name) + "'");
}

SwarmState initial_state(const SolverParams& params, const ObjectiveSpec& objective, std::size_t n,
                         const InitialLaw& law, std::uint64_t seed) {
    validate(params);
    validate(objective);
    if (n == 0) throw std::invalid_argument("swarm needs at least one particle");

    SwarmState s;
    s.n = n;
    s.d = objective.dim;
    s.x.resize(n * s.d);
    if (has_velocity(params.mode)) s.v.assign(n * s.d, 0.0);

    double lo = objective.box.lower;
    double hi = objective.box.upper;
    if (law.position == InitialLaw::Position::Uniform) {
        lo = law.x_lower;
        hi = law.x_upper;
    }
    for (std::size_t i = 0; i < n; ++i) {
        KeyedStream stream(derive_key({seed, i, kInitTag, 0}));
        std::normal_distribution<double> normal(0.0, 1.0);
        double* xi = s.x.data() + i * s.d;
        for (std::size_t k = 0; k < s.d; ++k) {
            if (law.position == InitialLaw::Position::Gaussian) {
                xi[k] = law.x_mean + law.x_std * normal(stream);
            } else {
                xi[k] = lo + (hi - lo) * stream.uniform01();
            }
        }
        if (!s.v.empty() && law.velocity != InitialLaw::Velocity::Zero) {
            KeyedStream vstream(derive_key({seed, i, kInitTag, 1}));
            std::normal_distribution<double> vnormal(0.0, 1.0);
            double* vi = s.v.data() + i * s.d;
            for (std::size_t k = 0; k < s.d; ++k) {
                vi[k] = law.velocity == InitialLaw::Velocity::Gaussian
                            ? law.v_scale * vnormal(vstream)
                            : law.v_scale * (2.0 * vstream.uniform01() - 1.0);
            }
        }
    }
    if (has_memory(params.mode)) s.y = s.x;
    refresh_consensus(s, params, objective);
    return s;
}

void NoiseSource::fill(NoiseKind kind, std::size_t n, std::size_t d, std::uint64_t step,
                       std::uint64_t channel, std::span<double> out) const {
    require_size(out, n * d, "noise buffer");
    for (std::size_t i = 0; i < n; ++i) {
        KeyedStream stream(derive_key({seed_, i, step, channel}));
        double* row = out.data() + i * d;
        if (kind == NoiseKind::Gaussian01) {
            std::normal_distribution<double> normal(0.0, 1.0);
            for (std::size_t k = 0; k < d; ++k) row[k] = normal(stream);
        } else {
            for (std::size_t k = 0; k < d; ++k) row[k] = kSqrt3 * (2.0 * stream.uniform01() - 1.0);
        }
    }
}

void NoiseSource::fill_uniform01(std::size_t n, std::size_t d, std::uint64_t step,
                                 std::uint64_t channel, std::span<double> out) const {
    require_size(out, n * d, "noise buffer");
    for (std::size_t i = 0; i < n; ++i) {
        KeyedStream stream(derive_key({seed_, i, step, channel}));
        double* row = out.data() + i * d;
        for (std::size_t k = 0; k < d; ++k) row[k] = stream.uniform01();
    }
}

void NoiseSource::draw(const SolverParams& params, std::size_t n, std::size_t d,
                       std::uint64_t step, StepNoise& out) const {
    const std::size_t size = n * d;
    if (params.mode == SwarmMode::DiscretePSO) {
        out.theta1.resize(size);
        out.theta2.resize(size);
        fill_uniform01(n, d, step, 1, out.theta1);
        fill_uniform01(n, d, step, 2, out.theta2);
        return;
    }
    // Channels whose coefficient is zero are never read; skip the draw.
    const bool local = has_memory(params.mode) && params.sigma1 != 0.0;
    out.theta1.resize(local ? size : 0);
    out.theta2.resize(size);
    if (local) fill(params.noise, n, d, step, 1, out.theta1);
    fill(params.noise, n, d, step, 2, out.theta2);
}

void refresh_consensus(SwarmState& state, const SolverParams& params,
                       const ObjectiveSpec& objective) {
    const std::size_t d = state.d;
    state.consensus.resize(d);
    state.cost.resize(state.n);
    if (params.mode == SwarmMode::DiscretePSO) {
        // The running global best is maintained by the kernel after step 0.
        if (state.step == 0 && !state.consensus_fresh) {
            evaluate_rows(objective, state.x, state.cost);
            const std::size_t best = argmin_index(state.cost);
            std::copy_n(state.x.begin() + static_cast<std::ptrdiff_t>(best * d), d,
                        state.consensus.begin());
            state.best_cost = state.cost[best];
        }
        state.consensus_fresh = true;
        return;
    }
    const std::vector<double>& source = has_memory(params.mode) ? state.y : state.x;
    evaluate_rows(objective, source, state.cost);
    thread_local std::vector<double> scratch;
    weighted_consensus_into(source, d, state.cost, ConsensusParams{params.alpha, true},
                            state.consensus, scratch);
    state.consensus_fresh = true;
}

void advance_discrete_pso(SwarmState& state, const SolverParams& params,
                          const ObjectiveSpec& objective, std::span<const double> r1,
                          std::span<const double> r2) {
    const std::size_t n = state.n;
    const std::size_t d = state.d;
    require_size(r1, n * d, "R1");
    require_size(r2, n * d, "R2");
    const double c1 = 2.0 * params.lambda1;
    const double c2 = 2.0 * params.lambda2;
    const std::vector<double> gbest = state.consensus;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            const std::size_t j = i * d + k;
            const double xj = state.x[j];
            state.v[j] = params.m * state.v[j] + c1 * r1[j] * (state.y[j] - xj) +
                         c2 * r2[j] * (gbest[k] - xj);
            state.x[j] = xj + state.v[j];
        }
    }
    if (params.boundary == BoundaryPolicy::ClampToBox) apply_boundary(state, objective.box);

    // Local best replaced iff F(x^{n+1}) < F(x^n); global best is the argmin
    // over the new positions followed by the previous global best.
    std::size_t best = n;
    double best_cost = state.best_cost;
    for (std::size_t i = 0; i < n; ++i) {
        const std::span<const double> xi(state.x.data() + i * d, d);
        const double c = evaluate(objective, xi);
        if (c < state.cost[i]) std::copy(xi.begin(), xi.end(), state.y.begin() + static_cast<std::ptrdiff_t>(i * d));
        state.cost[i] = c;
        if (best == n ? c <= best_cost : c < best_cost) {
            best = i;
            best_cost = c;
        }
    }
    if (best < n) {
        std::copy_n(state.x.begin() + static_cast<std::ptrdiff_t>(best * d), d, state.consensus.begin());
        state.best_cost = best_cost;
    }
    ++state.step;
}

void advance_sdpso_no_memory(SwarmState& state, const SolverParams& params,
                             std::span<const double> consensus, std::span<const double> theta) {
    const std::size_t d = state.d;
    require_size(consensus, d, "consensus");
    require_size(theta, state.n * d, "theta");
    const double denom = params.m + params.gamma * params.dt;
    if (!(denom > 0.0)) throw std::domain_error("m + gamma*dt must be positive");

    // The position increment is written as (dt/denom) * (m v + drift + noise):
    // for m = 0, gamma = 1 the factor is exactly 1 and the update coincides
    // bit for bit with the CBO Euler-Maruyama step.
    const double lambda_dt = params.lambda2 * params.dt;
    const double sigma_sqdt = params.sigma2 * std::sqrt(params.dt);
    const double pos_factor = params.dt / denom;
    for (std::size_t i = 0; i < state.n; ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            const std::size_t j = i * d + k;
            const double diff = consensus[k] - state.x[j];
            const double kick = params.m * state.v[j] + (lambda_dt * diff + sigma_sqdt * diff * theta[j]);
            state.v[j] = kick / denom;
            state.x[j] = state.x[j] + pos_factor * kick;
        }
    }
    ++state.step;
}

void advance_cbo(SwarmState& state, const SolverParams& params, std::span<const double> consensus,
                 std::span<const double> theta) {
    const std::size_t d = state.d;
    require_size(consensus, d, "consensus");
    require_size(theta, state.n * d, "theta");
    const double lambda_dt = params.lambda2 * params.dt;
    const double sigma_sqdt = params.sigma2 * std::sqrt(params.dt);
    for (std::size_t i = 0; i < state.n; ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            const std::size_t j = i * d + k;
            const double diff = consensus[k] - state.x[j];
            state.x[j] = state.x[j] + (lambda_dt * diff + sigma_sqdt * diff * theta[j]);
        }
    }
    ++state.step;
}

void advance_sdpso_memory(SwarmState& state, const SolverParams& params,
                          const ObjectiveSpec& objective, std::span<const double> consensus,
                          std::span<const double> cost_y, std::span<const double> theta1,
                          std::span<const double> theta2) {
    const std::size_t n = state.n;
    const std::size_t d = state.d;
    require_size(consensus, d, "consensus");
    require_size(cost_y, n, "cost_y");
    require_size(theta2, n * d, "theta2");
    const bool local_noise = params.sigma1 != 0.0;
    if (local_noise) require_size(theta1, n * d, "theta1");
    const double denom = params.m + params.gamma * params.dt;
    if (!(denom > 0.0)) throw std::domain_error("m + gamma*dt must be positive");

    const double l1 = params.lambda1 * params.dt;
    const double l2 = params.lambda2 * params.dt;
    const double s1 = params.sigma1 * std::sqrt(params.dt);
    const double s2 = params.sigma2 * std::sqrt(params.dt);
    const double pos_factor = params.dt / denom;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            const std::size_t j = i * d + k;
            const double local = state.y[j] - state.x[j];
            const double global = consensus[k] - state.x[j];
            double kick = params.m * state.v[j] + l1 * local + l2 * global + s2 * global * theta2[j];
            if (local_noise) kick += s1 * local * theta1[j];
            state.v[j] = kick / denom;
            state.x[j] = state.x[j] + pos_factor * kick;
        }
    }
    if (params.boundary == BoundaryPolicy::ClampToBox) apply_boundary(state, objective.box);
    relax_memory(state, params, objective, cost_y);
    ++state.step;
}

void advance_cbo_local_best(SwarmState& state, const SolverParams& params,
                            const ObjectiveSpec& objective, std::span<const double> consensus,
                            std::span<const double> cost_y, std::span<const double> theta1,
                            std::span<const double> theta2) {
    const std::size_t n = state.n;
    const std::size_t d = state.d;
    require_size(consensus, d, "consensus");
    require_size(cost_y, n, "cost_y");
    require_size(theta2, n * d, "theta2");
    const bool local_noise = params.sigma1 != 0.0;
    if (local_noise) require_size(theta1, n * d, "theta1");

    const double l1 = params.lambda1 * params.dt;
    const double l2 = params.lambda2 * params.dt;
    const double s1 = params.sigma1 * std::sqrt(params.dt);
    const double s2 = params.sigma2 * std::sqrt(params.dt);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            const std::size_t j = i * d + k;
            const double local = state.y[j] - state.x[j];
            const double global = consensus[k] - state.x[j];
            double inc = l1 * local + l2 * global + s2 * global * theta2[j];
            if (local_noise) inc += s1 * local * theta1[j];
            state.x[j] = state.x[j] + inc;
        }
    }
    if (params.boundary == BoundaryPolicy::ClampToBox) apply_boundary(state, objective.box);
    relax_memory(state, params, objective, cost_y);
    ++state.step;
}

namespace {

void finish_step(SwarmState& state, const SolverParams& params, const ObjectiveSpec& objective) {
    if (params.boundary == BoundaryPolicy::ClampToBox) apply_boundary(state, objective.box);
    state.consensus_fresh = false;
    refresh_consensus(state, params, objective);
}

void ensure_fresh(SwarmState& state, const SolverParams& params, const ObjectiveSpec& objective) {
    if (!state.consensus_fresh) refresh_consensus(state, params, objective);
}

thread_local StepNoise tls_noise;

}  // namespace

void step_discrete_pso(SwarmState& state, const SolverParams& params,
                       const ObjectiveSpec& objective, const NoiseSource& rng) {
    require_mode(params, SwarmMode::DiscretePSO);
    ensure_fresh(state, params, objective);
    rng.draw(params, state.n, state.d, state.step, tls_noise);
    advance_discrete_pso(state, params, objective, tls_noise.theta1, tls_noise.theta2);
    state.consensus_fresh = true;
}

void step_sdpso_no_memory(SwarmState& state, const SolverParams& params,
                          const ObjectiveSpec& objective, const NoiseSource& rng) {
    require_mode(params, SwarmMode::SDPSO_NoMemory);
    ensure_fresh(state, params, objective);
    rng.draw(params, state.n, state.d, state.step, tls_noise);
    advance_sdpso_no_memory(state, params, state.consensus, tls_noise.theta2);
    finish_step(state, params, objective);
}

void step_sdpso_memory(SwarmState& state, const SolverParams& params,
                       const ObjectiveSpec& objective, const NoiseSource& rng) {
    require_mode(params, SwarmMode::SDPSO_Memory);
    ensure_fresh(state, params, objective);
    rng.draw(params, state.n, state.d, state.step, tls_noise);
    advance_sdpso_memory(state, params, objective, state.consensus, state.cost, tls_noise.theta1,
                         tls_noise.theta2);
    finish_step(state, params, objective);
}

void step_cbo(SwarmState& state, const SolverParams& params, const ObjectiveSpec& objective,
              const NoiseSource& rng) {
    require_mode(params, SwarmMode::CBO);
    ensure_fresh(state, params, objective);
    rng.draw(params, state.n, state.d, state.step, tls_noise);
    advance_cbo(state, params, state.consensus, tls_noise.theta2);
    finish_step(state, params, objective);
}

void step_cbo_local_best(SwarmState& state, const SolverParams& params,
                         const ObjectiveSpec& objective, const NoiseSource& rng) {
    require_mode(params, SwarmMode::CBO_LocalBest);
    ensure_fresh(state, params, objective);
    rng.draw(params, state.n, state.d, state.step, tls_noise);
    advance_cbo_local_best(state, params, objective, state.consensus, state.cost, tls_noise.theta1,
                           tls_noise.theta2);
    finish_step(state, params, objective);
}

void step(SwarmState& state, const SolverParams& params, const ObjectiveSpec& objective,
          const NoiseSource& rng) {
    switch (params.mode) {
        case SwarmMode::DiscretePSO: step_discrete_pso(state, params, objective, rng); return;
        case SwarmMode::SDPSO_NoMemory: step_sdpso_no_memory(state, params, objective, rng); return;
        case SwarmMode::SDPSO_Memory: step_sdpso_memory(state, params, objective, rng); return;
        case SwarmMode::CBO: step_cbo(state, params, objective, rng); return;
        case SwarmMode::CBO_LocalBest: step_cbo_local_best(state, params, objective, rng); return;
    }
}

void apply_boundary(SwarmState& state, const Box& box) {
    for (double& xi : state.x) xi = std::clamp(xi, box.lower, box.upper);
}

}  // namespace swarmkit
