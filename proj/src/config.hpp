#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "meanfield.hpp"
#include "objectives.hpp"
#include "run.hpp"
#include "swarm.hpp"

namespace swarmkit::config {

enum class ExperimentKind { ParticleRun, ParticleSweep, MeanfieldRun, InertiaComparison, MeanfieldVsParticle };

std::string_view kind_name(ExperimentKind kind);
ExperimentKind parse_kind(std::string_view name);

struct ObjectiveBlock {
    ObjectiveKind kind = ObjectiveKind::Ackley;
    std::size_t dim = 20;
    double shift = 0.0;
    double offset = 0.0;
    std::uint64_t noise_seed = 0;
    // When unset the standard box of the function is used.
    std::optional<Box> box;

    friend bool operator==(const ObjectiveBlock&, const ObjectiveBlock&) = default;
};

// Axis lists of a particle sweep; each empty list means "use the solver
// block value". The cells are the Cartesian product in the listed order.
struct SweepBlock {
    std::vector<std::string> functions;
    std::vector<double> shift;
    std::vector<double> m;
    std::vector<double> sigma2;
    std::vector<double> alpha;
    std::vector<double> xi;
    std::vector<std::size_t> particles;

    friend bool operator==(const SweepBlock&, const SweepBlock&) = default;
};

struct GridBlock {
    pde::Kind pde = pde::Kind::MfPso;
    pde::PhaseGrid grid{};
    double t_end = 3.0;
    std::vector<double> snapshots;  // output times; empty means t_end only

    friend bool operator==(const GridBlock&, const GridBlock&) = default;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::ParticleRun;
    ObjectiveBlock objective{};
    SolverParams solver{};
    std::optional<double> xi;  // couples lambda1/sigma1 to lambda2/sigma2
    std::size_t particles = 100;
    InitialLaw init{};
    StopRule stop{};
    double delta_err = 0.25;
    GridBlock grid{};
    SweepBlock sweep{};
    std::size_t runs = 500;
    std::uint64_t seed = 1;
    int workers = 0;
    std::string output = "out";

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Parses a JSON document, fills defaults, validates. Unknown keys and range
// violations throw std::invalid_argument with the field path in the message.
ExperimentConfig parse_config(std::string_view text);

// Canonical JSON text (every field written out).
std::string serialize_config(const ExperimentConfig& config);

void validate(const ExperimentConfig& config);

ObjectiveSpec build_objective(const ObjectiveBlock& block);

}  // namespace swarmkit::config
