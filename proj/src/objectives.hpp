#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace swarmkit {

enum class ObjectiveKind { Ackley, Griewank, Rastrigin, Salomon, Schwefel, XSYRandom };

struct Box {
    double lower = 0.0;
    double upper = 0.0;

    friend bool operator==(const Box&, const Box&) = default;
};

// A shifted/offset test function F(x) with its minimum F(B,...,B) = C.
// Immutable once built; evaluate() is safe to call concurrently.
struct ObjectiveSpec {
    ObjectiveKind kind = ObjectiveKind::Ackley;
    std::size_t dim = 1;
    double shift = 0.0;   // B
    double offset = 0.0;  // C
    Box box{-32.0, 32.0};
    // eta_i of the XSY random function, drawn once and frozen.
    std::optional<std::vector<double>> frozen_noise;

    friend bool operator==(const ObjectiveSpec&, const ObjectiveSpec&) = default;
};

// Standard search domain of each function.
Box standard_box(ObjectiveKind kind);

// Builds a spec with the standard box; XSY noise is drawn from `noise_seed`.
ObjectiveSpec make_objective(ObjectiveKind kind, std::size_t dim, double shift = 0.0,
                             double offset = 0.0, std::uint64_t noise_seed = 0);

// Accepts "ackley", "griewank" (alias "griewalk"), "rastrigin", "salomon",
// "schwefel", "xsy" / "xsy_random". Case-insensitive.
ObjectiveKind parse_objective_kind(std::string_view name);
std::string_view objective_name(ObjectiveKind kind);

// Throws std::invalid_argument on dimension mismatch or missing XSY noise.
double evaluate(const ObjectiveSpec& spec, std::span<const double> x);

// Evaluates every row of a row-major n x dim matrix.
void evaluate_rows(const ObjectiveSpec& spec, std::span<const double> points,
                   std::span<double> costs);

std::vector<double> sample_xsy_noise(std::size_t dim, std::uint64_t seed);

void validate(const ObjectiveSpec& spec);

}  // namespace swarmkit
