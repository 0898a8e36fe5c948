#include "objectives.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rng.hpp"

namespace swarmkit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double ackley(std::span<const double> x, double b) {
    const double d = static_cast<double>(x.size());
    double sq = 0.0;
    double cs = 0.0;
    for (double xi : x) {
        const double z = xi - b;
        sq += z * z;
        cs += std::cos(kTwoPi * z);
    }
    // Grouped so the value at the minimum cancels to exactly zero.
    return 20.0 * (1.0 - std::exp(-0.2 * std::sqrt(sq / d))) + (std::numbers::e - std::exp(cs / d));
}

double griewank(std::span<const double> x, double b) {
    double sum = 0.0;
    double prod = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double z = x[i] - b;
        sum += z * z / 4000.0;
        prod *= std::cos(z / static_cast<double>(i + 1));
    }
    return 1.0 + sum - prod;
}

double rastrigin(std::span<const double> x, double b) {
    double s = 10.0 * static_cast<double>(x.size());
    for (double xi : x) {
        const double z = xi - b;
        s += z * z - 10.0 * std::cos(kTwoPi * z);
    }
    return s;
}

double salomon(std::span<const double> x, double b) {
    double sq = 0.0;
    for (double xi : x) sq += (xi - b) * (xi - b);
    const double r = std::sqrt(sq);
    return 1.0 - std::cos(kTwoPi * r) + 0.1 * r;
}

double schwefel(std::span<const double> x, double b) {
    double s = 0.0;
    for (double xi : x) s += std::abs(xi - b);
    return s;
}

double xsy(std::span<const double> x, double b, const std::vector<double>& eta) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += eta[i] * std::pow(std::abs(x[i] - b), static_cast<double>(i + 1));
    }
    return s;
}

}  // namespace

Box standard_box(ObjectiveKind kind) {
    switch (kind) {
        case ObjectiveKind::Ackley: return {-32.0, 32.0};
        case ObjectiveKind::Griewank: return {-100.0, 100.0};
        case ObjectiveKind::Rastrigin: return {-5.12, 5.12};
        case ObjectiveKind::Salomon: return {-100.0, 100.0};
        case ObjectiveKind::Schwefel: return {-100.0, 100.0};
        case ObjectiveKind::XSYRandom: return {-5.0, 5.0};
    }
    throw std::invalid_argument("unknown objective kind");
}

ObjectiveSpec make_objective(ObjectiveKind kind, std::size_t dim, double shift, double offset,
                             std::uint64_t noise_seed) {
    ObjectiveSpec spec;
    spec.kind = kind;
    spec.dim = dim;
    spec.shift = shift;
    spec.offset = offset;
    spec.box = standard_box(kind);
    if (kind == ObjectiveKind::XSYRandom) spec.frozen_noise = sample_xsy_noise(dim, noise_seed);
    validate(spec);
    return spec;
}

ObjectiveKind parse_objective_kind(std::string_view name) {
    std::string key(name);
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (key == "ackley") return ObjectiveKind::Ackley;
    if (key == "griewank" || key == "griewalk") return ObjectiveKind::Griewank;
    if (key == "rastrigin") return ObjectiveKind::Rastrigin;
    if (key == "salomon") return ObjectiveKind::Salomon;
    if (key == "schwefel") return ObjectiveKind::Schwefel;
    if (key == "xsy" || key == "xsy_random" || key == "xsyrandom") return ObjectiveKind::XSYRandom;
    throw std::invalid_argument("unknown objective '" + std::string(name) + "'");
}

std::string_view objective_name(ObjectiveKind kind) {
    switch (kind) {
        case ObjectiveKind::Ackley: return "ackley";
        case ObjectiveKind::Griewank: return "griewank";
        case ObjectiveKind::Rastrigin: return "rastrigin";
        case ObjectiveKind::Salomon: return "salomon";
        case ObjectiveKind::Schwefel: return "schwefel";
        case ObjectiveKind::XSYRandom: return "xsy";
    }
    return "unknown";
}

void validate(const ObjectiveSpec& spec) {
    if (spec.dim == 0) throw std::invalid_argument("objective dimension must be positive");
    if (!(spec.box.lower < spec.box.upper)) {
        throw std::invalid_argument("objective box requires lower < upper");
    }
    if (spec.kind == ObjectiveKind::XSYRandom && spec.frozen_noise &&
        spec.frozen_noise->size() != spec.dim) {
        throw std::invalid_argument("XSY noise length does not match dimension");
    }
}

double evaluate(const ObjectiveSpec& spec, std::span<const double> x) {
    if (x.size() != spec.dim) {
        throw std::invalid_argument("point has dimension " + std::to_string(x.size()) +
                                    ", objective expects " + std::to_string(spec.dim));
    }
    const double b = spec.shift;
    double value = 0.0;
    switch (spec.kind) {
        case ObjectiveKind::Ackley: value = ackley(x, b); break;
        case ObjectiveKind::Griewank: value = griewank(x, b); break;
        case ObjectiveKind::Rastrigin: value = rastrigin(x, b); break;
        case ObjectiveKind::Salomon: value = salomon(x, b); break;
        case ObjectiveKind::Schwefel: value = schwefel(x, b); break;
        case ObjectiveKind::XSYRandom:
            if (!spec.frozen_noise || spec.frozen_noise->size() != spec.dim) {
                throw std::invalid_argument("XSY objective has no frozen noise");
            }
            value = xsy(x, b, *spec.frozen_noise);
            break;
    }
    return value + spec.offset;
}

void evaluate_rows(const ObjectiveSpec& spec, std::span<const double> points,
                   std::span<double> costs) {
    const std::size_t d = spec.dim;
    if (points.size() != costs.size() * d) {
        throw std::invalid_argument("evaluate_rows: point matrix does not match cost vector");
    }
    for (std::size_t i = 0; i < costs.size(); ++i) costs[i] = evaluate(spec, points.subspan(i * d, d));
}

std::vector<double> sample_xsy_noise(std::size_t dim, std::uint64_t seed) {
    KeyedStream stream(derive_key({seed, kObjectiveTag}));
    std::vector<double> eta(dim);
    for (double& e : eta) e = stream.uniform01();
    return eta;
}

}  // namespace swarmkit
