#include "swarmkit/swarmkit.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <new>
#include <stdexcept>
#include <string>

#include "config.hpp"
#include "consensus.hpp"
#include "experiment.hpp"
#include "objectives.hpp"
#include "snapshot_io.hpp"

struct swarmkit_objective {
    swarmkit::ObjectiveSpec spec;
};

struct swarmkit_density {
    swarmkit::pde::DensityField field;
};

namespace {

thread_local std::string g_last_error;

swarmkit_status fail(swarmkit_status code, const char* what) {
    g_last_error = what;
    return code;
}

// Maps exceptions escaping the core onto status codes.
template <class F>
swarmkit_status guarded(F&& body, swarmkit_status invalid = SWARMKIT_INVALID_ARGUMENT) {
    try {
        g_last_error.clear();
        body();
        return SWARMKIT_OK;
    } catch (const std::invalid_argument& e) {
        return fail(invalid, e.what());
    } catch (const std::domain_error& e) {
        return fail(SWARMKIT_NUMERIC, e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(SWARMKIT_IO, e.what());
    } catch (const std::runtime_error& e) {
        return fail(SWARMKIT_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(SWARMKIT_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(SWARMKIT_INTERNAL, e.what());
    } catch (...) {
        return fail(SWARMKIT_INTERNAL, "unknown error");
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

extern "C" {

const char* swarmkit_last_error(void) { return g_last_error.c_str(); }

const char* swarmkit_version(void) { return swarmkit::kVersion; }

swarmkit_status swarmkit_objective_create(const char* name, size_t dim, double shift, double offset,
                                          uint64_t noise_seed, swarmkit_objective** out) {
    if (!name || !out) return fail(SWARMKIT_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto kind = swarmkit::parse_objective_kind(name);
        auto spec = swarmkit::make_objective(kind, dim, shift, offset, noise_seed);
        swarmkit::validate(spec);
        *out = new swarmkit_objective{std::move(spec)};
    });
}

void swarmkit_objective_destroy(swarmkit_objective* obj) { delete obj; }

swarmkit_status swarmkit_objective_evaluate(const swarmkit_objective* obj, const double* x, size_t dim,
                                            double* out) {
    if (!obj || !x || !out) return fail(SWARMKIT_INVALID_ARGUMENT, "null argument");
    if (dim != obj->spec.dim) return fail(SWARMKIT_DIMENSION, "point dimension does not match the objective");
    return guarded([&] { *out = swarmkit::evaluate(obj->spec, std::span<const double>(x, dim)); });
}

swarmkit_status swarmkit_weighted_consensus(const double* points, size_t n, size_t dim, const double* costs,
                                            double alpha, double* out) {
    if (!points || !costs || !out) return fail(SWARMKIT_INVALID_ARGUMENT, "null argument");
    if (dim == 0) return fail(SWARMKIT_DIMENSION, "dimension must be positive");
    return guarded([&] {
        swarmkit::ConsensusParams params;
        params.alpha = alpha;
        auto c = swarmkit::weighted_consensus(std::span<const double>(points, n * dim), dim,
                                              std::span<const double>(costs, n), params);
        std::memcpy(out, c.data(), dim * sizeof(double));
    });
}

double swarmkit_memory_switch(double cost_x, double cost_y, double beta) {
    return swarmkit::memory_switch(cost_x, cost_y, beta);
}

swarmkit_status swarmkit_config_normalize(const char* config_json, char** out) {
    if (!config_json || !out) return fail(SWARMKIT_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded(
        [&] { *out = dup_string(swarmkit::config::serialize_config(swarmkit::config::parse_config(config_json))); },
        SWARMKIT_CONFIG);
}

swarmkit_status swarmkit_experiment_run(const char* config_json, const char* out_dir, uint64_t seed,
                                        int has_seed, int workers, char** manifest) {
    if (!config_json) return fail(SWARMKIT_INVALID_ARGUMENT, "null argument");
    if (manifest) *manifest = nullptr;
    swarmkit::config::ExperimentConfig cfg;
    const swarmkit_status parsed =
        guarded([&] { cfg = swarmkit::config::parse_config(config_json); }, SWARMKIT_CONFIG);
    if (parsed != SWARMKIT_OK) return parsed;
    return guarded([&] {
        swarmkit::ExperimentOverrides ov;
        if (out_dir) ov.out_dir = out_dir;
        if (has_seed) ov.seed = seed;
        if (workers > 0) ov.workers = workers;
        const std::string text = swarmkit::run_experiment(cfg, ov);
        if (manifest) *manifest = dup_string(text);
    });
}

swarmkit_status swarmkit_density_load(const char* path, swarmkit_density** out) {
    if (!path || !out) return fail(SWARMKIT_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] { *out = new swarmkit_density{swarmkit::io::load_density(path)}; });
}

void swarmkit_density_destroy(swarmkit_density* d) { delete d; }

swarmkit_status swarmkit_density_mass(const swarmkit_density* d, double* out) {
    if (!d || !out) return fail(SWARMKIT_INVALID_ARGUMENT, "null argument");
    *out = d->field.mass();
    return SWARMKIT_OK;
}

swarmkit_status swarmkit_density_time(const swarmkit_density* d, double* out) {
    if (!d || !out) return fail(SWARMKIT_INVALID_ARGUMENT, "null argument");
    *out = d->field.time;
    return SWARMKIT_OK;
}

swarmkit_status swarmkit_density_size(const swarmkit_density* d, size_t* out) {
    if (!d || !out) return fail(SWARMKIT_INVALID_ARGUMENT, "null argument");
    *out = d->field.values.size();
    return SWARMKIT_OK;
}

swarmkit_status swarmkit_density_write_columns(const swarmkit_density* d, const char* path) {
    if (!d || !path) return fail(SWARMKIT_INVALID_ARGUMENT, "null argument");
    return guarded([&] { swarmkit::io::save_plot_columns(d->field, path); });
}

void swarmkit_string_free(char* s) { std::free(s); }

}  // extern "C"
