#ifndef SWARMKIT_SWARMKIT_H
#define SWARMKIT_SWARMKIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef SWARMKIT_BUILDING
#    define SWARMKIT_API __declspec(dllexport)
#  else
#    define SWARMKIT_API __declspec(dllimport)
#  endif
#else
#  define SWARMKIT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum swarmkit_status {
    SWARMKIT_OK = 0,
    SWARMKIT_INVALID_ARGUMENT = 1,
    SWARMKIT_DIMENSION = 2,
    SWARMKIT_NUMERIC = 3,
    SWARMKIT_IO = 4,
    SWARMKIT_CONFIG = 5,
    SWARMKIT_INTERNAL = 6
} swarmkit_status;

typedef struct swarmkit_objective swarmkit_objective;
typedef struct swarmkit_density swarmkit_density;

/* Message of the last failing call on this thread ("" if none). */
SWARMKIT_API const char* swarmkit_last_error(void);
SWARMKIT_API const char* swarmkit_version(void);

/* name: ackley, griewank, rastrigin, salomon, schwefel, xsy. */
SWARMKIT_API swarmkit_status swarmkit_objective_create(const char* name, size_t dim, double shift,
                                                       double offset, uint64_t noise_seed,
                                                       swarmkit_objective** out);
SWARMKIT_API void swarmkit_objective_destroy(swarmkit_objective* obj);
SWARMKIT_API swarmkit_status swarmkit_objective_evaluate(const swarmkit_objective* obj, const double* x,
                                                         size_t dim, double* out);

/* points is n x dim row-major; out receives dim values. */
SWARMKIT_API swarmkit_status swarmkit_weighted_consensus(const double* points, size_t n, size_t dim,
                                                         const double* costs, double alpha,
                                                         double* out);
SWARMKIT_API double swarmkit_memory_switch(double cost_x, double cost_y, double beta);

/* Parses, validates and re-serializes a JSON config. Free the result with
   swarmkit_string_free. */
SWARMKIT_API swarmkit_status swarmkit_config_normalize(const char* config_json, char** out);

/* Runs an experiment. out_dir may be NULL (config value used); seed is used
   only when has_seed is nonzero; workers <= 0 keeps the config value.
   manifest may be NULL. */
SWARMKIT_API swarmkit_status swarmkit_experiment_run(const char* config_json, const char* out_dir,
                                                     uint64_t seed, int has_seed, int workers,
                                                     char** manifest);

/* Density snapshots (CSV or binary dump). */
SWARMKIT_API swarmkit_status swarmkit_density_load(const char* path, swarmkit_density** out);
SWARMKIT_API void swarmkit_density_destroy(swarmkit_density* d);
SWARMKIT_API swarmkit_status swarmkit_density_mass(const swarmkit_density* d, double* out);
SWARMKIT_API swarmkit_status swarmkit_density_time(const swarmkit_density* d, double* out);
SWARMKIT_API swarmkit_status swarmkit_density_size(const swarmkit_density* d, size_t* out);
SWARMKIT_API swarmkit_status swarmkit_density_write_columns(const swarmkit_density* d, const char* path);

SWARMKIT_API void swarmkit_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
