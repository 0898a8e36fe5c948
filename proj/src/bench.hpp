#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "objectives.hpp"
#include "run.hpp"
#include "swarm.hpp"

namespace swarmkit::bench {

// Success iff the final consensus lies in the open sup-norm ball of radius
// delta_err around x_min.
struct SuccessRule {
    double delta_err = 0.25;
    std::vector<double> x_min;

    friend bool operator==(const SuccessRule&, const SuccessRule&) = default;
};

struct RunOutcome {
    bool success = false;
    double error = 0.0;  // Euclidean distance to x_min, recorded for every run
    std::size_t iterations = 0;
};

RunOutcome evaluate_run(const RunReport& report, const SuccessRule& rule);

// lambda1 = xi * lambda2, sigma1 = xi * sigma2.
std::pair<double, double> couple_local_global(double xi, double lambda2, double sigma2);

// One sweep cell. The objective's XSY noise, if not frozen already, is drawn
// per run from that run's seed.
struct BenchCell {
    ObjectiveSpec objective;
    SolverParams params;
    double xi = 0.0;
    std::size_t particles = 100;
    InitialLaw init{};
    StopRule stop{};
    double delta_err = 0.25;
};

struct Aggregate {
    std::size_t runs = 0;
    double rate = 0.0;
    std::optional<double> error;  // mean over successes only
    double n_iter = 0.0;          // mean over all runs
};

// Deterministic fold in the given order.
Aggregate aggregate(const std::vector<RunOutcome>& outcomes);

struct BenchRow {
    std::string function;
    std::string mode;
    double m = 0.0;
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double nu = 0.0;
    double xi = 0.0;
    std::size_t particles = 0;
    Aggregate stats;
    double wall_seconds = 0.0;
};

std::uint64_t run_seed(std::uint64_t master_seed, std::size_t run_index);

struct EnsembleOptions {
    int workers = 0;  // 0: OpenMP default
    // Overrides run_seed(); used to force identical runs.
    std::function<std::uint64_t(std::size_t)> seed_for_run;
    std::vector<RunOutcome>* outcomes = nullptr;  // per-run results, run-index order
};

BenchRow run_ensemble(const BenchCell& cell, std::size_t n_runs, std::uint64_t master_seed,
                      const EnsembleOptions& options = {});

// Columns: function, mode, m, sigma1, sigma2, lambda1, lambda2, alpha, beta,
// nu, xi, N, n_r, rate, error, n_iter, wall_seconds. error is empty when
// rate is 0.
void write_table_header(std::ostream& out);
void write_table_row(std::ostream& out, const BenchRow& row);
void write_table(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace swarmkit::bench
