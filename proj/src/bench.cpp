#include "bench.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace swarmkit::bench {

RunOutcome evaluate_run(const RunReport& report, const SuccessRule& rule) {
    if (report.final_consensus.size() != rule.x_min.size())
        throw std::invalid_argument("evaluate_run: consensus and x_min differ in dimension");
    double sup = 0.0, sq = 0.0;
    for (std::size_t k = 0; k < rule.x_min.size(); ++k) {
        const double d = report.final_consensus[k] - rule.x_min[k];
        sup = std::max(sup, std::abs(d));
        sq += d * d;
    }
    return {sup < rule.delta_err, std::sqrt(sq), report.iterations};
}

std::pair<double, double> couple_local_global(double xi, double lambda2, double sigma2) {
    if (!(xi >= 0.0 && xi <= 1.0)) throw std::invalid_argument("xi: must lie in [0, 1]");
    return {xi * lambda2, xi * sigma2};
}

Aggregate aggregate(const std::vector<RunOutcome>& outcomes) {
    Aggregate a;
    a.runs = outcomes.size();
    if (outcomes.empty()) return a;
    std::size_t hits = 0;
    double err = 0.0, iters = 0.0;
    for (const auto& o : outcomes) {
        iters += static_cast<double>(o.iterations);
        if (o.success) {
            ++hits;
            err += o.error;
        }
    }
    a.rate = static_cast<double>(hits) / static_cast<double>(outcomes.size());
    if (hits > 0) a.error = err / static_cast<double>(hits);
    a.n_iter = iters / static_cast<double>(outcomes.size());
    return a;
}

std::uint64_t run_seed(std::uint64_t master_seed, std::size_t run_index) {
    return derive_key({master_seed, kRunTag, static_cast<std::uint64_t>(run_index)});
}

BenchRow run_ensemble(const BenchCell& cell, std::size_t n_runs, std::uint64_t master_seed,
                      const EnsembleOptions& options) {
    if (n_runs == 0) throw std::invalid_argument("runs: must be positive");
    validate(cell.params);
    validate(cell.stop);
    if (!(cell.delta_err > 0.0)) throw std::invalid_argument("success.delta_err: must be positive");

    SuccessRule rule{cell.delta_err, std::vector<double>(cell.objective.dim, cell.objective.shift)};
    RunOptions ropts;
    ropts.particles = cell.particles;
    ropts.init = cell.init;
    ropts.record_trajectory = false;

    std::vector<RunOutcome> outcomes(n_runs);
    const auto t0 = std::chrono::steady_clock::now();
    std::exception_ptr failure;

#ifdef _OPENMP
    const int threads = options.workers > 0 ? options.workers : omp_get_max_threads();
#endif
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::size_t r = 0; r < n_runs; ++r) {
        try {
            const std::uint64_t seed = options.seed_for_run ? options.seed_for_run(r) : run_seed(master_seed, r);
            ObjectiveSpec obj = cell.objective;
            if (obj.kind == ObjectiveKind::XSYRandom && !obj.frozen_noise)
                obj.frozen_noise = sample_xsy_noise(obj.dim, seed);
            const RunReport report = run(cell.params, obj, cell.stop, seed, ropts);
            outcomes[r] = evaluate_run(report, rule);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    BenchRow row;
    row.function = std::string(objective_name(cell.objective.kind));
    row.mode = std::string(mode_name(cell.params.mode));
    row.m = cell.params.m;
    row.sigma1 = cell.params.sigma1;
    row.sigma2 = cell.params.sigma2;
    row.lambda1 = cell.params.lambda1;
    row.lambda2 = cell.params.lambda2;
    row.alpha = cell.params.alpha;
    row.beta = cell.params.beta;
    row.nu = cell.params.nu;
    row.xi = cell.xi;
    row.particles = cell.particles;
    row.stats = aggregate(outcomes);
    row.wall_seconds = wall;
    if (options.outcomes) *options.outcomes = std::move(outcomes);
    return row;
}

void write_table_header(std::ostream& out) {
    out << "function,mode,m,sigma1,sigma2,lambda1,lambda2,alpha,beta,nu,xi,N,n_r,rate,error,n_iter,wall_seconds\n";
}

void write_table_row(std::ostream& out, const BenchRow& row) {
    const auto flags = out.flags();
    const auto prec = out.precision();
    out << std::setprecision(10);
    out << row.function << ',' << row.mode << ',' << row.m << ',' << row.sigma1 << ',' << row.sigma2 << ','
        << row.lambda1 << ',' << row.lambda2 << ',' << row.alpha << ',' << row.beta << ',' << row.nu << ','
        << row.xi << ',' << row.particles << ',' << row.stats.runs << ',' << row.stats.rate << ',';
    if (row.stats.error) out << *row.stats.error;
    out << ',' << row.stats.n_iter << ',' << std::setprecision(4) << row.wall_seconds << '\n';
    out.flags(flags);
    out.precision(prec);
}

void write_table(std::ostream& out, const std::vector<BenchRow>& rows) {
    write_table_header(out);
    for (const auto& r : rows) write_table_row(out, r);
}

}  // namespace swarmkit::bench
