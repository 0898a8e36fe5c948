#include "experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "bench.hpp"
#include "meanfield.hpp"
#include "rng.hpp"
#include "run.hpp"
#include "snapshot_io.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace swarmkit {

namespace {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;
using config::ExperimentConfig;
using config::ExperimentKind;

std::string time_tag(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "t%.3f", t);
    return buf;
}

std::vector<double> snapshot_times(const ExperimentConfig& c) {
    if (c.grid.snapshots.empty()) return {c.grid.t_end};
    return c.grid.snapshots;
}

SwarmMode particle_mode(pde::Kind kind) {
    switch (kind) {
        case pde::Kind::MfPso: return SwarmMode::SDPSO_NoMemory;
        case pde::Kind::MfPsoMemory: return SwarmMode::SDPSO_Memory;
        case pde::Kind::MfCbo: return SwarmMode::CBO;
        case pde::Kind::MfCboLocalBest: return SwarmMode::CBO_LocalBest;
    }
    return SwarmMode::SDPSO_NoMemory;
}

// The particle counterpart of a grid law: "uniform_box" means the x axis.
InitialLaw particle_law(const InitialLaw& law, const pde::Axis& x) {
    InitialLaw out = law;
    if (out.position == InitialLaw::Position::UniformBox) {
        out.position = InitialLaw::Position::Uniform;
        out.x_lower = x.lower;
        out.x_upper = x.upper;
    }
    return out;
}

class Artifacts {
public:
    explicit Artifacts(fs::path dir) : dir_(std::move(dir)) {}

    fs::path path(const std::string& name) {
        list_.push_back(name);
        return dir_ / name;
    }

    void density(const pde::DensityField& f, const std::string& stem) {
        io::save_density(f, path(stem + ".csv"));
        io::save_density(f, path(stem + ".bin"));
        io::save_plot_columns(f, path(stem + ".dat"));
    }

    void columns(const pde::DensityField& f, const std::string& stem) { io::save_plot_columns(f, path(stem + ".dat")); }

    const std::vector<std::string>& list() const { return list_; }

private:
    fs::path dir_;
    std::vector<std::string> list_;
};

void particle_run(const ExperimentConfig& c, std::uint64_t seed, Artifacts& art, ojson& results) {
    const ObjectiveSpec obj = config::build_objective(c.objective);
    RunOptions opts;
    opts.particles = c.particles;
    opts.init = c.init;
    const RunReport report = run(c.solver, obj, c.stop, seed, opts);
    const bench::SuccessRule rule{c.delta_err, std::vector<double>(obj.dim, obj.shift)};
    const bench::RunOutcome outcome = bench::evaluate_run(report, rule);

    results["iterations"] = report.iterations;
    results["stop_reason"] = stop_reason_name(report.reason);
    results["final_consensus"] = report.final_consensus;
    results["success"] = outcome.success;
    results["error"] = outcome.error;

    if (report.iterations == 0) return;
    std::ofstream out(art.path("trajectory.dat"));
    out << std::setprecision(17) << "# iteration consensus[0..d-1]\n";
    for (std::size_t i = 0; i < report.consensus_trajectory.size(); ++i) {
        out << i;
        for (double v : report.consensus_trajectory[i]) out << ' ' << v;
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: trajectory.dat");
}

void particle_sweep(const ExperimentConfig& c, std::uint64_t seed, int workers, Artifacts& art, ojson& results) {
    auto or_default = [](const auto& list, auto fallback) {
        using T = decltype(fallback);
        return list.empty() ? std::vector<T>{fallback} : std::vector<T>(list.begin(), list.end());
    };
    const auto functions = or_default(c.sweep.functions, std::string(objective_name(c.objective.kind)));
    const auto shifts = or_default(c.sweep.shift, c.objective.shift);
    const auto ms = or_default(c.sweep.m, c.solver.m);
    const auto sigmas = or_default(c.sweep.sigma2, c.solver.sigma2);
    const auto alphas = or_default(c.sweep.alpha, c.solver.alpha);
    const auto xis = c.sweep.xi.empty() ? std::vector<std::optional<double>>{c.xi}
                                        : std::vector<std::optional<double>>(c.sweep.xi.begin(), c.sweep.xi.end());
    const auto counts = or_default(c.sweep.particles, c.particles);

    std::vector<bench::BenchRow> rows;
    std::size_t cell_index = 0;
    std::ofstream table(art.path("bench_table.csv"));
    bench::write_table_header(table);
    for (const auto& fn : functions)
        for (double shift : shifts)
            for (double m : ms)
                for (double sigma2 : sigmas)
                    for (double alpha : alphas)
                        for (const auto& xi : xis)
                            for (std::size_t n : counts) {
                                bench::BenchCell cell;
                                config::ObjectiveBlock ob = c.objective;
                                ob.kind = parse_objective_kind(fn);
                                ob.shift = shift;
                                cell.objective = config::build_objective(ob);
                                cell.params = c.solver;
                                cell.params.set_inertia(m);
                                cell.params.sigma2 = sigma2;
                                cell.params.alpha = alpha;
                                if (xi) {
                                    std::tie(cell.params.lambda1, cell.params.sigma1) =
                                        bench::couple_local_global(*xi, cell.params.lambda2, sigma2);
                                    cell.xi = *xi;
                                }
                                cell.particles = n;
                                cell.init = c.init;
                                cell.stop = c.stop;
                                cell.delta_err = c.delta_err;
                                const std::uint64_t cell_seed = derive_key({seed, cell_index++});
                                rows.push_back(bench::run_ensemble(cell, c.runs, cell_seed, {workers, {}, nullptr}));
                                bench::write_table_row(table, rows.back());
                                table.flush();
                            }
    if (!table) throw std::runtime_error("write failed: bench_table.csv");
    results["cells"] = rows.size();
    ojson summary = ojson::array();
    for (const auto& r : rows) {
        summary.push_back(ojson{{"function", r.function},
                                {"mode", r.mode},
                                {"m", r.m},
                                {"sigma2", r.sigma2},
                                {"alpha", r.alpha},
                                {"xi", r.xi},
                                {"N", r.particles},
                                {"rate", r.stats.rate},
                                {"error", r.stats.error ? ojson(*r.stats.error) : ojson(nullptr)},
                                {"n_iter", r.stats.n_iter}});
    }
    results["rows"] = summary;
}

pde::MeanFieldSolver make_solver(pde::Kind kind, const ExperimentConfig& c, const SolverParams& params) {
    const ObjectiveSpec obj = config::build_objective(c.objective);
    pde::DensityField init = pde::initial_density(kind, c.grid.grid, c.init);
    return pde::MeanFieldSolver(kind, params, c.grid.grid, obj, std::move(init));
}

ojson field_summary(const pde::MeanFieldSolver& s) {
    return ojson{{"time", s.field().time},
                 {"mass", s.field().mass()},
                 {"consensus", s.last_consensus()},
                 {"worst_undershoot", s.worst_undershoot()}};
}

void meanfield_run(const ExperimentConfig& c, Artifacts& art, ojson& results) {
    pde::MeanFieldSolver solver = make_solver(c.grid.pde, c, c.solver);
    ojson snaps = ojson::array();
    for (double t : snapshot_times(c)) {
        solver.advance_to(t);
        const std::string tag = time_tag(t);
        art.density(solver.field(), "density_" + tag);
        art.columns(pde::marginal(solver.field(), "x"), "rho_" + tag);
        snaps.push_back(field_summary(solver));
    }
    results["snapshots"] = snaps;
}

// Steps a particle swarm to each requested time, returning x-histograms.
std::vector<pde::DensityField> particle_histograms(const SolverParams& params, const ObjectiveSpec& obj,
                                                   std::size_t n, const InitialLaw& law, std::uint64_t seed,
                                                   const std::vector<double>& times, const pde::Axis& axis) {
    SwarmState state = initial_state(params, obj, n, law, seed);
    const NoiseSource rng(seed);
    std::vector<pde::DensityField> out;
    for (double t : times) {
        const auto target = static_cast<std::uint64_t>(std::llround(t / params.dt));
        while (state.step < target) step(state, params, obj, rng);
        out.push_back(pde::particle_histogram(state.x, state.d, 0, axis));
        out.back().time = static_cast<double>(state.step) * params.dt;
    }
    return out;
}

void meanfield_vs_particle(const ExperimentConfig& c, std::uint64_t seed, Artifacts& art, ojson& results) {
    pde::MeanFieldSolver solver = make_solver(c.grid.pde, c, c.solver);
    SolverParams pp = c.solver;
    pp.mode = particle_mode(c.grid.pde);
    const ObjectiveSpec obj = config::build_objective(c.objective);
    const auto times = snapshot_times(c);
    const auto hist = particle_histograms(pp, obj, c.particles, particle_law(c.init, c.grid.grid.x), seed, times,
                                          c.grid.grid.x);
    ojson snaps = ojson::array();
    for (std::size_t i = 0; i < times.size(); ++i) {
        solver.advance_to(times[i]);
        const std::string tag = time_tag(times[i]);
        const pde::DensityField rho = pde::marginal(solver.field(), "x");
        art.density(solver.field(), "density_" + tag);
        art.columns(rho, "rho_pde_" + tag);
        art.columns(hist[i], "rho_particles_" + tag);
        ojson s = field_summary(solver);
        s["l1_distance"] = pde::l1_distance(rho, hist[i]);
        snaps.push_back(s);
    }
    results["particle_mode"] = mode_name(pp.mode);
    results["snapshots"] = snaps;
}

void inertia_comparison(const ExperimentConfig& c, std::uint64_t seed, int workers, Artifacts& art, ojson& results) {
    const std::vector<double> ms = c.sweep.m.empty() ? std::vector<double>{0.5, 0.1, 0.01} : c.sweep.m;
    const auto times = snapshot_times(c);
    const ObjectiveSpec obj = config::build_objective(c.objective);
    const InitialLaw law = particle_law(c.init, c.grid.grid.x);

    SolverParams cbo = c.solver;
    cbo.mode = SwarmMode::CBO;
    cbo.set_inertia(0.0);
    pde::MeanFieldSolver solver = make_solver(pde::Kind::MfCbo, c, cbo);
    std::vector<pde::DensityField> limit;
    for (double t : times) {
        solver.advance_to(t);
        limit.push_back(solver.field());
        art.columns(solver.field(), "rho_cbo_" + time_tag(t));
    }

    std::vector<std::vector<pde::DensityField>> hists(ms.size());
#ifdef _OPENMP
    const int threads = workers > 0 ? workers : omp_get_max_threads();
#else
    (void)workers;
#endif
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::size_t k = 0; k < ms.size(); ++k) {
        try {
            SolverParams pp = c.solver;
            pp.mode = SwarmMode::SDPSO_NoMemory;
            pp.set_inertia(ms[k]);
            hists[k] = particle_histograms(pp, obj, c.particles, law, seed, times, c.grid.grid.x);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    ojson rows = ojson::array();
    for (std::size_t k = 0; k < ms.size(); ++k) {
        ojson dist = ojson::array();
        for (std::size_t i = 0; i < times.size(); ++i) {
            char stem[64];
            std::snprintf(stem, sizeof stem, "rho_m%.4g_", ms[k]);
            art.columns(hists[k][i], stem + time_tag(times[i]));
            dist.push_back(ojson{{"time", times[i]}, {"l1_distance", pde::l1_distance(hists[k][i], limit[i])}});
        }
        rows.push_back(ojson{{"m", ms[k]}, {"distances", dist}});
    }
    results["inertia"] = rows;
}

}  // namespace

std::string run_experiment(ExperimentConfig c, const ExperimentOverrides& overrides) {
    if (overrides.out_dir) c.output = overrides.out_dir->string();
    if (overrides.seed) c.seed = *overrides.seed;
    if (overrides.workers) c.workers = *overrides.workers;
    config::validate(c);

    const fs::path dir(c.output);
    fs::create_directories(dir);
    Artifacts art(dir);
    ojson results = ojson::object();
    const auto t0 = std::chrono::steady_clock::now();

    switch (c.kind) {
        case ExperimentKind::ParticleRun: particle_run(c, c.seed, art, results); break;
        case ExperimentKind::ParticleSweep: particle_sweep(c, c.seed, c.workers, art, results); break;
        case ExperimentKind::MeanfieldRun: meanfield_run(c, art, results); break;
        case ExperimentKind::MeanfieldVsParticle: meanfield_vs_particle(c, c.seed, art, results); break;
        case ExperimentKind::InertiaComparison: inertia_comparison(c, c.seed, c.workers, art, results); break;
    }

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ojson manifest;
    manifest["version"] = kVersion;
    manifest["kind"] = config::kind_name(c.kind);
    manifest["seed"] = c.seed;
    manifest["workers"] = c.workers;
    manifest["config"] = ojson::parse(config::serialize_config(c));
    manifest["artifacts"] = art.list();
    manifest["results"] = results;
    manifest["wall_seconds"] = wall;
    const std::string text = manifest.dump(2);
    std::ofstream out(dir / "manifest.json");
    out << text << '\n';
    if (!out) throw std::runtime_error("write failed: manifest.json");
    return text;
}

}  // namespace swarmkit
