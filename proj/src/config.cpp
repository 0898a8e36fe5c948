#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "bench.hpp"

namespace swarmkit::config {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string lower_copy(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::invalid_argument(path + ": " + what);
}

// Object view that remembers which keys were read, so leftovers can be
// reported as unknown.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail(path_.empty() ? "config" : path_, "expected an object");
    }

    std::string at(std::string_view key) const {
        return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
    }

    const json* get(std::string_view key) {
        seen_.insert(std::string(key));
        const auto it = j_.find(std::string(key));
        return it == j_.end() || it->is_null() ? nullptr : &*it;
    }

    bool has(std::string_view key) const { return j_.contains(std::string(key)); }

    void number(std::string_view key, double& out) {
        if (const json* v = get(key)) {
            if (!v->is_number()) fail(at(key), "expected a number");
            out = v->get<double>();
        }
    }

    template <class U>
    void count(std::string_view key, U& out) {
        if (const json* v = get(key)) {
            if (!v->is_number_unsigned()) fail(at(key), "expected a nonnegative integer");
            out = static_cast<U>(v->get<std::uint64_t>());
        }
    }

    void integer(std::string_view key, int& out) {
        if (const json* v = get(key)) {
            if (!v->is_number_integer()) fail(at(key), "expected an integer");
            out = v->get<int>();
        }
    }

    void boolean(std::string_view key, bool& out) {
        if (const json* v = get(key)) {
            if (!v->is_boolean()) fail(at(key), "expected true or false");
            out = v->get<bool>();
        }
    }

    bool string(std::string_view key, std::string& out) {
        if (const json* v = get(key)) {
            if (!v->is_string()) fail(at(key), "expected a string");
            out = v->get<std::string>();
            return true;
        }
        return false;
    }

    template <class F>
    void parsed(std::string_view key, F&& parse_fn) {
        std::string s;
        if (string(key, s)) {
            try {
                parse_fn(s);
            } catch (const std::invalid_argument& e) {
                fail(at(key), e.what());
            }
        }
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) fail(at(it.key()), "unknown key");
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

bool is_meanfield(ExperimentKind k) {
    return k == ExperimentKind::MeanfieldRun || k == ExperimentKind::InertiaComparison ||
           k == ExperimentKind::MeanfieldVsParticle;
}

std::string_view position_name(InitialLaw::Position p) {
    switch (p) {
        case InitialLaw::Position::UniformBox: return "uniform_box";
        case InitialLaw::Position::Uniform: return "uniform";
        case InitialLaw::Position::Gaussian: return "gaussian";
    }
    return "uniform_box";
}

InitialLaw::Position parse_position(std::string_view s) {
    const std::string l = lower_copy(s);
    if (l == "uniform_box") return InitialLaw::Position::UniformBox;
    if (l == "uniform") return InitialLaw::Position::Uniform;
    if (l == "gaussian") return InitialLaw::Position::Gaussian;
    throw std::invalid_argument("unknown position law '" + std::string(s) + "'");
}

std::string_view velocity_name(InitialLaw::Velocity v) {
    switch (v) {
        case InitialLaw::Velocity::Zero: return "zero";
        case InitialLaw::Velocity::Gaussian: return "gaussian";
        case InitialLaw::Velocity::Uniform: return "uniform";
    }
    return "zero";
}

InitialLaw::Velocity parse_velocity(std::string_view s) {
    const std::string l = lower_copy(s);
    if (l == "zero") return InitialLaw::Velocity::Zero;
    if (l == "gaussian") return InitialLaw::Velocity::Gaussian;
    if (l == "uniform") return InitialLaw::Velocity::Uniform;
    throw std::invalid_argument("unknown velocity law '" + std::string(s) + "'");
}

void read_axis(Reader& parent, std::string_view key, pde::Axis& axis) {
    const json* v = parent.get(key);
    if (!v) return;
    Reader r(*v, parent.at(key));
    r.number("lower", axis.lower);
    r.number("upper", axis.upper);
    r.count("cells", axis.cells);
    r.finish();
}

template <class T, class F>
void read_list(Reader& parent, std::string_view key, std::vector<T>& out, F&& item) {
    const json* v = parent.get(key);
    if (!v) return;
    if (!v->is_array()) fail(parent.at(key), "expected a list");
    out.clear();
    for (std::size_t i = 0; i < v->size(); ++i)
        out.push_back(item((*v)[i], parent.at(key) + "[" + std::to_string(i) + "]"));
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
}

ojson axis_json(const pde::Axis& a) { return ojson{{"lower", a.lower}, {"upper", a.upper}, {"cells", a.cells}}; }

}  // namespace

std::string_view kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::ParticleRun: return "particle_run";
        case ExperimentKind::ParticleSweep: return "particle_sweep";
        case ExperimentKind::MeanfieldRun: return "meanfield_run";
        case ExperimentKind::InertiaComparison: return "inertia_comparison";
        case ExperimentKind::MeanfieldVsParticle: return "meanfield_vs_particle";
    }
    return "particle_run";
}

ExperimentKind parse_kind(std::string_view name) {
    const std::string s = lower_copy(name);
    for (auto k : {ExperimentKind::ParticleRun, ExperimentKind::ParticleSweep, ExperimentKind::MeanfieldRun,
                   ExperimentKind::InertiaComparison, ExperimentKind::MeanfieldVsParticle})
        if (s == kind_name(k)) return k;
    throw std::invalid_argument("unknown experiment kind '" + std::string(name) + "'");
}

ObjectiveSpec build_objective(const ObjectiveBlock& block) {
    ObjectiveSpec spec = make_objective(block.kind, block.dim, block.shift, block.offset, block.noise_seed);
    if (block.box) spec.box = *block.box;
    return spec;
}

ExperimentConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: not valid JSON (") + e.what() + ")");
    }
    ExperimentConfig c;
    Reader root(doc, "");

    std::string kind;
    if (!root.string("kind", kind)) fail("kind", "missing");
    try {
        c.kind = parse_kind(kind);
    } catch (const std::invalid_argument& e) {
        fail("kind", e.what());
    }
    const bool mf = is_meanfield(c.kind);
    c.objective.dim = mf ? 1 : 20;
    if (mf) {
        c.init.velocity = InitialLaw::Velocity::Gaussian;
        c.init.v_scale = 0.5;
    }

    if (const json* o = root.get("objective")) {
        Reader r(*o, "objective");
        if (!r.has("name")) fail("objective.name", "missing");
        r.parsed("name", [&](const std::string& s) { c.objective.kind = parse_objective_kind(s); });
        r.count("dim", c.objective.dim);
        r.number("shift", c.objective.shift);
        r.number("offset", c.objective.offset);
        r.count("noise_seed", c.objective.noise_seed);
        if (const json* b = r.get("box")) {
            if (!b->is_array() || b->size() != 2) fail("objective.box", "expected [lower, upper]");
            c.objective.box = Box{as_number((*b)[0], "objective.box[0]"), as_number((*b)[1], "objective.box[1]")};
        }
        r.finish();
    } else {
        fail("objective", "missing");
    }

    if (const json* s = root.get("solver")) {
        Reader r(*s, "solver");
        r.parsed("mode", [&](const std::string& v) { c.solver.mode = parse_mode(v); });
        double m = c.solver.m;
        r.number("m", m);
        c.solver.set_inertia(m);
        r.number("lambda1", c.solver.lambda1);
        if (r.has("lambda") && r.has("lambda2")) fail("solver.lambda", "give either lambda or lambda2");
        if (r.has("sigma") && r.has("sigma2")) fail("solver.sigma", "give either sigma or sigma2");
        r.number("lambda", c.solver.lambda2);
        r.number("lambda2", c.solver.lambda2);
        r.number("sigma1", c.solver.sigma1);
        r.number("sigma", c.solver.sigma2);
        r.number("sigma2", c.solver.sigma2);
        r.number("nu", c.solver.nu);
        r.number("beta", c.solver.beta);
        r.number("alpha", c.solver.alpha);
        r.number("dt", c.solver.dt);
        r.parsed("noise", [&](const std::string& v) { c.solver.noise = parse_noise(v); });
        r.parsed("boundary", [&](const std::string& v) { c.solver.boundary = parse_boundary(v); });
        r.boolean("pso_constraint", c.solver.pso_constraint);
        if (r.get("xi")) {
            if (r.has("lambda1") || r.has("sigma1")) fail("solver.xi", "xi derives lambda1 and sigma1; do not give them too");
            double xi = 0.0;
            r.number("xi", xi);
            c.xi = xi;
        }
        r.count("particles", c.particles);
        if (const json* i = r.get("init")) {
            Reader ir(*i, "solver.init");
            ir.parsed("position", [&](const std::string& v) { c.init.position = parse_position(v); });
            ir.number("x_lower", c.init.x_lower);
            ir.number("x_upper", c.init.x_upper);
            ir.number("x_mean", c.init.x_mean);
            ir.number("x_std", c.init.x_std);
            ir.parsed("velocity", [&](const std::string& v) { c.init.velocity = parse_velocity(v); });
            ir.number("v_scale", c.init.v_scale);
            ir.finish();
        }
        r.finish();
    }

    if (const json* s = root.get("stop")) {
        Reader r(*s, "stop");
        r.number("delta_stall", c.stop.delta_stall);
        r.count("n_stall", c.stop.n_stall);
        r.count("max_iter", c.stop.max_iter);
        r.finish();
    }

    if (const json* s = root.get("success")) {
        Reader r(*s, "success");
        r.number("delta_err", c.delta_err);
        r.finish();
    }

    if (const json* g = root.get("grid")) {
        Reader r(*g, "grid");
        r.parsed("pde", [&](const std::string& v) { c.grid.pde = pde::parse_kind(v); });
        read_axis(r, "x", c.grid.grid.x);
        read_axis(r, "y", c.grid.grid.y);
        read_axis(r, "v", c.grid.grid.v);
        // y mirrors x unless given.
        if (!r.has("y")) c.grid.grid.y = c.grid.grid.x;
        r.number("dt", c.grid.grid.dt);
        r.parsed("splitting", [&](const std::string& v) { c.grid.grid.splitting = pde::parse_splitting(v); });
        r.number("theta", c.grid.grid.implicit_theta);
        r.parsed("v_flux", [&](const std::string& v) { c.grid.grid.v_flux = pde::parse_vflux(v); });
        r.number("t_end", c.grid.t_end);
        read_list(r, "snapshots", c.grid.snapshots, as_number);
        r.finish();
    }

    if (const json* s = root.get("sweep")) {
        Reader r(*s, "sweep");
        read_list(r, "functions", c.sweep.functions, [](const json& v, const std::string& path) {
            if (!v.is_string()) fail(path, "expected a string");
            try {
                parse_objective_kind(v.get<std::string>());
            } catch (const std::invalid_argument& e) {
                fail(path, e.what());
            }
            return v.get<std::string>();
        });
        read_list(r, "shift", c.sweep.shift, as_number);
        read_list(r, "m", c.sweep.m, as_number);
        read_list(r, "sigma2", c.sweep.sigma2, as_number);
        read_list(r, "alpha", c.sweep.alpha, as_number);
        read_list(r, "xi", c.sweep.xi, as_number);
        read_list(r, "particles", c.sweep.particles, [](const json& v, const std::string& path) {
            if (!v.is_number_unsigned()) fail(path, "expected a positive integer");
            return static_cast<std::size_t>(v.get<std::uint64_t>());
        });
        r.finish();
    }

    root.count("runs", c.runs);
    root.count("seed", c.seed);
    root.integer("workers", c.workers);
    root.string("output", c.output);
    root.finish();

    if (c.xi) {
        try {
            std::tie(c.solver.lambda1, c.solver.sigma1) = bench::couple_local_global(*c.xi, c.solver.lambda2, c.solver.sigma2);
        } catch (const std::invalid_argument& e) {
            fail("solver.xi", e.what());
        }
    }
    validate(c);
    return c;
}

void validate(const ExperimentConfig& c) {
    validate(c.solver);
    if (c.objective.dim == 0) fail("objective.dim", "must be positive");
    if (c.objective.box && !(c.objective.box->lower < c.objective.box->upper))
        fail("objective.box", "lower must be below upper");
    validate(c.stop);
    if (!(c.delta_err > 0.0)) fail("success.delta_err", "must be positive");
    if (c.particles == 0) fail("solver.particles", "must be positive");
    if (c.runs == 0) fail("runs", "must be positive");
    if (c.workers < 0) fail("workers", "must be nonnegative");
    if (c.output.empty()) fail("output", "must not be empty");
    if (c.init.position == InitialLaw::Position::Uniform && !(c.init.x_lower < c.init.x_upper))
        fail("solver.init.x_lower", "must be below x_upper");
    if (c.init.position == InitialLaw::Position::Gaussian && !(c.init.x_std > 0.0))
        fail("solver.init.x_std", "must be positive");
    if (c.init.velocity != InitialLaw::Velocity::Zero && !(c.init.v_scale > 0.0))
        fail("solver.init.v_scale", "must be positive");

    for (std::size_t i = 0; i < c.sweep.m.size(); ++i)
        if (!(c.sweep.m[i] >= 0.0 && c.sweep.m[i] <= 1.0)) fail("sweep.m[" + std::to_string(i) + "]", "must lie in [0, 1]");
    for (std::size_t i = 0; i < c.sweep.sigma2.size(); ++i)
        if (!(c.sweep.sigma2[i] >= 0.0)) fail("sweep.sigma2[" + std::to_string(i) + "]", "must be nonnegative");
    for (std::size_t i = 0; i < c.sweep.alpha.size(); ++i)
        if (!(c.sweep.alpha[i] >= 0.0)) fail("sweep.alpha[" + std::to_string(i) + "]", "must be nonnegative");
    for (std::size_t i = 0; i < c.sweep.xi.size(); ++i)
        if (!(c.sweep.xi[i] >= 0.0 && c.sweep.xi[i] <= 1.0)) fail("sweep.xi[" + std::to_string(i) + "]", "must lie in [0, 1]");
    for (std::size_t i = 0; i < c.sweep.particles.size(); ++i)
        if (c.sweep.particles[i] == 0) fail("sweep.particles[" + std::to_string(i) + "]", "must be positive");

    if (is_meanfield(c.kind)) {
        if (c.objective.dim != 1) fail("objective.dim", "mean-field experiments are one-dimensional");
        pde::Kind pk = c.grid.pde;
        if (c.kind == ExperimentKind::InertiaComparison) pk = pde::Kind::MfCbo;
        pde::validate(c.grid.grid, pk);
        if (!(c.grid.t_end > 0.0)) fail("grid.t_end", "must be positive");
        for (std::size_t i = 0; i < c.grid.snapshots.size(); ++i) {
            const double t = c.grid.snapshots[i];
            if (!(t >= 0.0 && t <= c.grid.t_end)) fail("grid.snapshots[" + std::to_string(i) + "]", "must lie in [0, t_end]");
        }
        if ((pk == pde::Kind::MfPso || pk == pde::Kind::MfPsoMemory) && !(c.solver.m > 0.0))
            fail("solver.m", "the kinetic mean-field model needs m > 0");
        if ((pk == pde::Kind::MfPso || pk == pde::Kind::MfPsoMemory) && c.init.velocity == InitialLaw::Velocity::Zero)
            fail("solver.init.velocity", "the kinetic density needs a Gaussian or uniform velocity law");
    }
}

std::string serialize_config(const ExperimentConfig& c) {
    ojson j;
    j["kind"] = kind_name(c.kind);
    ojson o{{"name", objective_name(c.objective.kind)},
            {"dim", c.objective.dim},
            {"shift", c.objective.shift},
            {"offset", c.objective.offset},
            {"noise_seed", c.objective.noise_seed}};
    if (c.objective.box) o["box"] = {c.objective.box->lower, c.objective.box->upper};
    j["objective"] = o;

    ojson s{{"mode", mode_name(c.solver.mode)}, {"m", c.solver.m}};
    if (c.xi) {
        s["xi"] = *c.xi;
    } else {
        s["lambda1"] = c.solver.lambda1;
        s["sigma1"] = c.solver.sigma1;
    }
    s["lambda2"] = c.solver.lambda2;
    s["sigma2"] = c.solver.sigma2;
    s["nu"] = c.solver.nu;
    s["beta"] = c.solver.beta;
    s["alpha"] = c.solver.alpha;
    s["dt"] = c.solver.dt;
    s["noise"] = noise_name(c.solver.noise);
    s["boundary"] = boundary_name(c.solver.boundary);
    s["pso_constraint"] = c.solver.pso_constraint;
    s["particles"] = c.particles;
    s["init"] = ojson{{"position", position_name(c.init.position)},
                      {"x_lower", c.init.x_lower},
                      {"x_upper", c.init.x_upper},
                      {"x_mean", c.init.x_mean},
                      {"x_std", c.init.x_std},
                      {"velocity", velocity_name(c.init.velocity)},
                      {"v_scale", c.init.v_scale}};
    j["solver"] = s;
    j["stop"] = ojson{{"delta_stall", c.stop.delta_stall}, {"n_stall", c.stop.n_stall}, {"max_iter", c.stop.max_iter}};
    j["success"] = ojson{{"delta_err", c.delta_err}};
    j["grid"] = ojson{{"pde", pde::kind_name(c.grid.pde)},
                      {"x", axis_json(c.grid.grid.x)},
                      {"y", axis_json(c.grid.grid.y)},
                      {"v", axis_json(c.grid.grid.v)},
                      {"dt", c.grid.grid.dt},
                      {"splitting", pde::splitting_name(c.grid.grid.splitting)},
                      {"theta", c.grid.grid.implicit_theta},
                      {"v_flux", pde::vflux_name(c.grid.grid.v_flux)},
                      {"t_end", c.grid.t_end},
                      {"snapshots", c.grid.snapshots}};
    j["sweep"] = ojson{{"functions", c.sweep.functions}, {"shift", c.sweep.shift}, {"m", c.sweep.m},
                       {"sigma2", c.sweep.sigma2},       {"alpha", c.sweep.alpha}, {"xi", c.sweep.xi},
                       {"particles", c.sweep.particles}};
    j["runs"] = c.runs;
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    j["output"] = c.output;
    return j.dump(2);
}

}  // namespace swarmkit::config
