#include <doctest.h>

#include <stdexcept>
#include <string>

#include "config.hpp"

using namespace swarmkit;
using namespace swarmkit::config;

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("a minimal config takes the documented defaults") {
    const auto c = parse_config(R"({"kind": "particle_run", "objective": {"name": "ackley"}})");
    CHECK(c.kind == ExperimentKind::ParticleRun);
    CHECK(c.objective.kind == ObjectiveKind::Ackley);
    CHECK(c.objective.dim == 20);
    CHECK(c.solver.mode == SwarmMode::SDPSO_NoMemory);
    CHECK(c.solver.alpha == 5e4);
    CHECK(c.solver.dt == 0.01);
    CHECK(c.stop.max_iter == 10000);
    CHECK(c.stop.n_stall == 250);
    CHECK(c.stop.delta_stall == 1e-4);
    CHECK(c.delta_err == 0.25);
    CHECK(c.particles == 100);
    CHECK(c.runs == 500);
    CHECK_FALSE(c.xi.has_value());
}

TEST_CASE("errors name the offending field") {
    CHECK(error_of(R"({"kind": "particle_run", "objective": {"name": "ackley"}, "solver": {"dt": -0.1}})")
              .find("solver.dt") != std::string::npos);
    CHECK(error_of(R"({"kind": "particle_run", "objective": {"name": "ackley"}, "solver": {"dtt": 0.1}})")
              .find("solver.dtt") != std::string::npos);
    CHECK(error_of(R"({"kind": "particle_run", "objective": {"name": "ackley"}, "extra": 1})").find("extra") !=
          std::string::npos);
    CHECK(error_of(R"({"kind": "particle_run", "objective": {"name": "sphere"}})").find("objective.name") !=
          std::string::npos);
    CHECK(error_of(R"({"objective": {"name": "ackley"}})").find("kind") != std::string::npos);
    CHECK(error_of(R"({"kind": "particle_run"})").find("objective") != std::string::npos);
    CHECK(error_of(R"({"kind": "particle_run", "objective": {"name": "ackley"}, "solver": {"m": 1.5}})")
              .find("solver.m") != std::string::npos);
    CHECK(error_of(R"({"kind": "particle_run", "objective": {"name": "ackley", "dim": "two"}})")
              .find("objective.dim") != std::string::npos);
    CHECK(error_of(R"({"kind": "particle_sweep", "objective": {"name": "ackley"}, "sweep": {"xi": [0.5, 2]}})")
              .find("sweep.xi[1]") != std::string::npos);
    CHECK(error_of("{not json").size() > 0);
}

TEST_CASE("serialization round trips") {
    const auto c = parse_config(R"({
        "kind": "meanfield_run",
        "objective": {"name": "rastrigin", "dim": 1},
        "solver": {"m": 0.5, "lambda1": 1, "sigma1": 0.5773502691896258, "lambda2": 0, "sigma2": 0,
                   "alpha": 30, "beta": 30, "nu": 0.5,
                   "init": {"velocity": "gaussian", "v_scale": 0.5}},
        "grid": {"pde": "mf_pso_memory", "x": {"lower": -3, "upper": 3, "cells": 90},
                 "v": {"lower": -4, "upper": 4, "cells": 120}, "dt": 0.001, "t_end": 6,
                 "snapshots": [0, 3, 6], "splitting": "strang", "theta": 0.5, "v_flux": "fitted"}
    })");
    CHECK(c.grid.grid.y == c.grid.grid.x);
    CHECK(c.grid.grid.splitting == pde::Splitting::Strang);
    const auto again = parse_config(serialize_config(c));
    CHECK(again == c);
    CHECK(serialize_config(again) == serialize_config(c));
}

TEST_CASE("lambda and sigma aliases, and xi coupling") {
    const auto a = parse_config(R"({"kind": "particle_run", "objective": {"name": "ackley"},
                                    "solver": {"lambda": 2, "sigma": 3}})");
    CHECK(a.solver.lambda2 == 2.0);
    CHECK(a.solver.sigma2 == 3.0);
    CHECK(error_of(R"({"kind": "particle_run", "objective": {"name": "ackley"},
                       "solver": {"lambda": 2, "lambda2": 3}})")
              .find("solver.lambda") != std::string::npos);

    const auto x = parse_config(R"({"kind": "particle_run", "objective": {"name": "ackley"},
                                    "solver": {"xi": 0.25, "lambda2": 1, "sigma2": 8}})");
    REQUIRE(x.xi.has_value());
    CHECK(x.solver.lambda1 == 0.25);
    CHECK(x.solver.sigma1 == 2.0);
    CHECK(parse_config(serialize_config(x)) == x);
    CHECK(error_of(R"({"kind": "particle_run", "objective": {"name": "ackley"},
                       "solver": {"xi": 0.5, "lambda1": 1}})")
              .find("solver.xi") != std::string::npos);
}

TEST_CASE("objective aliases and mean-field checks") {
    CHECK(parse_config(R"({"kind": "particle_run", "objective": {"name": "griewalk"}})").objective.kind ==
          ObjectiveKind::Griewank);
    // Mean-field runs need one dimension and a velocity law for the kinetic kinds.
    CHECK(parse_config(R"({"kind": "meanfield_run", "objective": {"name": "ackley"}, "grid": {"pde": "mf_cbo"}})")
              .objective.dim == 1);
    CHECK(error_of(R"({"kind": "meanfield_run", "objective": {"name": "ackley", "dim": 2}})").find("objective.dim") !=
          std::string::npos);
    CHECK(error_of(R"({"kind": "meanfield_run", "objective": {"name": "ackley"}})").find("solver.m") !=
          std::string::npos);
    const auto kinetic = parse_config(R"({"kind": "meanfield_run", "objective": {"name": "ackley"}, "solver": {"m": 0.5}})");
    CHECK(kinetic.init.velocity == InitialLaw::Velocity::Gaussian);
    CHECK(kinetic.init.v_scale == 0.5);
    CHECK(error_of(R"({"kind": "meanfield_run", "objective": {"name": "ackley"},
                       "solver": {"m": 0.5, "init": {"velocity": "zero"}}})")
              .find("solver.init.velocity") != std::string::npos);
    CHECK(error_of(R"({"kind": "meanfield_run", "objective": {"name": "ackley", "dim": 1},
                       "grid": {"pde": "mf_cbo", "t_end": 1, "snapshots": [2]}})")
              .find("grid.snapshots[0]") != std::string::npos);
    CHECK(error_of(R"({"kind": "meanfield_run", "objective": {"name": "ackley", "dim": 1},
                       "grid": {"pde": "mf_pso_memory", "x": {"lower": -3, "upper": 3, "cells": 40},
                                "y": {"lower": -3, "upper": 3, "cells": 30}},
                       "solver": {"init": {"velocity": "gaussian"}}})")
              .find("grid.y") != std::string::npos);
    const auto cbo = parse_config(R"({"kind": "meanfield_run", "objective": {"name": "ackley", "dim": 1},
                                      "grid": {"pde": "mf_cbo"}})");
    CHECK(cbo.grid.pde == pde::Kind::MfCbo);
    const auto box = parse_config(R"({"kind": "particle_run", "objective": {"name": "ackley", "box": [-3, 3]}})");
    REQUIRE(box.objective.box.has_value());
    CHECK(build_objective(box.objective).box.upper == 3.0);
    CHECK(build_objective(parse_config(R"({"kind": "particle_run", "objective": {"name": "schwefel"}})").objective)
              .box.upper == standard_box(ObjectiveKind::Schwefel).upper);
}

TEST_CASE("kind names") {
    for (auto k : {ExperimentKind::ParticleRun, ExperimentKind::ParticleSweep, ExperimentKind::MeanfieldRun,
                   ExperimentKind::InertiaComparison, ExperimentKind::MeanfieldVsParticle})
        CHECK(parse_kind(kind_name(k)) == k);
    CHECK_THROWS_AS(parse_kind("benchmark"), std::invalid_argument);
}
