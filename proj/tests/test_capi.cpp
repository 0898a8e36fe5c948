#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "swarmkit/swarmkit.h"

namespace fs = std::filesystem;

TEST_CASE("version and error reporting") {
    CHECK(std::string(swarmkit_version()) == "1.0.0");
    swarmkit_objective* obj = nullptr;
    CHECK(swarmkit_objective_create("sphere", 2, 0, 0, 0, &obj) == SWARMKIT_INVALID_ARGUMENT);
    CHECK(obj == nullptr);
    CHECK(std::string(swarmkit_last_error()).size() > 0);
    CHECK(swarmkit_objective_create("ackley", 2, 0, 0, 0, nullptr) == SWARMKIT_INVALID_ARGUMENT);
}

TEST_CASE("objective handles") {
    swarmkit_objective* obj = nullptr;
    REQUIRE(swarmkit_objective_create("rastrigin", 1, 0, 0, 0, &obj) == SWARMKIT_OK);
    double out = -1.0;
    const double x = 1.0;
    CHECK(swarmkit_objective_evaluate(obj, &x, 1, &out) == SWARMKIT_OK);
    CHECK(out == doctest::Approx(1.0).epsilon(1e-12));
    const double xy[2] = {0.0, 0.0};
    CHECK(swarmkit_objective_evaluate(obj, xy, 2, &out) == SWARMKIT_DIMENSION);
    CHECK(swarmkit_objective_evaluate(nullptr, &x, 1, &out) == SWARMKIT_INVALID_ARGUMENT);
    swarmkit_objective_destroy(obj);
    swarmkit_objective_destroy(nullptr);
}

TEST_CASE("consensus and memory switch") {
    const double pts[4] = {0.0, 0.0, 2.0, 4.0};
    const double costs[2] = {1.0, 1.0};
    double out[2] = {0, 0};
    REQUIRE(swarmkit_weighted_consensus(pts, 2, 2, costs, 10.0, out) == SWARMKIT_OK);
    CHECK(out[0] == 1.0);
    CHECK(out[1] == 2.0);
    const double bad[2] = {1.0, NAN};
    CHECK(swarmkit_weighted_consensus(pts, 2, 2, bad, 10.0, out) == SWARMKIT_INVALID_ARGUMENT);
    CHECK(swarmkit_memory_switch(0.0, 1.0, 3e3) == 2.0);
    CHECK(swarmkit_memory_switch(1.0, 1.0, 3e3) == 1.0);
}

TEST_CASE("config normalization") {
    char* text = nullptr;
    REQUIRE(swarmkit_config_normalize(R"({"kind": "particle_run", "objective": {"name": "ackley"}})", &text) ==
            SWARMKIT_OK);
    CHECK(std::string(text).find("\"n_stall\": 250") != std::string::npos);
    swarmkit_string_free(text);
    text = nullptr;
    CHECK(swarmkit_config_normalize(R"({"kind": "particle_run"})", &text) == SWARMKIT_CONFIG);
    CHECK(text == nullptr);
    CHECK(std::string(swarmkit_last_error()).find("objective") != std::string::npos);
}

TEST_CASE("experiment run and density handles") {
    const fs::path dir = fs::temp_directory_path() / "swarmkit_test_capi";
    fs::remove_all(dir);
    char* manifest = nullptr;
    const char* cfg = R"({"kind": "meanfield_run", "objective": {"name": "ackley"},
                          "grid": {"pde": "mf_cbo", "x": {"lower": -3, "upper": 3, "cells": 24},
                                   "dt": 0.01, "t_end": 0.1}})";
    REQUIRE(swarmkit_experiment_run(cfg, dir.string().c_str(), 7, 1, 1, &manifest) == SWARMKIT_OK);
    CHECK(std::string(manifest).find("\"seed\": 7") != std::string::npos);
    swarmkit_string_free(manifest);

    swarmkit_density* d = nullptr;
    REQUIRE(swarmkit_density_load((dir / "density_t0.100.bin").string().c_str(), &d) == SWARMKIT_OK);
    double mass = 0.0, t = 0.0;
    std::size_t n = 0;
    CHECK(swarmkit_density_mass(d, &mass) == SWARMKIT_OK);
    CHECK(swarmkit_density_time(d, &t) == SWARMKIT_OK);
    CHECK(swarmkit_density_size(d, &n) == SWARMKIT_OK);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(t == doctest::Approx(0.1));
    CHECK(n == 24);
    CHECK(swarmkit_density_write_columns(d, (dir / "cols.dat").string().c_str()) == SWARMKIT_OK);
    CHECK(fs::file_size(dir / "cols.dat") > 0);
    swarmkit_density_destroy(d);

    CHECK(swarmkit_density_load((dir / "nope.bin").string().c_str(), &d) == SWARMKIT_IO);
    CHECK(swarmkit_experiment_run("{", nullptr, 0, 0, 0, nullptr) == SWARMKIT_CONFIG);
}
