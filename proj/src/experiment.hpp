#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "config.hpp"

namespace swarmkit {

inline constexpr const char* kVersion = "1.0.0";

struct ExperimentOverrides {
    std::optional<std::filesystem::path> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
};

// Runs the experiment and writes its artifacts plus manifest.json into the
// output directory. Returns the manifest text. Throws on any error.
std::string run_experiment(config::ExperimentConfig config, const ExperimentOverrides& overrides = {});

}  // namespace swarmkit
