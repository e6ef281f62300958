#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "zsync/core.hpp"

namespace zsync::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitConvergence = 3;
inline constexpr int kExitIo = 4;

inline constexpr const char* kVersion = "zsync 1.0.0";

/// Thrown for bad command lines; exits with kExitUsage.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Runs one command line, program name excluded. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct GeneratedInstance {
    SignedGraph graph;
    GroundTruth truth;
    std::optional<Partition> partition;
    Json parameters;  // every model parameter, defaults filled in
};

/// Models: erdos-renyi (n, alpha, eta), regular-bad (n, d),
/// preferential-attachment (n, m, d), congress-model-1 (C, S, gamma, alpha,
/// eta), benchmark-2 (n, k, alpha, eta). Unknown keys are rejected.
GeneratedInstance generate_model(const std::string& model, const Json& params, std::uint64_t seed);

struct ExperimentOptions {
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    std::optional<std::size_t> n, h, k, trials, seeds, congresses;
    std::optional<double> alpha, eta, gamma, channel_p;
    bool raw = false;
    std::string method = "eig";  // heatmap-fig: eig or laplacian
    std::string bad = "both";    // mps-fig: regular, er or both
    fs::path spec;               // custom
};

const std::vector<std::string>& experiment_presets();

/// Runs a preset, writing its CSV into `out`. Returns the resolved
/// parameters, with the written file names under "outputs".
Json run_experiment(const std::string& preset, const ExperimentOptions& opts, const fs::path& out);

}  // namespace zsync::cli
