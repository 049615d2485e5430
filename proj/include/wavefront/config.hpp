#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "wavefront/systems.hpp"

namespace wavefront {

enum class ModelType { Scalar, Epidemic, Population };

struct GridSpec {
    std::optional<double> T;
    std::optional<double> h;
};

struct SolverSpec {
    std::optional<double> tol;
    std::optional<int> max_iter;
};

struct CommandSpec {
    std::vector<double> speeds;  // finite, sorted
    std::optional<double> c;
    GridSpec grid;
    SolverSpec solver;
};

/// Parsed configuration document.  Scalar models populate `scalar`;
/// the system types keep their own structs alongside the shared f, g specs.
struct RunConfig {
    ModelType type = ModelType::Scalar;
    nlohmann::json f_spec;
    nlohmann::json g_spec;
    nlohmann::json kernel_spec;    // scalar + population
    nlohmann::json spatial_spec;   // epidemic
    nlohmann::json p_spec;         // epidemic
    double alpha = 0.0;            // epidemic
    double D = 0.0;                // population
    double gamma = 0.0;            // population
    CommandSpec command;
    std::uint64_t seed = 0;

    WaveModel scalar_model() const;        // Scalar type
    EpidemicModel epidemic_model() const;  // Epidemic type
    PopulationModel population_model() const;
    SolverConfig solver_config() const;
};

/// Parse and validate; throws ConfigError with a JSON-path diagnostic.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_file(const std::string& path);

/// Canonical serialized form; parse(to_json(cfg)) == cfg byte-for-byte.
nlohmann::json to_json(const RunConfig& cfg);

// building blocks, exposed for tests
SpatialKernel parse_spatial(const nlohmann::json& j, const std::string& path);
TemporalKernel parse_temporal(const nlohmann::json& j, const std::string& path);
SpatioTemporalKernel parse_kernel(const nlohmann::json& j, const std::string& path);
DelayMeasure parse_measure(const nlohmann::json& j, const std::string& path);
ReactionTerm parse_reaction(const nlohmann::json& j, const std::string& path);
Nonlinearity parse_birth(const nlohmann::json& j, const std::string& path);

}  // namespace wavefront
