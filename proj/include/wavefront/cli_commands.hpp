#pragma once

#include <string>

#include "wavefront/config.hpp"

namespace wavefront {

/// Exit codes shared by all commands: 0 success, 1 configuration error,
/// 2 numeric failure, 3 solver did not converge.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumeric = 2;
inline constexpr int kExitNotConverged = 3;

/// Scalar analysis model behind any config (epidemic reduces to the induced
/// kernel with g/alpha; population analyses its mature equation).
WaveModel analysis_model(const RunConfig& cfg);

int run_speeds(const RunConfig& cfg, const std::string& out_dir);
int run_solve(const RunConfig& cfg, const std::string& out_dir);
int run_verify(const RunConfig& cfg, const std::string& out_dir);
int run_sweep(const RunConfig& cfg, const std::string& out_dir);

/// Dispatch by name; maps ConfigError/Error to the exit-code contract.
int run_command(const std::string& command, const std::string& config_path,
                const std::string& out_dir, std::optional<std::uint64_t> seed_override);

}  // namespace wavefront
