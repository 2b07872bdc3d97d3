#pragma once

#include <optional>
#include <string>

#include "revealnet/config.hpp"

namespace revealnet {

// process exit codes shared by the CLI and its tests
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitTrace = 2;
inline constexpr int kExitInternal = 3;

struct CliOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
};

/// Full experiment: ingest or synthesize, simulate the WAN, run attribution
/// over the configured grid, and write scores.csv, comparisons.csv,
/// storage.csv, bandwidth.csv and manifest.json into the output directory.
int cmd_run(const std::string& config_path, const CliOverrides& overrides);

/// Writes the seeded synthetic trace as <out>/synthetic_trace.csv.
int cmd_gen(const std::string& config_path, const CliOverrides& overrides);

/// Closed-form storage and bandwidth tables, no simulation. The config is
/// optional; defaults reproduce the published 19+1 deployment numbers.
int cmd_tables(const std::optional<std::string>& config_path, const CliOverrides& overrides);

} // namespace revealnet
