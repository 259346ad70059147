// Subcommand execution: runs a protocol from a RunConfig and writes CSV
// tables plus a run.json manifest.
#pragma once

#include "nvfq/config.hpp"
#include "nvfq/protocols.hpp"

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace nvfq {

struct RunOptions {
  std::string out_dir = ".";
  int workers = 1;
};

struct RunOutcome {
  nlohmann::ordered_json manifest;
  std::vector<std::string> files;  ///< relative to out_dir, run.json last
};

const std::vector<std::string>& subcommands();
const std::vector<std::string>& figure_names();

/// Runs `subcommand` (with `figure` naming a registry entry for "figure").
/// Propagates UnknownKeyError, IntegrationError and std::invalid_argument.
RunOutcome run(std::string_view subcommand, std::string_view figure, const RunConfig& config,
               const RunOptions& options = {});

/// The reports a subcommand produces, without touching the filesystem.
std::vector<ProtocolReport> execute(std::string_view subcommand, std::string_view figure,
                                    const RunConfig& config, int workers = 1);

std::string to_csv(const DataTable& table);

}  // namespace nvfq
