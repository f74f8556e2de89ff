#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "fdwifi/report.hpp"
#include "fdwifi/scenario.hpp"

namespace fdwifi {

enum class Command { Run, SweepCancellation, SweepPacketSize, SweepNodes, Theory, Rates, CancelCdf };

std::optional<Command> parse_command(std::string_view name);
std::string_view command_name(Command c);

// Grid points; each point gets its own seed derived from the base seed.
std::vector<ScenarioConfig> nodes_grid(const ScenarioConfig& base);
std::vector<ScenarioConfig> packet_size_grid(const ScenarioConfig& base);
std::vector<ScenarioConfig> cancellation_grid(const ScenarioConfig& base);

// Runs independent scenarios on up to `threads` workers (0: all cores);
// results come back in input order.
std::vector<RunResult> run_batch(const std::vector<ScenarioConfig>& cfgs, int threads = 0);

// Report body for a command.
std::string command_output(Command c, const ScenarioConfig& cfg, Format format, int threads = 0);

struct CommandOptions {
  Format format = Format::Csv;
  std::string out_path;  // empty: write to `out`
  int threads = 0;
};

// Writes the report (and, with an output path, a `<path>.config.txt` file
// holding the effective config). Returns the process exit status.
int run_command(Command c, const ScenarioConfig& cfg, const CommandOptions& opt, std::ostream& out,
                std::ostream& err);

}  // namespace fdwifi
