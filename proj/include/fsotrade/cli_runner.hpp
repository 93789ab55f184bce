#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fsotrade/scenario.hpp"

namespace fsotrade::cli {

enum class Command {
    DemandCurve,
    SupplyCurve,
    Equilibrium,
    Sweep,
    Asymptote,
    Profit,
    Availability,
    FixtureGen,
};

std::string_view to_string(Command command);
std::optional<Command> parse_command(std::string_view text);
std::vector<std::string> command_names();

struct RunConfig {
    std::optional<Command> command;
    std::optional<std::filesystem::path> scenario;
    std::optional<std::filesystem::path> out;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> overrides;  // section.key=value
    bool dump_config = false;
};

/// Scenario after loading the file (or defaults), overrides and --seed.
Scenario effective_scenario(const RunConfig& config);

/// Runs one experiment and renders its CSV.
std::string render(Command command, const Scenario& scenario);

/// Full CLI semantics: writes the CSV (or the dumped scenario) to
/// config.out, or to `out` when no path is given. Nothing is written to the
/// output path unless the run succeeds. Returns the process exit status.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv with CLI11 and calls run(). Exit codes: 0 ok, 1 runtime
/// error, 2 usage error.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace fsotrade::cli
