#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dkn {

/// Exit statuses of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs `dkn <subcommand> ...` with args excluding the program name.
/// Subcommands: simulate, select, diagnose, ingest-check. Artifacts are
/// written only under --out and only once the command has succeeded.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dkn
