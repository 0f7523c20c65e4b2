#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nfs/bounds.hpp"
#include "nfs/config.hpp"

namespace nfs {

/// bounds, solve-linear, solve, contraction, continuity, sequences, selfcheck.
const std::vector<std::string>& command_names();

/// Runs one subcommand, writing artifacts into cfg.output_dir. Returns the
/// process exit code: 0 ok, 1 a measured check failed its bound, 2 config,
/// 3 assumption violation, 4 non-convergence or divergence.
int run_command(const std::string& command, const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Runs the built-in example suite; prints one line per check. Returns 0 iff
/// every check passes, 1 otherwise.
int run_selfcheck(std::ostream& out);

/// `key = value` lines for every snapshot field.
std::string format_bounds(const BoundsSnapshot& snapshot);

}  // namespace nfs
