#pragma once

#include <map>
#include <string>
#include <vector>

#include "linstab/epset.hpp"

namespace linstab {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitInconclusive = 2, kExitUsage = 3 };

struct ExperimentConfig {
  std::string command;  // iterate, residue, decompose, dplus, verify-thm61, construct, sweep
  std::string set_expr;
  std::string ops_expr;
  std::map<std::string, std::string> params;  // N, L, c, g, a, b, delta, max_k, seed, kind, ...
  std::string format = "json";                // json, csv or text
  unsigned threads = 1;
};

struct RunResult {
  int exit_code = kExitPass;
  std::string output;  // rendered report, newline-terminated
};

const std::vector<std::string>& command_names();

/// Limits from LINSTAB_WINDOW_CAP / LINSTAB_PERIOD_CAP over the built-in defaults.
Limits limits_from_environment();

/// Runs one experiment. Usage problems (bad expressions, missing or invalid parameters)
/// are reported in the output with exit code 3 rather than thrown.
RunResult run(const ExperimentConfig& config, const Limits& limits = limits_from_environment());

}  // namespace linstab
