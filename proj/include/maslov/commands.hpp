#pragma once

#include <exception>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "maslov/config.hpp"
#include "maslov/morse.hpp"
#include "maslov/problem.hpp"

namespace maslov {

/// Exit codes of the command line tool.
enum ExitCode : int { Ok = 0, Failure = 1, Degenerate = 2 };

struct CommandOptions {
  std::optional<std::filesystem::path> outDir;
  std::ostream* out = nullptr;  // defaults to std::cout
};

std::string version();

nlohmann::json crossings_to_json(const std::vector<CrossingEvent>& events);

/// MorseReport fields plus "settings" and "version".
nlohmann::json report_to_json(const MorseReport& r, const Problem& p);

/// {"error": name, "message": text} with offset and expected tokens for syntax errors.
nlohmann::json error_to_json(const std::exception& e);

/// Writes to a temporary sibling and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Theorem report with the oracle count; prints the JSON and writes report.json under outDir.
int run_report(const Problem& p, const CommandOptions& options = {});

/// curves.csv: s,lambda1..lambdak,convention (eigenvalues of H_s).
/// phase_gap.csv: s,lambda,phase_gap over [s0, 1] x [lambdaMin, 0].
int run_curves(const Problem& p, const CurveGrid& grid, const CommandOptions& options = {});

/// Prints a pass/fail table; Ok iff every check passes.
int run_check(const Problem& p, const CommandOptions& options = {});

}  // namespace maslov
