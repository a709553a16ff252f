// scenario.hpp — CLI scenario files: strict schema validation, experiment
// dispatch, and deterministic CSV/JSON artifact generation.
//
// Scenario file shape:
//   {
//     "experiment": "orbit" | "overlap-decay" | "marker-scan"
//                 | "measure" | "recover" | "oracle-check",
//     "parameters": { ... experiment-specific, complex numbers as [re, im] },
//     "output": { "path": "out.csv", "format": "csv" | "json" }   (optional)
//   }
// Unknown keys are rejected at every level. Output is byte-stable across
// runs: no timestamps, no locale dependence, doubles printed with 17
// significant digits.

#pragma once

#include "mpdyn/common.hpp"

#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"

namespace mpdyn::cli {

enum class Experiment { orbit, overlap_decay, marker_scan, measure, recover, oracle_check };

enum class Format { csv, json };

struct OutputSpec {
  std::string path;
  std::optional<Format> format;
};

struct ScenarioFile {
  Experiment experiment;
  nlohmann::json parameters;
  std::optional<OutputSpec> output;
};

// exit codes shared by the CLI and its tests
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;  // schema violation / unreadable input
inline constexpr int kExitGuard = 3;  // numerical guard violation

const char* experiment_name(Experiment e);

// Strict parse; throws std::invalid_argument on any schema violation.
ScenarioFile parse_scenario(const nlohmann::json& j);

struct ExperimentResult {
  std::string artifact;  // bytes to write
  int exit_code;         // kExitOk, or kExitGuard for failed oracle residuals
};

// Runs the experiment and renders the artifact in the given format.
// Throws std::invalid_argument (schema-level trouble) or NumericalGuardError.
ExperimentResult run_experiment(const ScenarioFile& scenario, Format format);

// Full command-line entry point ("run" / "verify" subcommands); returns the
// process exit code.
int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mpdyn::cli
