#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "finsler4/linalg.hpp"

namespace finsler4::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  ///< selftest disagreement
  kExitSpecError = 2,
  kExitEvaluationError = 3,
  kExitFrameError = 4,
};

struct RunConfig {
  std::string command;  ///< classify, conformal, frame or selftest
  std::string spec_path;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::string output;  ///< empty: write to `out`
  std::optional<Vec4d> x;
  std::optional<Vec4d> y;
};

/// Runs one command. Reports go to `out` (or cfg.output), diagnostics to `err`.
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace finsler4::cli
