#pragma once

#include <filesystem>
#include <memory>
#include <ostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <spdlog/logger.h>

#include "fast/harness.hpp"
#include "fast/io.hpp"
#include "fast/solver.hpp"

namespace fast::cli {

enum class Verb { fit, solve, sweep, compare };

struct Command {
  Verb verb = Verb::solve;
  std::filesystem::path scenario;
  std::filesystem::path samples;
  std::optional<std::filesystem::path> out;
  ExportFormat format = ExportFormat::csv;
  SolverConfig solver;
  // fit
  double pi_min = 0.25;
  double rms_ceiling = FitOptions{}.rms_ceiling;
  // sweep
  SweepAxis axis = SweepAxis::distance;
  std::vector<double> values;
  std::vector<Method> methods{Method::fast, Method::prune, Method::quant};
  // compare
  std::vector<double> fidelities{0.80, 0.85};
};

/// Exit statuses.
enum ExitCode : int { ok = 0, usage = 1, config = 2, infeasible = 3, numeric = 4, io = 5 };

/// Bad command line. `help` marks a --help request (not an error).
class UsageError : public std::runtime_error {
 public:
  UsageError(const std::string& msg, bool help = false) : std::runtime_error(msg), help_(help) {}
  bool help() const noexcept { return help_; }

 private:
  bool help_;
};

/// argv[0] is the program name.
Command parse_args(const std::vector<std::string>& argv);

/// Runs a command. Results go to files or `out`; diagnostics go to `log`.
/// Module errors propagate as exceptions.
int dispatch(const Command& cmd, std::ostream& out, spdlog::logger& log);

/// Logger writing to `err` at the level named by FAST_LOG (quiet, info,
/// debug; default info).
std::shared_ptr<spdlog::logger> make_logger(std::ostream& err, const char* fast_log);

/// parse_args + dispatch with error-to-exit-code mapping.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace fast::cli
