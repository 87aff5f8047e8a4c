#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "config.hpp"
#include "nonlocal/error.hpp"

namespace nonlocal::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitTolerance = 2,
  kExitPrecondition = 3,
};

int exit_code_for(ErrorKind kind);

struct RunContext {
  ExperimentConfig config;
  std::filesystem::path out_dir = ".";
  bool verbose = false;
  std::size_t jobs = 0;

  void log(const std::string& message) const;
};

int cmd_spectrum(const RunContext& ctx);
int cmd_transience(const RunContext& ctx);
int cmd_eigen(const RunContext& ctx);
int cmd_asym(const RunContext& ctx);
int cmd_front(const RunContext& ctx);
int cmd_stabilize(const RunContext& ctx);
int cmd_oracle(const RunContext& ctx);

const std::vector<std::string>& command_names();

// Runs a command by name and maps library errors to exit codes; diagnostics
// go to stderr.
int run_command(const std::string& name, const RunContext& ctx);

}  // namespace nonlocal::cli
