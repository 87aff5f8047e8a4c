#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "nonlocal/parallel.hpp"

namespace {

std::size_t resolve_jobs(std::size_t flag) {
  if (const char* env = std::getenv("NONLOCAL_SPECTRA_THREADS")) {
    try {
      return static_cast<std::size_t>(std::stoul(env));
    } catch (const std::exception&) {
      std::cerr << "ignoring NONLOCAL_SPECTRA_THREADS='" << env << "'\n";
    }
  }
  return flag;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace nonlocal::cli;
  CLI::App app{"Spectral analysis of non-local Schroedinger operators"};
  app.set_version_flag("--version", NONLOCAL_VERSION);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::size_t jobs = 0;
  bool verbose = false;

  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " pipeline");
    sub->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--jobs", jobs, "worker cap (0: hardware concurrency)");
    sub->add_flag("--verbose", verbose, "progress on stderr");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  RunContext ctx;
  try {
    ctx.config = load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  }
  ctx.out_dir = out_dir;
  ctx.verbose = verbose;
  ctx.jobs = resolve_jobs(jobs);
  if (ctx.jobs > 0) nonlocal::set_default_jobs(ctx.jobs);

  const std::string command = app.get_subcommands().front()->get_name();
  ctx.log(command + " config_hash=" + ctx.config.hash);
  return run_command(command, ctx);
}
