// Batch driver: logschro_run <config.ini> [--seed N]
//
// Log verbosity comes from LOGSCHRO_VERBOSITY (trace, debug, info, warn,
// error, off); the default is warn.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "logschro/cli/config.hpp"
#include "logschro/cli/run.hpp"

int main(int argc, char** argv)
{
  CLI::App app{"Ground states and critical points of the discrete logarithmic Schroedinger equation"};
  std::string config_path;
  std::optional<std::uint64_t> seed;
  app.add_option("config", config_path, "run configuration (INI)")->required();
  app.add_option("--seed", seed, "override [solver] seed");
  app.set_version_flag("--version", logschro::version);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : logschro::cli::exit_validation;
  }

  auto logger = spdlog::stderr_color_st("logschro");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* v = std::getenv("LOGSCHRO_VERBOSITY"))
    spdlog::set_level(spdlog::level::from_str(v));

  logschro::cli::RunConfig config;
  try {
    config = logschro::cli::load_config(config_path);
  } catch (const logschro::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return logschro::cli::exit_validation;
  }
  if (seed)
    config.solver.seed = *seed;

  const auto outcome = logschro::cli::run(config);
  if (outcome.record.contains("error"))
    std::cerr << "error: " << outcome.record["error"].get<std::string>() << '\n';
  for (const auto& path : outcome.written)
    spdlog::info("wrote {}", path.string());
  std::cout << outcome.record["status"].get<std::string>() << " (exit " << outcome.exit_code << ")\n";
  return outcome.exit_code;
}
