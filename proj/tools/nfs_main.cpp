// nfs <command> --config <path> [--out <dir>] [--seed <u64>]

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "nfs/commands.hpp"
#include "nfs/config.hpp"
#include "nfs/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral contraction solver for the stationary non-Fredholm integro-differential equation"};
  std::string command;
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;

  const auto& names = nfs::command_names();
  app.add_option("command", command, "Subcommand")->required()->check(CLI::IsMember(names));
  app.add_option("--config", config_path, "Run configuration file");
  app.add_option("--out", out_dir, "Output directory (overrides run.output_dir)");
  app.add_option("--seed", seed, "Random seed (overrides run.seed)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (command == "selfcheck") return nfs::run_selfcheck(std::cout);

  if (config_path.empty()) {
    std::cerr << "error: --config is required for '" << command << "'\n";
    return 2;
  }
  nfs::RunConfig cfg;
  try {
    cfg = nfs::load_config(config_path);
  } catch (const nfs::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return nfs::exit_code_for(e.kind());
  }
  if (out_dir) cfg.output_dir = *out_dir;
  if (seed) cfg.seed = *seed;
  return nfs::run_command(command, cfg, std::cout, std::cerr);
}
