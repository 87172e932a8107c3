#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "unilab/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"unilab: non-uniformity analysis of binary composites"};
  app.require_subcommand(1);

  std::string config, out, format = "json";
  auto* run = app.add_subcommand("run", "Run the tasks of a config and write a report");
  run->add_option("--config", config, "Analysis config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "Report path")->required();
  run->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  std::string vconfig;
  auto* validate = app.add_subcommand("validate", "Check a config without running it");
  validate->add_option("--config", vconfig, "Analysis config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : unilab::cli::kExitInvalid;
  }

  if (*run) {
    const auto fmt = format == "csv" ? unilab::cli::Format::Csv : unilab::cli::Format::Json;
    return unilab::cli::run(config, out, fmt, std::cerr);
  }
  return unilab::cli::validate_command(vconfig, std::cout);
}
