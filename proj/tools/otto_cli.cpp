// otto-sta: datasets for the counterdiabatically driven harmonic Otto engine.

#include <iostream>
#include <optional>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "otto/app.hpp"

int main(int argc, char** argv) {
  using namespace otto::app;

  CLI::App cli{"Quantum Otto engine with counterdiabatic frequency ramps"};
  cli.fallthrough();
  cli.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<std::string> format;
  bool oracle = false;
  int jobs = 0;
  std::optional<double> tol;
  std::optional<int> nodes;

  cli.add_option("--config", config_path, "JSON run config (schema/run_config.schema.json)")
      ->check(CLI::ExistingFile);
  cli.add_option("--out", out_path, "output file; stdout when omitted");
  cli.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cli.add_flag("--oracle", oracle, "add the Fock-vs-Gaussian residual column (cycle)");
  cli.add_option("--jobs", jobs, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
  cli.add_option("--tol", tol, "integrator relative tolerance (abs = tol / 100)");
  cli.add_option("--nodes", nodes, "Simpson nodes, odd");

  const std::pair<const char*, const char*> subcommands[] = {
      {"qstar", "adiabaticity Q*(t) along a ramp, bare and counterdiabatic"},
      {"cost", "counterdiabatic driving costs versus stroke time"},
      {"cycle", "efficiency and power under the four accountings versus tau"},
      {"empower", "efficiency at maximum power versus beta2/beta1"},
      {"sweep", "grid over frequency ratio, temperature ratio, tau and ramp"},
  };
  for (const auto& [name, about] : subcommands) cli.add_subcommand(name, about);

  try {
    cli.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return cli.exit(e);
  } catch (const CLI::ParseError& e) {
    cli.exit(e);
    return kExitConfig;
  }

  try {
    const Command command = command_from_string(cli.get_subcommands().front()->get_name());
    RunConfig cfg = config_path.empty() ? parse_config(nlohmann::json::object())
                                        : load_config_file(config_path);
    if (format) cfg.format = *format == "json" ? Format::Json : Format::Csv;
    if (oracle) cfg.oracle = true;
    if (tol) {
      cfg.numerics.rel_tol = *tol;
      cfg.numerics.abs_tol = *tol / 100.0;
    }
    if (nodes) cfg.numerics.nodes = *nodes;
    cfg.validate();

    const std::string text = render(run_command(command, cfg, jobs), cfg.format);
    if (out_path.empty())
      std::cout << text;
    else
      write_atomically(out_path, text);
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "otto-sta: error: " << e.what() << '\n';
    return exit_code_for_current_exception();
  }
}
