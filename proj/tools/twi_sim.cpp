// twi_sim: run, sweep and validate the non-blocking multimodal inference
// simulator.
//
//   twi_sim run      --config cfg.json --out results.csv
//   twi_sim sweep    --config cfg.json --snr-a -5,0,5 --seeds 1,2 --out sweep.csv [--jobs N]
//   twi_sim validate --config cfg.json
//
// TWI_SIM_SEED overrides run.seed. Exit codes: 0 success, 1 I/O, 2 validation.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "twisim/cli.hpp"
#include "twisim/errors.hpp"

int main(int argc, char** argv) {
  namespace cli = twisim::cli;

  CLI::App app{"Communication-delay-aware non-blocking multimodal inference simulator"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  std::string snr_audio;
  std::string seeds;
  int jobs = 1;

  auto* run = app.add_subcommand("run", "Simulate one configuration and write the CSV");
  run->add_option("--config", config, "JSON configuration")->required();
  run->add_option("--out", out, "Output CSV path")->required();

  auto* sweep = app.add_subcommand("sweep", "Sweep the audio SNR over several seeds");
  sweep->add_option("--config", config, "JSON configuration")->required();
  sweep->add_option("--out", out, "Output CSV path")->required();
  sweep->add_option("--snr-a", snr_audio, "Audio SNR values in dB, comma separated")->required();
  sweep->add_option("--seeds", seeds, "Master seeds, comma separated")->required();
  sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* validate = app.add_subcommand("validate", "Check Monte Carlo oracles against closed forms");
  validate->add_option("--config", config, "JSON configuration")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kValidationFailure;
  }

  if (run->parsed()) return cli::cmd_run(config, out, std::cerr);
  if (sweep->parsed()) {
    std::vector<double> snrs;
    std::vector<std::uint64_t> seed_list;
    try {
      snrs = cli::parse_number_list(snr_audio, "--snr-a");
      seed_list = cli::parse_seed_list(seeds, "--seeds");
    } catch (const twisim::ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return cli::kValidationFailure;
    }
    return cli::cmd_sweep(config, snrs, seed_list, out, jobs, std::cerr);
  }
  return cli::cmd_validate(config, std::cout);
}
