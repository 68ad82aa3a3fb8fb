// hypwave: radial cubic wave equation on H^3, experiments and checks.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hypwave/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Spectral simulator and verification lab for the radial defocusing cubic wave equation on H^3"};
  app.require_subcommand(1);

  hypwave::CommandOptions opt;
  opt.out = hypwave::default_output_root();
  std::string config, out = opt.out.string(), family;
  std::uint64_t seed = 0;
  double param = 0.0;

  const std::pair<const char*, const char*> commands[] = {
      {"solve", "evolve initial data and record energy and Morawetz potentials"},
      {"truncation", "run the Fourier truncation experiment (one run per s)"},
      {"weights", "tabulate a Morawetz weight and check its conditions"},
      {"inequalities", "randomized inequality suite"},
      {"strichartz", "probe one Strichartz triple across horizons"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "configuration file (key = value)")->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory (default $HYPWAVE_OUT or ./hypwave_out)");
    sub->add_option("--jobs", opt.jobs, "parallel workers")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "seed, overriding the configuration");
    if (std::string(name) == "weights") {
      sub->add_option("--family", family, "A1, A2, A3 or A4");
      sub->add_option("--param", param, "exponent for A3 and A4");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hypwave::kExitConfig;
  }

  auto* sub = app.get_subcommands().front();
  if (!config.empty()) opt.config = config;
  opt.out = out;
  if (sub->count("--seed")) opt.seed = seed;
  if (sub->get_name() == "weights") {
    if (sub->count("--family")) opt.family = family;
    if (sub->count("--param")) opt.param = param;
  }
  return hypwave::run_command(sub->get_name(), opt, std::cout, std::cerr);
}
