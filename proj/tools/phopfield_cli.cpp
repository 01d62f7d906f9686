// Command-line front end: one subcommand per experiment, each writing a run
// directory of CSV files plus metadata.json.
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "phopfield/harness/commands.hpp"
#include "phopfield/harness/config.hpp"

using namespace phopfield::harness;

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  std::optional<std::string> energy_mode;
  std::optional<std::uint64_t> events;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("-c,--config", o.config_path, "JSON run configuration");
  sub->add_option("--seed", o.seed, "master seed (overrides the config)");
  sub->add_option("--out", o.out, "output root directory");
  sub->add_option("--threads", o.threads, "worker threads (0 = hardware concurrency)");
  sub->add_option("--energy-mode", o.energy_mode, "exact | sampled")->check(CLI::IsMember({"exact", "sampled"}));
  sub->add_option("--events", o.events, "detection events per sampled energy estimate");
}

RunConfig resolve(const Overrides& o, const std::string& command) {
  RunConfig config;
  if (!o.config_path.empty()) {
    config = load_config(o.config_path);
  } else if (command == "hopfield") {
    config.scattering.kind = "hadamard";
    config.scattering.rows = default_hadamard_rows(config.mode_count);
  }
  if (o.seed) config.seed = *o.seed;
  if (o.out) config.out = *o.out;
  if (o.threads) config.threads = *o.threads;
  if (o.energy_mode) config.energy_mode = *o.energy_mode;
  if (o.events) config.events = *o.events;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photonic generalized Hopfield simulator"};
  app.require_subcommand(1);

  Overrides overrides;
  struct Entry {
    const char* name;
    const char* help;
    RunOutcome (*run)(const RunConfig&, std::ostream&);
  };
  const Entry entries[] = {
      {"distribution", "output distribution P(k | sigma), exact and sampled", cmd_distribution},
      {"mc", "Metropolis trajectories, energies and self-overlap autocorrelation", cmd_mc},
      {"phase-diagram", "disorder-averaged sweep over (alpha, T)", cmd_phase_diagram},
      {"hopfield", "Hadamard-row emulation of the standard Hopfield model", cmd_hopfield},
  };
  std::vector<std::pair<CLI::App*, const Entry*>> subs;
  for (const auto& e : entries) {
    auto* sub = app.add_subcommand(e.name, e.help);
    add_common(sub, overrides);
    subs.emplace_back(sub, &e);
  }

  ValidateOptions validate;
  auto* val = app.add_subcommand("validate", "check the simulator against independent oracles");
  val->add_option("--seed", validate.seed, "seed for the random test instances");
  val->add_flag("--corrupt-multiplicity", validate.corrupt_multiplicity,
                "use the occupation-product multiplicity (expected to fail)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (val->parsed()) return cmd_validate(validate, std::cout);
    for (const auto& [sub, entry] : subs) {
      if (!sub->parsed()) continue;
      const auto outcome = entry->run(resolve(overrides, entry->name), std::cout);
      std::cout << outcome.directory << '\n';
      return outcome.exit_code;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
