#include "dpcjam/cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

using namespace dpcjam;
using namespace dpcjam::cli;

namespace {

struct Flags {
  std::string config;
  std::map<std::string, std::string> keys;
};

void add_flags(CLI::App* sub, Flags& flags, const std::vector<std::string>& wanted) {
  sub->add_option("--config", flags.config, "key=value config file (flags override it)");
  for (const auto& key : wanted) sub->add_option("--" + key, flags.keys[key]);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian jamming games with non-causal state knowledge"};
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::string> channel = {"P_U", "P_J", "sigma2", "sigmaS2", "n", "base", "seed",
                                            "output"};
  auto with = [&](std::vector<std::string> extra) {
    extra.insert(extra.end(), channel.begin(), channel.end());
    return extra;
  };
  auto* capacity = app.add_subcommand("capacity", "capacity sweep to CSV");
  add_flags(capacity, flags, with({}));
  auto* equilibrium = app.add_subcommand("equilibrium", "saddle search with convergence trace");
  add_flags(equilibrium, flags, with({"game", "tol", "max_rounds", "random_starts", "report"}));
  auto* verify = app.add_subcommand("verify", "claim checks and Monte Carlo validation");
  add_flags(verify, flags, with({"trial_scale"}));
  verify->add_flag_callback("--inject-fault", [&] { flags.keys["inject_fault"] = "true"; },
                            "move the user's alpha off the optimum (negative control)");
  auto* sample = app.add_subcommand("sample", "raw sample dump");
  add_flags(sample, flags, with({"N", "shape"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidConfig;
  }

  try {
    SweepSpec spec;
    if (!flags.config.empty()) apply_config(spec, read_config_file(flags.config));
    KeyValues overrides;
    for (const auto& [key, value] : flags.keys) {
      if (!value.empty()) overrides.emplace_back(key, value);
    }
    apply_config(spec, overrides);
    spec.validate();
    if (capacity->parsed()) return cmd_capacity(spec, std::cout);
    if (equilibrium->parsed()) return cmd_equilibrium(spec, std::cout);
    if (verify->parsed()) return cmd_verify(spec, std::cout);
    return cmd_sample(spec, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
