#include <iostream>

#include <CLI11.hpp>

#include "wtpuf/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Wiretap polar-code key generation for an enclosure PUF"};
  app.require_subcommand(1);
  app.fallthrough();  // flags may follow the subcommand

  std::optional<std::filesystem::path> config;
  wtpuf::cli::Overrides o;
  std::uint64_t seed = 0, trials = 0;
  int q = 0;
  bool helper = true;
  std::string out, code;

  auto* opt_config = app.add_option("--config", config, "experiment config (JSON)");
  auto* opt_seed = app.add_option("--seed", seed, "master seed");
  auto* opt_trials = app.add_option("--trials", trials, "trial count of the chosen command");
  auto* opt_out = app.add_option("--out", out, "output directory");
  auto* opt_q = app.add_option("--q", q, "field size");
  auto* opt_helper = app.add_option("--with-helper-data", helper, "use analog helper data W' (true/false)");
  auto* opt_code = app.add_option("--code", code, "code JSON for fer/demo (default <out>/code.json)");
  app.add_option("--scenario", o.scenario, "demo scenario: benign, hot, attacked or all")
      ->check(CLI::IsMember({"benign", "hot", "attacked", "all"}));
  for (auto* opt : {opt_config, opt_seed, opt_trials, opt_out, opt_q, opt_helper, opt_code})
    opt->configurable(false);

  const char* commands[][2] = {
      {"generate", "simulate devices and write a CSV dataset"},
      {"estimate", "estimate legitimate and attacker channel models"},
      {"construct", "Monte-Carlo code construction over the d sweep"},
      {"fer", "frame error rate of SC and SCL decoding"},
      {"demo", "enroll and reproduce under benign, hot and attacked conditions"},
      {"sweep-alpha", "construction quality for every kernel element"},
  };
  for (auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : wtpuf::cli::kConfigError;
  }

  if (opt_seed->count()) o.seed = seed;
  if (opt_trials->count()) o.trials = trials;
  if (opt_out->count()) o.out = out;
  if (opt_q->count()) o.q = q;
  if (opt_helper->count()) o.with_helper_data = helper;
  if (opt_code->count()) o.code = code;

  const std::string command = app.get_subcommands().front()->get_name();
  return wtpuf::cli::run_command(command, config, o, std::cout, std::cerr);
}
