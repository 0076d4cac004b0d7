#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wtpuf/construct.hpp"
#include "wtpuf/pufsim.hpp"
#include "wtpuf/quantize.hpp"

namespace wtpuf::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kTamperFailure = 3, kIoError = 4 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrialCounts {
  std::uint64_t devices = 1000;
  std::uint64_t estimate = 100000;
  std::uint64_t construct = 10000;
  std::uint64_t fer = 100000;
  std::uint64_t demo = 100;
};

/// Everything one experiment run depends on besides the master seed.
struct ExperimentConfig {
  int q = 8;
  std::vector<int> sweep_q;  ///< construct: q values (defaults to {q})
  QuantizerScheme scheme = QuantizerScheme::equiprobable;
  double sigma_puf = 2241.0;
  double sigma_noise = 129.0;
  TemperatureModel temperature;
  std::pair<double, double> legit_temperature_range{5.0, 35.0};
  double fer_temperature_c = 20.0;
  double hot_temperature_c = 30.0;
  AttackConfig attack;
  bool randomize_attack_groups = true;
  std::optional<Symbol> alpha;  ///< unset: the element x
  std::vector<double> d_sweep{0.05, 0.01, 0.005, 0.001, 0.0005, 0.0001, 1e-5, 1e-6};
  double operating_d = 1e-5;
  double random_entropy_threshold = 0.1;
  bool with_helper_data = true;
  std::vector<bool> helper_modes{true, false};
  DecoderConfig decoder{DecoderKind::scl, 8, std::nullopt, true};
  TrialCounts trials;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = "out";
  unsigned threads = 0;  ///< 0: hardware concurrency

  /// Throws ConfigError on inconsistent values.
  void validate() const;

  EnvironmentConfig legit_environment() const;
  EnvironmentConfig attacker_environment() const;
  EnvironmentConfig fixed_environment(double temperature_c) const;
  Symbol kernel_alpha(int field_order) const;
  unsigned worker_threads() const;
};

/// Parses a JSON config document; unknown keys are rejected.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string dump_config(const ExperimentConfig& cfg);

/// Per-invocation overrides taken from command-line flags.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<std::filesystem::path> out;
  std::optional<int> q;
  std::optional<bool> with_helper_data;
  std::optional<std::filesystem::path> code;
  std::string scenario = "all";
};

int cmd_generate(const ExperimentConfig& cfg, const Overrides& o, std::ostream& log);
int cmd_estimate(const ExperimentConfig& cfg, const Overrides& o, std::ostream& log);
int cmd_construct(const ExperimentConfig& cfg, const Overrides& o, std::ostream& log);
int cmd_fer(const ExperimentConfig& cfg, const Overrides& o, std::ostream& log);
int cmd_demo(const ExperimentConfig& cfg, const Overrides& o, std::ostream& log);
int cmd_sweep_alpha(const ExperimentConfig& cfg, const Overrides& o, std::ostream& log);

/// Dispatches `command` and maps failures to exit codes (messages go to `err`).
int run_command(const std::string& command, const std::optional<std::filesystem::path>& config,
                const Overrides& overrides, std::ostream& log, std::ostream& err);

}  // namespace wtpuf::cli
