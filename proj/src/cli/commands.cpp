#include <bit>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "wtpuf/cli.hpp"
#include "wtpuf/keygen.hpp"
#include "wtpuf/serialize.hpp"

namespace wtpuf::cli {

namespace {

// sub-streams of the master seed used by the commands
constexpr std::uint64_t kLegitChannel = 101;
constexpr std::uint64_t kAttackerChannel = 102;
constexpr std::uint64_t kFixedChannel = 103;
constexpr std::uint64_t kKmeansSamples = 104;

struct Resolved {
  ExperimentConfig cfg;
  std::uint64_t trials = 0;
};

Resolved resolve(ExperimentConfig cfg, const Overrides& o, std::uint64_t TrialCounts::*field) {
  if (o.seed) cfg.seed = *o.seed;
  if (o.out) cfg.out_dir = *o.out;
  if (o.q) {
    cfg.q = *o.q;
    cfg.sweep_q = {*o.q};
  }
  if (o.with_helper_data) {
    cfg.with_helper_data = *o.with_helper_data;
    cfg.helper_modes = {*o.with_helper_data};
  }
  if (o.trials) cfg.trials.*field = *o.trials;
  if (cfg.sweep_q.empty()) cfg.sweep_q = {cfg.q};
  cfg.validate();
  return {cfg, cfg.trials.*field};
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

Quantizer make_quantizer(const ExperimentConfig& cfg, int q) {
  const EnvironmentConfig env = cfg.fixed_environment(cfg.temperature.reference_c);
  if (cfg.scheme != QuantizerScheme::kmeans)
    return build_quantizer(cfg.scheme, q, env.normalized_sigma());
  // k-means is trained on normalized enrollment values of simulated devices
  std::vector<double> samples;
  for (std::uint64_t k = 0; k < 256; ++k) {
    PufResponse x = normalize(enroll_device(derive_seed(cfg.seed, kKmeansSamples, k), env));
    samples.insert(samples.end(), x.values.begin(), x.values.end());
  }
  return build_quantizer(cfg.scheme, q, env.normalized_sigma(), samples);
}

std::uint64_t cell(int q, bool w_prime) { return static_cast<std::uint64_t>(q) * 2 + w_prime; }

DmcModel legit_channel(const ExperimentConfig& cfg, const Quantizer& qz, bool w_prime) {
  return estimate_channel(cfg.legit_environment(), qz, cfg.trials.estimate, w_prime,
                          derive_seed(cfg.seed, kLegitChannel, cell(qz.levels(), w_prime)),
                          cfg.worker_threads());
}

DmcModel attacker_channel(const ExperimentConfig& cfg, const Quantizer& qz, bool w_prime) {
  return estimate_channel(cfg.attacker_environment(), qz, cfg.trials.estimate, w_prime,
                          derive_seed(cfg.seed, kAttackerChannel, cell(qz.levels(), w_prime)),
                          cfg.worker_threads());
}

std::filesystem::path code_path(const ExperimentConfig& cfg, const Overrides& o) {
  return o.code ? *o.code : cfg.out_dir / "code.json";
}

WiretapCode load_code(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path))
    throw IoError("missing code " + path.string() + " (run construct first)");
  try {
    WiretapCode code = code_from_json(read_json_file(path));
    code.validate();
    return code;
  } catch (const std::invalid_argument& e) {
    throw IoError("malformed code " + path.string() + ": " + e.what());
  }
}

template <typename T, typename Parse>
T load_json(const std::filesystem::path& path, Parse parse) {
  try {
    return parse(read_json_file(path));
  } catch (const std::invalid_argument& e) {
    throw IoError("malformed " + path.string() + ": " + e.what());
  }
}

}  // namespace

int cmd_generate(const ExperimentConfig& base, const Overrides& o, std::ostream& log) {
  const auto [cfg, n] = resolve(base, o, &TrialCounts::devices);
  const EnvironmentConfig env = cfg.fixed_environment(cfg.temperature.reference_c);
  std::vector<PufResponse> devices;
  devices.reserve(n);
  for (std::uint64_t k = 0; k < n; ++k)
    devices.push_back(enroll_device(derive_seed(cfg.seed, streams::device, k), env));
  ensure_dir(cfg.out_dir);
  const auto path = cfg.out_dir / "devices.csv";
  auto out = open_out(path);
  write_devices_csv(out, devices);
  if (!out) throw IoError("write failed: " + path.string());
  fmt::print(log, "wrote {} devices to {}\n", n, path.string());
  return kOk;
}

int cmd_estimate(const ExperimentConfig& base, const Overrides& o, std::ostream& log) {
  const auto [cfg, trials] = resolve(base, o, &TrialCounts::estimate);
  ensure_dir(cfg.out_dir);
  const Quantizer qz = make_quantizer(cfg, cfg.q);
  write_json_file(cfg.out_dir / "quantizer.json", to_json(qz));
  const DmcModel models[] = {legit_channel(cfg, qz, cfg.with_helper_data),
                             attacker_channel(cfg, qz, cfg.with_helper_data)};
  for (const DmcModel& m : models) {
    const std::string stem = "channel_" + to_string(m.label);
    write_json_file(cfg.out_dir / (stem + ".json"), to_json(m));
    std::ostringstream csv;
    write_channel_csv(csv, m);
    write_text(cfg.out_dir / (stem + ".csv"), csv.str());
    fmt::print(log, "{} channel q={} W'={}: mean diagonal {:.4f} ({} trials)\n", to_string(m.label), m.q,
               m.with_helper_data ? 1 : 0, m.matrix.diagonal().mean(), trials);
  }
  return kOk;
}

int cmd_construct(const ExperimentConfig& base, const Overrides& o, std::ostream& log) {
  const auto [cfg, trials] = resolve(base, o, &TrialCounts::construct);
  ensure_dir(cfg.out_dir);
  std::ostringstream report;
  write_report_header(report);
  bool wrote_code = false;
  for (int q : cfg.sweep_q) {
    const Quantizer qz = make_quantizer(cfg, q);
    for (bool w_prime : cfg.helper_modes) {
      const DmcModel legit = legit_channel(cfg, qz, w_prime);
      const DmcModel attacker = attacker_channel(cfg, qz, w_prime);
      const ReliabilityProfile profile =
          estimate_reliability(legit, attacker, cfg.kernel_alpha(q), trials,
                               derive_seed(cfg.seed, streams::construct, cell(q, w_prime)), kNodes,
                               cfg.worker_threads());
      for (double d : cfg.d_sweep) {
        const auto row = partition(profile, d, cfg.random_entropy_threshold).second;
        write_report_row(report, row);
        fmt::print(log, "q={} W'={} d={:g}: n_s={} n_f={} H_att={:.2f} H_secret={:.0f}\n", q,
                   w_prime ? 1 : 0, d, row.n_s, row.n_f, row.h_att, row.h_secret);
      }
      if (q == cfg.q && w_prime == cfg.with_helper_data) {
        const auto [code, row] = partition(profile, cfg.operating_d, cfg.random_entropy_threshold);
        write_json_file(cfg.out_dir / "code.json", to_json(code));
        write_json_file(cfg.out_dir / "quantizer.json", to_json(qz));
        write_json_file(cfg.out_dir / "channel_legitimate.json", to_json(legit));
        write_json_file(cfg.out_dir / "channel_attacker.json", to_json(attacker));
        fmt::print(log, "operating point q={} W'={} d={:g}: n_s={} n_f={}\n", q, w_prime ? 1 : 0,
                   cfg.operating_d, row.n_s, row.n_f);
        wrote_code = true;
      }
    }
  }
  write_text(cfg.out_dir / "report.csv", report.str());
  if (!wrote_code)
    fmt::print(log, "note: q={} with W'={} is not in the sweep, no code.json written\n", cfg.q,
               cfg.with_helper_data ? 1 : 0);
  return kOk;
}

int cmd_fer(const ExperimentConfig& base, const Overrides& o, std::ostream& log) {
  const auto [cfg, trials] = resolve(base, o, &TrialCounts::fer);
  const WiretapCode code = load_code(code_path(cfg, o));
  ExperimentConfig at_q = cfg;
  at_q.q = code.q;
  const Quantizer qz = make_quantizer(at_q, code.q);
  // the FER channel is estimated at one fixed temperature
  const DmcModel legit = estimate_channel(
      cfg.fixed_environment(cfg.fer_temperature_c), qz, cfg.trials.estimate, code.with_helper_data,
      derive_seed(cfg.seed, kFixedChannel, cell(code.q, code.with_helper_data)),
      cfg.worker_threads());
  const ConstructionReport summary = summarize(code);
  const std::uint64_t fer_seed = derive_seed(cfg.seed, streams::fer, 0);

  ensure_dir(cfg.out_dir);
  std::ostringstream csv;
  csv << "decoder,q,with_helper_data,frames,frame_errors,FER,n_s,n_f,H_att,H_att_printed,H_secret\n";
  DecoderConfig sc;
  sc.kind = DecoderKind::sc;
  DecoderConfig scl = cfg.decoder;
  scl.kind = DecoderKind::scl;
  for (const auto& [name, dec] :
       {std::pair{std::string("SCD"), sc},
        std::pair{fmt::format("SCL{}", scl.list_size), scl}}) {
    const FerResult r = fer_experiment(code, legit, dec, trials, fer_seed, cfg.worker_threads());
    fmt::print(csv, "{},{},{},{},{},{:.3e},{},{},{:.4f},{:.4f},{:.1f}\n", name, code.q,
               code.with_helper_data ? 1 : 0, r.frames, r.frame_errors, r.fer(), summary.n_s,
               summary.n_f, summary.h_att, summary.h_att_printed, summary.h_secret);
    fmt::print(log, "{}: {} / {} frames failed, FER {:.3e}\n", name, r.frame_errors, r.frames,
               r.fer());
  }
  write_text(cfg.out_dir / "fer.csv", csv.str());
  return kOk;
}

int cmd_demo(const ExperimentConfig& base, const Overrides& o, std::ostream& log) {
  const auto [cfg, runs] = resolve(base, o, &TrialCounts::demo);
  const WiretapCode code = load_code(code_path(cfg, o));
  const auto dir = code_path(cfg, o).parent_path();
  const auto qz = load_json<Quantizer>(dir / "quantizer.json",
                                      [](const Json& j) { return quantizer_from_json(j); });
  const auto legit = load_json<DmcModel>(dir / "channel_legitimate.json",
                                         [](const Json& j) { return channel_from_json(j); });
  if (qz.levels() != code.q || legit.q != code.q)
    throw ConfigError("code, quantizer and channel disagree on q");

  struct Scenario {
    const char* name;
    EnvironmentConfig env;
  };
  std::vector<Scenario> scenarios;
  if (o.scenario == "all" || o.scenario == "benign")
    scenarios.push_back({"benign", cfg.fixed_environment(cfg.temperature.reference_c)});
  if (o.scenario == "all" || o.scenario == "hot")
    scenarios.push_back({"hot", cfg.fixed_environment(cfg.hot_temperature_c)});
  if (o.scenario == "all" || o.scenario == "attacked") {
    EnvironmentConfig env = cfg.fixed_environment(cfg.temperature.reference_c);
    env.attack = cfg.attack;
    scenarios.push_back({"attacked", env});
  }
  if (scenarios.empty()) throw ConfigError("unknown scenario '" + o.scenario + "'");

  ensure_dir(cfg.out_dir);
  const auto bundle_path = cfg.out_dir / "bundle.json";
  bool any_tamper = false;
  const EnvironmentConfig enroll_env = cfg.fixed_environment(cfg.temperature.reference_c);
  fmt::print(log, "demo: q={} W'={} n_s={} secret bits={} runs={}\n", code.q,
             code.with_helper_data ? 1 : 0, code.info_set.size() + code.random_set.size(),
             code.info_set.size() * std::bit_width(unsigned(code.q - 1)), runs);
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    std::uint64_t reproduced = 0;
    for (std::uint64_t r = 0; r < runs; ++r) {
      const std::uint64_t run = s * runs + r;
      const PufResponse raw = enroll_device(derive_seed(cfg.seed, streams::demo, 3 * run), enroll_env);
      const EnrollResult enrolled =
          enroll(normalize(raw), code, qz, legit, derive_seed(cfg.seed, streams::enroll, run),
                 code.with_helper_data);
      // the bundle goes through the file each run, as a deployed device would
      save_bundle(bundle_path, enrolled.bundle);
      const HelperDataBundle bundle = load_bundle(bundle_path);
      const PufResponse reading = normalize(
          remeasure(raw, scenarios[s].env, derive_seed(cfg.seed, streams::demo, 3 * run + 1)));
      const ReproduceResult result = reproduce(reading, bundle, cfg.decoder);
      const bool ok = result.status == ReproduceStatus::ok && result.secret == enrolled.secret;
      reproduced += ok;
      if (runs == 1)
        fmt::print(log, "{}: {}\n", scenarios[s].name, ok ? "secret reproduced" : "tamper detected");
    }
    if (runs > 1)
      fmt::print(log, "{}: secret reproduced {}/{}, tamper detected {}/{}\n", scenarios[s].name,
                 reproduced, runs, runs - reproduced, runs);
    any_tamper = any_tamper || reproduced < runs;
  }
  return any_tamper ? kTamperFailure : kOk;
}

int cmd_sweep_alpha(const ExperimentConfig& base, const Overrides& o, std::ostream& log) {
  const auto [cfg, trials] = resolve(base, o, &TrialCounts::construct);
  ensure_dir(cfg.out_dir);
  const Quantizer qz = make_quantizer(cfg, cfg.q);
  const DmcModel legit = legit_channel(cfg, qz, cfg.with_helper_data);
  const DmcModel attacker = attacker_channel(cfg, qz, cfg.with_helper_data);
  std::ostringstream csv;
  csv << "alpha,q,d,with_helper_data,n_s,n_f,H_att,H_att_printed,H_secret\n";
  for (int a = 1; a < cfg.q; ++a) {
    const auto profile = estimate_reliability(
        legit, attacker, static_cast<Symbol>(a), trials,
        derive_seed(cfg.seed, streams::construct, cell(cfg.q, cfg.with_helper_data)), kNodes,
        cfg.worker_threads());
    const auto row = partition(profile, cfg.operating_d, cfg.random_entropy_threshold).second;
    fmt::print(csv, "{},{},{:g},{},{},{},{:.4f},{:.4f},{:.1f}\n", a, row.q, row.d,
               row.with_helper_data ? 1 : 0, row.n_s, row.n_f, row.h_att, row.h_att_printed,
               row.h_secret);
    fmt::print(log, "alpha={}: n_s={} n_f={} H_att={:.2f}\n", a, row.n_s, row.n_f, row.h_att);
  }
  write_text(cfg.out_dir / "sweep_alpha.csv", csv.str());
  return kOk;
}

int run_command(const std::string& command, const std::optional<std::filesystem::path>& config,
                const Overrides& overrides, std::ostream& log, std::ostream& err) {
  try {
    const ExperimentConfig cfg = config ? load_config(*config) : ExperimentConfig{};
    if (command == "generate") return cmd_generate(cfg, overrides, log);
    if (command == "estimate") return cmd_estimate(cfg, overrides, log);
    if (command == "construct") return cmd_construct(cfg, overrides, log);
    if (command == "fer") return cmd_fer(cfg, overrides, log);
    if (command == "demo") return cmd_demo(cfg, overrides, log);
    if (command == "sweep-alpha") return cmd_sweep_alpha(cfg, overrides, log);
    err << "unknown command '" << command << "'\n";
    return kConfigError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::ios_base::failure& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const nlohmann::json::exception& e) {
    err << "malformed input file: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace wtpuf::cli
