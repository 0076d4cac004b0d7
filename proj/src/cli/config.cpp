#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "wtpuf/cli.hpp"
#include "wtpuf/serialize.hpp"

namespace wtpuf::cli {

void ExperimentConfig::validate() const {
  auto check = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  auto check_q = [&](int value) {
    check(value == 2 || value == 4 || value == 8 || value == 16 || value == 32,
          "q must be one of 2, 4, 8, 16, 32");
  };
  check_q(q);
  for (int v : sweep_q) check_q(v);
  check(sigma_puf > 0, "sigma_puf must be positive");
  check(sigma_noise >= 0, "sigma_noise must be non-negative");
  check(legit_temperature_range.first <= legit_temperature_range.second,
        "legit temperature range is reversed");
  check(!d_sweep.empty(), "d_sweep must not be empty");
  for (double d : d_sweep) check(d > 0 && d < 1, "every d must lie in (0, 1)");
  check(operating_d > 0 && operating_d < 1, "operating_d must lie in (0, 1)");
  check(random_entropy_threshold >= 0, "random_entropy threshold must be non-negative");
  check(!helper_modes.empty(), "helper_modes must not be empty");
  check(decoder.list_size >= 1, "list size must be at least 1");
  check(trials.devices >= 1 && trials.estimate >= 1 && trials.construct >= 1 &&
            trials.fer >= 1 && trials.demo >= 1,
        "trial counts must be at least 1");
  try {
    attack.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (alpha) check(*alpha != 0 && *alpha < q, "alpha must be a nonzero element of GF(q)");
}

EnvironmentConfig ExperimentConfig::fixed_environment(double temperature_c) const {
  EnvironmentConfig env;
  env.sigma_puf = sigma_puf;
  env.sigma_noise = sigma_noise;
  env.temperature = temperature;
  env.temperature_c = temperature_c;
  env.randomize_attack_groups = randomize_attack_groups;
  return env;
}

EnvironmentConfig ExperimentConfig::legit_environment() const {
  EnvironmentConfig env = fixed_environment(temperature.reference_c);
  env.temperature_range = legit_temperature_range;
  return env;
}

EnvironmentConfig ExperimentConfig::attacker_environment() const {
  EnvironmentConfig env = legit_environment();
  env.attack = attack;
  return env;
}

Symbol ExperimentConfig::kernel_alpha(int field_order) const {
  if (alpha) return *alpha;
  return default_alpha(GaloisField::with_order(field_order));
}

unsigned ExperimentConfig::worker_threads() const {
  return threads ? threads : default_threads();
}

namespace {

void reject_unknown(const Json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  ExperimentConfig cfg;
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    reject_unknown(j,
                   {"q", "sweep_q", "scheme", "sigma_puf", "sigma_noise", "temperature",
                    "legit_temperature_range", "fer_temperature_c", "hot_temperature_c", "attack",
                    "alpha", "d_sweep", "operating_d", "random_entropy_threshold",
                    "with_helper_data", "helper_modes", "decoder", "trials", "seed", "out_dir",
                    "threads"},
                   "config");
    cfg.q = j.value("q", cfg.q);
    cfg.sweep_q = j.value("sweep_q", cfg.sweep_q);
    if (j.contains("scheme")) cfg.scheme = parse_scheme(j["scheme"].get<std::string>());
    cfg.sigma_puf = j.value("sigma_puf", cfg.sigma_puf);
    cfg.sigma_noise = j.value("sigma_noise", cfg.sigma_noise);
    if (j.contains("temperature")) {
      const Json& t = j["temperature"];
      reject_unknown(t, {"reference_c", "gain_per_c", "residual_sigma_at_60c"}, "temperature");
      cfg.temperature.reference_c = t.value("reference_c", cfg.temperature.reference_c);
      cfg.temperature.gain_per_c = t.value("gain_per_c", cfg.temperature.gain_per_c);
      cfg.temperature.residual_sigma_at_60c =
          t.value("residual_sigma_at_60c", cfg.temperature.residual_sigma_at_60c);
    }
    if (j.contains("legit_temperature_range")) {
      auto r = j["legit_temperature_range"].get<std::vector<double>>();
      if (r.size() != 2) throw ConfigError("legit_temperature_range needs two values");
      cfg.legit_temperature_range = {r[0], r[1]};
    }
    cfg.fer_temperature_c = j.value("fer_temperature_c", cfg.fer_temperature_c);
    cfg.hot_temperature_c = j.value("hot_temperature_c", cfg.hot_temperature_c);
    if (j.contains("attack")) {
      const Json& a = j["attack"];
      reject_unknown(a, {"affected_groups", "sigma_broadening", "randomize_groups"}, "attack");
      cfg.attack.affected_groups = a.value("affected_groups", cfg.attack.affected_groups);
      cfg.attack.sigma_broadening = a.value("sigma_broadening", cfg.attack.sigma_broadening);
      cfg.randomize_attack_groups = a.value("randomize_groups", cfg.randomize_attack_groups);
    }
    if (j.contains("alpha")) {
      if (j["alpha"].is_string()) {
        if (j["alpha"].get<std::string>() != "default")
          throw ConfigError("alpha must be \"default\" or a field element");
      } else {
        cfg.alpha = static_cast<Symbol>(j["alpha"].get<int>());
      }
    }
    cfg.d_sweep = j.value("d_sweep", cfg.d_sweep);
    cfg.operating_d = j.value("operating_d", cfg.operating_d);
    cfg.random_entropy_threshold = j.value("random_entropy_threshold", cfg.random_entropy_threshold);
    cfg.with_helper_data = j.value("with_helper_data", cfg.with_helper_data);
    cfg.helper_modes = j.value("helper_modes", cfg.helper_modes);
    if (j.contains("decoder")) {
      const Json& d = j["decoder"];
      reject_unknown(d, {"kind", "list_size", "prune_delta", "hash_selection"}, "decoder");
      if (d.contains("kind")) {
        auto kind = d["kind"].get<std::string>();
        if (kind == "sc") cfg.decoder.kind = DecoderKind::sc;
        else if (kind == "scl") cfg.decoder.kind = DecoderKind::scl;
        else throw ConfigError("decoder kind must be \"sc\" or \"scl\"");
      }
      cfg.decoder.list_size = d.value("list_size", cfg.decoder.list_size);
      if (d.contains("prune_delta") && !d["prune_delta"].is_null())
        cfg.decoder.prune_delta = d["prune_delta"].get<double>();
      cfg.decoder.hash_selection = d.value("hash_selection", cfg.decoder.hash_selection);
    }
    if (j.contains("trials")) {
      const Json& t = j["trials"];
      reject_unknown(t, {"devices", "estimate", "construct", "fer", "demo"}, "trials");
      cfg.trials.devices = t.value("devices", cfg.trials.devices);
      cfg.trials.estimate = t.value("estimate", cfg.trials.estimate);
      cfg.trials.construct = t.value("construct", cfg.trials.construct);
      cfg.trials.fer = t.value("fer", cfg.trials.fer);
      cfg.trials.demo = t.value("demo", cfg.trials.demo);
    }
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
    cfg.threads = j.value("threads", cfg.threads);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  std::stringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string dump_config(const ExperimentConfig& cfg) {
  Json j;
  j["q"] = cfg.q;
  j["sweep_q"] = cfg.sweep_q;
  j["scheme"] = to_string(cfg.scheme);
  j["sigma_puf"] = cfg.sigma_puf;
  j["sigma_noise"] = cfg.sigma_noise;
  j["temperature"] = {{"reference_c", cfg.temperature.reference_c},
                      {"gain_per_c", cfg.temperature.gain_per_c},
                      {"residual_sigma_at_60c", cfg.temperature.residual_sigma_at_60c}};
  j["legit_temperature_range"] = {cfg.legit_temperature_range.first,
                                  cfg.legit_temperature_range.second};
  j["fer_temperature_c"] = cfg.fer_temperature_c;
  j["hot_temperature_c"] = cfg.hot_temperature_c;
  j["attack"] = {{"affected_groups", cfg.attack.affected_groups},
                 {"sigma_broadening", cfg.attack.sigma_broadening},
                 {"randomize_groups", cfg.randomize_attack_groups}};
  if (cfg.alpha) j["alpha"] = *cfg.alpha;
  else j["alpha"] = "default";
  j["d_sweep"] = cfg.d_sweep;
  j["operating_d"] = cfg.operating_d;
  j["random_entropy_threshold"] = cfg.random_entropy_threshold;
  j["with_helper_data"] = cfg.with_helper_data;
  j["helper_modes"] = cfg.helper_modes;
  j["decoder"] = {{"kind", cfg.decoder.kind == DecoderKind::sc ? "sc" : "scl"},
                  {"list_size", cfg.decoder.list_size},
                  {"prune_delta", cfg.decoder.prune_delta ? Json(*cfg.decoder.prune_delta) : Json()},
                  {"hash_selection", cfg.decoder.hash_selection}};
  j["trials"] = {{"devices", cfg.trials.devices},
                 {"estimate", cfg.trials.estimate},
                 {"construct", cfg.trials.construct},
                 {"fer", cfg.trials.fer},
                 {"demo", cfg.trials.demo}};
  j["seed"] = cfg.seed;
  j["out_dir"] = cfg.out_dir.string();
  j["threads"] = cfg.threads;
  return j.dump(2);
}

}  // namespace wtpuf::cli
