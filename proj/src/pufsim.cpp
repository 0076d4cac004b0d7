#include "wtpuf/pufsim.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace wtpuf {

void AttackConfig::validate() const {
  if (affected_groups.empty() || affected_groups.size() > kTxGroups)
    throw std::invalid_argument("attack must affect between 1 and 8 Tx groups");
  std::vector<int> sorted = affected_groups;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("attack lists a Tx group twice");
  if (sorted.front() < 0 || sorted.back() >= kTxGroups)
    throw std::invalid_argument("attack Tx group index out of range");
  if (!(sigma_broadening >= 0)) throw std::invalid_argument("sigma_broadening must be >= 0");
}

double TemperatureModel::gain(double temperature_c) const {
  return 1.0 + gain_per_c * (temperature_c - reference_c);
}

double TemperatureModel::residual_sigma(double temperature_c) const {
  return residual_sigma_at_60c * std::abs(temperature_c - reference_c) / (60.0 - reference_c);
}

void EnvironmentConfig::validate() const {
  if (!(sigma_puf >= 0)) throw std::invalid_argument("sigma_puf must be >= 0");
  if (!(sigma_noise >= 0)) throw std::invalid_argument("sigma_noise must be >= 0");
  if (temperature_range && !(temperature_range->first <= temperature_range->second))
    throw std::invalid_argument("temperature range is reversed");
  if (!(temperature.residual_sigma_at_60c >= 0))
    throw std::invalid_argument("temperature residual sigma must be >= 0");
  if (attack) attack->validate();
}

double EnvironmentConfig::normalized_sigma() const {
  return sigma_puf * std::sqrt(1.0 - 1.0 / kRxPerGroup);
}

std::int32_t clip_to_full_scale(double value) {
  double r = std::round(value);
  return static_cast<std::int32_t>(std::clamp(r, -double(kFullScale), double(kFullScale)));
}

PufResponse enroll_device(std::uint64_t seed, const EnvironmentConfig& cfg) {
  cfg.validate();
  PufResponse resp;
  if (cfg.sigma_puf == 0) return resp;
  Rng rng(seed);
  std::normal_distribution<double> draw(0.0, cfg.sigma_puf);
  for (auto& v : resp.values) v = clip_to_full_scale(draw(rng));
  return resp;
}

void apply_attack(PufResponse& resp, std::span<const int> groups, double sigma, Rng& rng) {
  std::normal_distribution<double> draw(0.0, sigma);
  for (int g : groups)
    for (auto& v : resp.group(g)) v = clip_to_full_scale(draw(rng));
}

PufResponse apply_attack(const PufResponse& resp, const AttackConfig& atk, double sigma_puf,
                         std::uint64_t seed) {
  PufResponse out = resp;
  if (atk.affected_groups.empty()) return out;
  atk.validate();
  Rng rng(seed);
  apply_attack(out, atk.affected_groups, sigma_puf + atk.sigma_broadening, rng);
  out.normalized = false;
  return out;
}

PufResponse remeasure(const PufResponse& device, const EnvironmentConfig& cfg,
                      std::uint64_t seed) {
  cfg.validate();
  if (device.normalized) throw std::logic_error("remeasure expects a raw response");
  Rng rng(seed);

  double temperature = cfg.temperature_c;
  if (cfg.temperature_range) {
    std::uniform_real_distribution<double> t(cfg.temperature_range->first,
                                             cfg.temperature_range->second);
    temperature = t(rng);
  }
  const double gain = cfg.temperature.gain(temperature);
  const double residual = cfg.temperature.residual_sigma(temperature);
  const double sigma = std::hypot(residual, cfg.sigma_noise);

  PufResponse out;
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int i = 0; i < kNodes; ++i) {
    double v = gain * device.values[i];
    if (sigma > 0) v += sigma * noise(rng);
    out.values[i] = clip_to_full_scale(v);
  }

  if (cfg.attack) {
    std::vector<int> groups = cfg.attack->affected_groups;
    if (cfg.randomize_attack_groups) {
      std::array<int, kTxGroups> all{};
      std::iota(all.begin(), all.end(), 0);
      std::shuffle(all.begin(), all.end(), rng);
      groups.assign(all.begin(), all.begin() + static_cast<long>(groups.size()));
    }
    apply_attack(out, groups, cfg.sigma_puf + cfg.attack->sigma_broadening, rng);
  }
  return out;
}

PufResponse normalize(const PufResponse& resp) {
  if (resp.normalized) throw std::logic_error("response is already normalized");
  PufResponse out = resp;
  for (int g = 0; g < kTxGroups; ++g) {
    auto values = out.group(g);
    double mean = std::accumulate(values.begin(), values.end(), 0.0) / kRxPerGroup;
    // ties to even, so a residual mean of +-0.5 is left alone and renormalizing is a no-op
    auto shift = static_cast<std::int32_t>(std::nearbyint(mean));
    for (auto& v : values) v -= shift;
  }
  out.normalized = true;
  return out;
}

void write_devices_csv(std::ostream& out, std::span<const PufResponse> devices) {
  for (int i = 0; i < kNodes; ++i) out << (i ? "," : "") << 'n' << i;
  out << '\n';
  for (const auto& d : devices) {
    for (int i = 0; i < kNodes; ++i) out << (i ? "," : "") << d.values[i];
    out << '\n';
  }
}

std::vector<PufResponse> read_devices_csv(std::istream& in) {
  std::vector<PufResponse> devices;
  std::string line;
  if (!std::getline(in, line)) return devices;  // header
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    PufResponse resp;
    std::istringstream fields(line);
    std::string cell;
    int i = 0;
    while (std::getline(fields, cell, ',')) {
      if (i >= kNodes) throw std::runtime_error("too many columns in row " + std::to_string(row));
      std::size_t used = 0;
      long v = std::stol(cell, &used);
      if (used != cell.size() || v < -kFullScale || v > kFullScale)
        throw std::runtime_error("bad value in row " + std::to_string(row));
      resp.values[i++] = static_cast<std::int32_t>(v);
    }
    if (i != kNodes) throw std::runtime_error("expected 128 columns in row " + std::to_string(row));
    devices.push_back(resp);
  }
  return devices;
}

}  // namespace wtpuf
