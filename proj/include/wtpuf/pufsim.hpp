#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "wtpuf/rng.hpp"

namespace wtpuf {

inline constexpr int kTxGroups = 8;
inline constexpr int kRxPerGroup = 16;
inline constexpr int kNodes = kTxGroups * kRxPerGroup;
/// Measurement full scale in points (1 point = 13.4 aF).
inline constexpr int kFullScale = 10000;

/// One enclosure read-out: 8 Tx groups of 16 differential capacitances.
struct PufResponse {
  std::array<std::int32_t, kNodes> values{};
  bool normalized = false;

  std::span<std::int32_t, kRxPerGroup> group(int g) {
    return std::span<std::int32_t, kRxPerGroup>(values.data() + g * kRxPerGroup, kRxPerGroup);
  }
  std::span<const std::int32_t, kRxPerGroup> group(int g) const {
    return std::span<const std::int32_t, kRxPerGroup>(values.data() + g * kRxPerGroup,
                                                      kRxPerGroup);
  }
  friend bool operator==(const PufResponse&, const PufResponse&) = default;
};

/// Drilling damage: every node of the affected Tx groups is redrawn from a
/// broadened Gaussian.
struct AttackConfig {
  std::vector<int> affected_groups{0, 1};
  /// Extra standard deviation (points) of the redrawn groups.
  double sigma_broadening = 2700.0;

  void validate() const;
};

/// Temperature drift relative to the enrollment temperature.
///
/// A node value x drifts to x * (1 + gain_per_c * (T - reference_c)), plus an
/// optional zero-mean per-node residual whose sigma grows linearly with
/// |T - reference_c| and equals residual_sigma_at_60c at 60 degrees C.
struct TemperatureModel {
  double reference_c = 20.0;
  double gain_per_c = 0.0924 / 40.0;
  double residual_sigma_at_60c = 0.0;

  double gain(double temperature_c) const;
  double residual_sigma(double temperature_c) const;
};

struct EnvironmentConfig {
  double sigma_puf = 2241.0;
  double sigma_noise = 129.0;
  double temperature_c = 20.0;
  /// When set, every remeasurement draws its temperature uniformly from the range.
  std::optional<std::pair<double, double>> temperature_range;
  TemperatureModel temperature;
  std::optional<AttackConfig> attack;
  /// Pick fresh affected groups (same count) on every remeasurement.
  bool randomize_attack_groups = true;

  void validate() const;
  /// Standard deviation of node values after the Tx-group mean is removed.
  double normalized_sigma() const;
};

/// Draws a fresh device: 128 i.i.d. N(0, sigma_puf^2) values, rounded and clipped.
PufResponse enroll_device(std::uint64_t seed, const EnvironmentConfig& cfg);

/// Re-reads `device` under measurement noise, temperature drift and (if
/// configured) a drilling attack. The device must be a raw response.
PufResponse remeasure(const PufResponse& device, const EnvironmentConfig& cfg,
                      std::uint64_t seed);

/// Subtracts each Tx group's (rounded) mean. Throws std::logic_error if the
/// response is already normalized.
PufResponse normalize(const PufResponse& resp);

/// Replaces the affected groups by draws from N(0, (sigma_puf + broadening)^2).
PufResponse apply_attack(const PufResponse& resp, const AttackConfig& atk, double sigma_puf,
                         std::uint64_t seed);
void apply_attack(PufResponse& resp, std::span<const int> groups, double sigma,
                  Rng& rng);

std::int32_t clip_to_full_scale(double value);

/// Device dataset CSV: one row per device, 128 integer columns, header row
/// `n0,...,n127`.
void write_devices_csv(std::ostream& out, std::span<const PufResponse> devices);
std::vector<PufResponse> read_devices_csv(std::istream& in);

}  // namespace wtpuf
