#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "wtpuf/channel.hpp"
#include "wtpuf/construct.hpp"
#include "wtpuf/digest.hpp"
#include "wtpuf/quantize.hpp"

namespace wtpuf {

/// The enrolled secret S: one symbol per information index.
struct Secret {
  SymbolVector symbols;
  int bits_per_symbol = 0;

  std::size_t bit_length() const { return symbols.size() * static_cast<std::size_t>(bits_per_symbol); }
  friend bool operator==(const Secret&, const Secret&) = default;
};

/// Public helper data written at enrollment.
struct HelperDataBundle {
  static constexpr int kFormatVersion = 1;
  int format_version = kFormatVersion;
  std::string digest_algorithm = "sha256";
  SymbolVector w;             ///< W = C + X (symbol-wise field addition)
  AnalogHelperData w_prime;   ///< zero when enrolled without analog helper data
  bool with_helper_data = true;
  Digest secret_hash{};       ///< digest of S only
  Quantizer quantizer;
  WiretapCode code;
  DmcModel channel;           ///< legitimate channel used for soft decoding
};

Digest secret_digest(std::span<const Symbol> secret);

struct EnrollResult {
  Secret secret;
  HelperDataBundle bundle;
};

/// Fuzzy-commitment enrollment of a normalized, attack-free response.
EnrollResult enroll(const PufResponse& device, const WiretapCode& code, const Quantizer& qz,
                    const DmcModel& legit, std::uint64_t rng_seed, bool use_w_prime = true);

enum class ReproduceStatus { ok, tamper_failure };

struct ReproduceResult {
  ReproduceStatus status = ReproduceStatus::tamper_failure;
  std::optional<Secret> secret;  ///< present only when the digest matched
};

/// Recovers S from a normalized measurement. Any digest mismatch is
/// reported as tamper_failure; a wrong secret is never returned.
ReproduceResult reproduce(const PufResponse& measurement, const HelperDataBundle& bundle,
                          const DecoderConfig& decoder = {});

/// Per-position likelihoods for the reproduction decoder.
Likelihoods reproduction_likelihoods(const PufResponse& measurement,
                                     const HelperDataBundle& bundle);

/// Writes the bundle as JSON via a temporary file and rename.
void save_bundle(const std::filesystem::path& path, const HelperDataBundle& bundle);
HelperDataBundle load_bundle(const std::filesystem::path& path);

}  // namespace wtpuf
