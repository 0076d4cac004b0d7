#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "wtpuf/channel.hpp"
#include "wtpuf/polar.hpp"

namespace wtpuf {

enum class IndexRole : std::uint8_t { frozen, random, info };

/// Polar wiretap code: each u-index is frozen (known zero), random (fresh
/// randomness readable by both receivers) or information (secret).
struct WiretapCode {
  int n = kNodes;
  int q = 8;
  Symbol alpha = 2;
  unsigned irreducible_poly = 0;
  std::vector<int> frozen_set;
  std::vector<int> random_set;
  std::vector<int> info_set;
  /// Genie-aided SC error rate of every u-index for each receiver.
  std::vector<double> reliability_legit;
  std::vector<double> reliability_attacker;
  /// Attacker decision entropy (bits) of every u-index.
  std::vector<double> posterior_entropy_attacker;
  double d = 0;
  double random_entropy_threshold = 0.1;
  bool with_helper_data = true;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;

  /// Throws std::invalid_argument if the sets are not a disjoint cover of
  /// [0, n) or an information index violates the reliability threshold.
  void validate() const;
  std::vector<IndexRole> roles() const;
  PolarKernel kernel() const;
  /// Decoder mask: frozen positions carry `frozen_values` (in frozen-set
  /// order), the rest are decided. Throws if the value count is wrong.
  FixedSymbols fixed_symbols(std::span<const Symbol> frozen_values) const;
  FixedSymbols fixed_symbols() const;  ///< all frozen values zero
};

/// One row of the construction report.
struct ConstructionReport {
  int q = 0;
  double d = 0;
  bool with_helper_data = true;
  int n_s = 0;  ///< |I| + |R|
  int n_f = 0;  ///< |R|
  double h_att = 0;          ///< sum of attacker decision entropy over I
  double h_att_printed = 0;  ///< -sum p log2 p of attacker error rates over I and R
  double h_secret = 0;       ///< n_s * log2 q
};

/// Per-index Monte-Carlo statistics for both receivers.
struct ReliabilityProfile {
  int n = 0;
  int q = 0;
  Symbol alpha = 0;
  unsigned irreducible_poly = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  bool with_helper_data = true;
  std::vector<double> error_legit;
  std::vector<double> error_attacker;
  std::vector<double> entropy_attacker;
};

/// Genie-aided SC over both channels; trial t uses the same source vector
/// for each receiver.
ReliabilityProfile estimate_reliability(const DmcModel& legit, const DmcModel& attacker,
                                        Symbol alpha, std::uint64_t trials, std::uint64_t seed,
                                        int n = kNodes, unsigned threads = default_threads());

/// Splits the indices for threshold d: F = {error_legit > d}; of the rest,
/// R = {attacker entropy < random_entropy_threshold}; I = remainder.
std::pair<WiretapCode, ConstructionReport> partition(const ReliabilityProfile& profile, double d,
                                                     double random_entropy_threshold = 0.1);

/// Report columns recomputed from a stored code.
ConstructionReport summarize(const WiretapCode& code);

std::pair<WiretapCode, ConstructionReport> monte_carlo_construct(
    const DmcModel& legit, const DmcModel& attacker, Symbol alpha, std::uint64_t trials,
    double d, std::uint64_t seed, double random_entropy_threshold = 0.1,
    unsigned threads = default_threads());

/// Decoders on a WiretapCode: frozen positions fixed, random and
/// information positions decided.
SymbolVector sc_decode(const WiretapCode& code, const Likelihoods& channel,
                       std::span<const Symbol> frozen_values);
SclResult scl_decode(const WiretapCode& code, const Likelihoods& channel,
                     std::span<const Symbol> frozen_values, const SclOptions& options);

enum class DecoderKind { sc, scl };

struct DecoderConfig {
  DecoderKind kind = DecoderKind::sc;
  int list_size = 8;
  std::optional<double> prune_delta;
  /// SCL only: choose the final candidate by the secret digest.
  bool hash_selection = true;
};

struct FerResult {
  std::uint64_t frames = 0;
  std::uint64_t frame_errors = 0;
  double fer() const { return frames ? double(frame_errors) / double(frames) : 0.0; }
};

/// Frames with a uniformly random secret and random-set fill sent over the
/// code-offset channel of `legit`; a frame fails when the decoded secret
/// differs. Trial t depends only on (seed, t), so different decoders with
/// the same seed see identical frames.
FerResult fer_experiment(const WiretapCode& code, const DmcModel& legit,
                         const DecoderConfig& decoder, std::uint64_t trials, std::uint64_t seed,
                         unsigned threads = default_threads());

/// Construction report CSV.
void write_report_header(std::ostream& out);
void write_report_row(std::ostream& out, const ConstructionReport& row);

}  // namespace wtpuf
