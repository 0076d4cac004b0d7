#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wtpuf/galois.hpp"
#include "wtpuf/pufsim.hpp"

namespace wtpuf {

using SymbolVector = std::vector<Symbol>;

enum class QuantizerScheme { equidistant, equiprobable, kmeans };

std::string to_string(QuantizerScheme scheme);
QuantizerScheme parse_scheme(const std::string& name);

/// Scalar quantizer over the full measurement scale [-10000, +10000].
///
/// Intervals are half-open [lo, hi) except the last, which is closed.
/// Values beyond full scale fall into the outermost intervals.
class Quantizer {
 public:
  Quantizer(QuantizerScheme scheme, std::vector<double> boundaries, std::vector<double> centers);
  /// Two equidistant intervals split at zero.
  Quantizer();

  QuantizerScheme scheme() const { return scheme_; }
  int levels() const { return static_cast<int>(centers_.size()); }
  /// The levels-1 interior boundaries, strictly increasing.
  const std::vector<double>& boundaries() const { return boundaries_; }
  /// Reconstruction point of each interval.
  const std::vector<double>& centers() const { return centers_; }

  int interval_of(double value) const;
  double lower(int k) const;
  double upper(int k) const;
  double width(int k) const { return upper(k) - lower(k); }
  /// Interval midpoint: the target the analog helper data shifts values to.
  double midpoint(int k) const { return 0.5 * (lower(k) + upper(k)); }

  friend bool operator==(const Quantizer&, const Quantizer&) = default;

 private:
  QuantizerScheme scheme_;
  std::vector<double> boundaries_;
  std::vector<double> centers_;
};

/// Builds a quantizer with `levels` intervals for N(0, sigma^2)-distributed
/// values. kmeans requires `samples` (throws std::invalid_argument otherwise).
Quantizer build_quantizer(QuantizerScheme scheme, int levels, double sigma,
                          std::span<const double> samples = {});

/// Analog helper data W': per-node shifts to the enrollment interval midpoint.
struct AnalogHelperData {
  std::array<double, kNodes> offsets{};
  friend bool operator==(const AnalogHelperData&, const AnalogHelperData&) = default;
};

/// Quantizes a normalized response, recording helper offsets.
std::pair<SymbolVector, AnalogHelperData> quantize(const PufResponse& resp, const Quantizer& qz);

/// Quantizes value_i + offset_i for each node of a normalized response.
SymbolVector requantize(const PufResponse& resp, const Quantizer& qz,
                        const AnalogHelperData& w_prime);

/// Mean squared error between the values and their reconstruction points.
double distortion(const PufResponse& x, const Quantizer& qz);
/// Mean squared error between `reference` and the reconstruction of `measured`.
double distortion(const PufResponse& reference, const PufResponse& measured,
                  const Quantizer& qz);

/// Number of positions whose symbols differ. Throws on length mismatch.
std::size_t count_interval_shifts(std::span<const Symbol> before, std::span<const Symbol> after);

inline unsigned gray_code(unsigned k) { return k ^ (k >> 1); }

/// Fraction of differing bits after mapping each symbol to its log2(q)-bit
/// Gray codeword. q must be a power of two >= 2.
double gray_ber(std::span<const Symbol> before, std::span<const Symbol> after, int q);

/// Wide-symbol variants for analysis sweeps with more than 256 intervals.
std::vector<int> interval_indices(const PufResponse& resp, const Quantizer& qz,
                                  const AnalogHelperData* w_prime = nullptr);
std::size_t count_interval_shifts(std::span<const int> before, std::span<const int> after);
double gray_ber(std::span<const int> before, std::span<const int> after, int q);

}  // namespace wtpuf
