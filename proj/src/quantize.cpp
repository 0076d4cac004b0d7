#include "wtpuf/quantize.hpp"

#include <algorithm>
#include <bit>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <stdexcept>

namespace wtpuf {

std::string to_string(QuantizerScheme scheme) {
  switch (scheme) {
    case QuantizerScheme::equidistant: return "equidistant";
    case QuantizerScheme::equiprobable: return "equiprobable";
    case QuantizerScheme::kmeans: return "kmeans";
  }
  return "?";
}

QuantizerScheme parse_scheme(const std::string& name) {
  if (name == "equidistant") return QuantizerScheme::equidistant;
  if (name == "equiprobable") return QuantizerScheme::equiprobable;
  if (name == "kmeans") return QuantizerScheme::kmeans;
  throw std::invalid_argument("unknown quantizer scheme '" + name + "'");
}

Quantizer::Quantizer(QuantizerScheme scheme, std::vector<double> boundaries,
                     std::vector<double> centers)
    : scheme_(scheme), boundaries_(std::move(boundaries)), centers_(std::move(centers)) {
  if (centers_.size() < 2 || boundaries_.size() + 1 != centers_.size())
    throw std::invalid_argument("quantizer needs levels-1 boundaries and levels centers");
  double prev = -kFullScale;
  for (double b : boundaries_) {
    if (!(b > prev)) throw std::invalid_argument("quantizer boundaries must increase strictly");
    prev = b;
  }
  if (!(prev < kFullScale)) throw std::invalid_argument("quantizer boundary beyond full scale");
}

Quantizer::Quantizer()
    : Quantizer(QuantizerScheme::equidistant, {0.0}, {-0.5 * kFullScale, 0.5 * kFullScale}) {}

int Quantizer::interval_of(double value) const {
  auto it = std::upper_bound(boundaries_.begin(), boundaries_.end(), value);
  return static_cast<int>(it - boundaries_.begin());
}

double Quantizer::lower(int k) const { return k == 0 ? -kFullScale : boundaries_[k - 1]; }
double Quantizer::upper(int k) const {
  return k == levels() - 1 ? kFullScale : boundaries_[k];
}

namespace {

std::vector<double> midpoints(const std::vector<double>& boundaries) {
  std::vector<double> centers;
  centers.reserve(boundaries.size() + 1);
  double lo = -kFullScale;
  for (double b : boundaries) {
    centers.push_back(0.5 * (lo + b));
    lo = b;
  }
  centers.push_back(0.5 * (lo + kFullScale));
  return centers;
}

std::vector<double> gaussian_quantiles(int levels, double sigma) {
  if (!(sigma > 0)) throw std::invalid_argument("equiprobable quantizer needs sigma > 0");
  boost::math::normal_distribution<double> dist(0.0, sigma);
  std::vector<double> boundaries(levels - 1);
  for (int k = 1; k < levels; ++k)
    boundaries[k - 1] = boost::math::quantile(dist, static_cast<double>(k) / levels);
  return boundaries;
}

// 1-D Lloyd iteration on sorted samples, seeded from the equiprobable cells.
Quantizer lloyd(int levels, double sigma, std::span<const double> samples) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> prefix(sorted.size() + 1, 0.0);
  for (std::size_t i = 0; i < sorted.size(); ++i) prefix[i + 1] = prefix[i] + sorted[i];

  auto cell_means = [&](const std::vector<double>& boundaries, std::vector<double>& centers) {
    std::size_t lo = 0;
    for (int k = 0; k < levels; ++k) {
      std::size_t hi = k + 1 < levels
                           ? static_cast<std::size_t>(
                                 std::lower_bound(sorted.begin(), sorted.end(), boundaries[k]) -
                                 sorted.begin())
                           : sorted.size();
      if (hi > lo) centers[k] = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
      lo = hi;
    }
  };

  std::vector<double> boundaries = gaussian_quantiles(levels, sigma);
  std::vector<double> centers = midpoints(boundaries);
  cell_means(boundaries, centers);

  const double tolerance = 1e-6 * 2.0 * kFullScale;
  for (int iter = 0; iter < 200; ++iter) {
    std::sort(centers.begin(), centers.end());
    for (int k = 0; k + 1 < levels; ++k) boundaries[k] = 0.5 * (centers[k] + centers[k + 1]);
    std::vector<double> next = centers;
    cell_means(boundaries, next);
    double motion = 0;
    for (int k = 0; k < levels; ++k) motion = std::max(motion, std::abs(next[k] - centers[k]));
    centers = std::move(next);
    if (motion < tolerance) break;
  }
  std::sort(centers.begin(), centers.end());
  for (int k = 0; k + 1 < levels; ++k) boundaries[k] = 0.5 * (centers[k] + centers[k + 1]);
  // Degenerate cells (duplicate centroids) would break strict ordering.
  for (int k = 1; k + 1 < levels; ++k)
    if (!(boundaries[k] > boundaries[k - 1]))
      throw std::runtime_error("k-means produced an empty quantization cell");
  return Quantizer(QuantizerScheme::kmeans, std::move(boundaries), std::move(centers));
}

}  // namespace

Quantizer build_quantizer(QuantizerScheme scheme, int levels, double sigma,
                          std::span<const double> samples) {
  if (levels < 2) throw std::invalid_argument("quantizer needs at least 2 intervals");
  switch (scheme) {
    case QuantizerScheme::equidistant: {
      const double width = 2.0 * kFullScale / levels;
      std::vector<double> boundaries(levels - 1);
      for (int k = 1; k < levels; ++k) boundaries[k - 1] = -kFullScale + k * width;
      auto centers = midpoints(boundaries);
      return Quantizer(scheme, std::move(boundaries), std::move(centers));
    }
    case QuantizerScheme::equiprobable: {
      auto boundaries = gaussian_quantiles(levels, sigma);
      auto centers = midpoints(boundaries);
      return Quantizer(scheme, std::move(boundaries), std::move(centers));
    }
    case QuantizerScheme::kmeans:
      if (samples.size() < static_cast<std::size_t>(levels))
        throw std::invalid_argument("k-means quantizer needs at least one sample per interval");
      return lloyd(levels, sigma, samples);
  }
  throw std::invalid_argument("unknown quantizer scheme");
}

namespace {

void require_normalized(const PufResponse& resp) {
  if (!resp.normalized) throw std::logic_error("quantization expects a normalized response");
}

void require_symbol_range(const Quantizer& qz) {
  if (qz.levels() > 256) throw std::invalid_argument("more than 256 intervals need wide symbols");
}

}  // namespace

std::pair<SymbolVector, AnalogHelperData> quantize(const PufResponse& resp, const Quantizer& qz) {
  require_normalized(resp);
  require_symbol_range(qz);
  SymbolVector symbols(kNodes);
  AnalogHelperData helper;
  for (int i = 0; i < kNodes; ++i) {
    int k = qz.interval_of(resp.values[i]);
    symbols[i] = static_cast<Symbol>(k);
    helper.offsets[i] = qz.midpoint(k) - resp.values[i];
  }
  return {std::move(symbols), helper};
}

SymbolVector requantize(const PufResponse& resp, const Quantizer& qz,
                        const AnalogHelperData& w_prime) {
  require_normalized(resp);
  require_symbol_range(qz);
  SymbolVector symbols(kNodes);
  for (int i = 0; i < kNodes; ++i)
    symbols[i] = static_cast<Symbol>(qz.interval_of(resp.values[i] + w_prime.offsets[i]));
  return symbols;
}

std::vector<int> interval_indices(const PufResponse& resp, const Quantizer& qz,
                                  const AnalogHelperData* w_prime) {
  std::vector<int> out(kNodes);
  for (int i = 0; i < kNodes; ++i)
    out[i] = qz.interval_of(resp.values[i] + (w_prime ? w_prime->offsets[i] : 0.0));
  return out;
}

double distortion(const PufResponse& x, const Quantizer& qz) { return distortion(x, x, qz); }

double distortion(const PufResponse& reference, const PufResponse& measured,
                  const Quantizer& qz) {
  double sum = 0;
  for (int i = 0; i < kNodes; ++i) {
    double e = reference.values[i] - qz.centers()[qz.interval_of(measured.values[i])];
    sum += e * e;
  }
  return sum / kNodes;
}

namespace {

template <typename T>
std::size_t shifts(std::span<const T> before, std::span<const T> after) {
  if (before.size() != after.size()) throw std::invalid_argument("symbol vectors differ in length");
  std::size_t count = 0;
  for (std::size_t i = 0; i < before.size(); ++i) count += before[i] != after[i];
  return count;
}

template <typename T>
double ber(std::span<const T> before, std::span<const T> after, int q) {
  if (q < 2 || !std::has_single_bit(static_cast<unsigned>(q)))
    throw std::invalid_argument("Gray mapping needs q to be a power of two");
  if (before.size() != after.size()) throw std::invalid_argument("symbol vectors differ in length");
  if (before.empty()) return 0.0;
  const int bits = std::countr_zero(static_cast<unsigned>(q));
  std::size_t flips = 0;
  for (std::size_t i = 0; i < before.size(); ++i)
    flips += std::popcount(gray_code(static_cast<unsigned>(before[i])) ^
                           gray_code(static_cast<unsigned>(after[i])));
  return static_cast<double>(flips) / static_cast<double>(before.size() * bits);
}

}  // namespace

std::size_t count_interval_shifts(std::span<const Symbol> before, std::span<const Symbol> after) {
  return shifts(before, after);
}
std::size_t count_interval_shifts(std::span<const int> before, std::span<const int> after) {
  return shifts(before, after);
}
double gray_ber(std::span<const Symbol> before, std::span<const Symbol> after, int q) {
  return ber(before, after, q);
}
double gray_ber(std::span<const int> before, std::span<const int> after, int q) {
  return ber(before, after, q);
}

}  // namespace wtpuf
