#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wtpuf/galois.hpp"
#include "wtpuf/pufsim.hpp"
#include "wtpuf/quantize.hpp"

namespace wtpuf {

enum class ChannelRole { legitimate, attacker };

std::string to_string(ChannelRole role);
ChannelRole parse_role(const std::string& name);

/// q-ary discrete memoryless channel, matrix(y, c) = P(y | c).
struct DmcModel {
  int q = 0;
  Eigen::MatrixXd matrix;
  /// Empirical distribution of the enrolled symbol c.
  Eigen::VectorXd input_prior;
  ChannelRole label = ChannelRole::legitimate;
  bool with_helper_data = true;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument unless both matrix columns and the prior
  /// are probability vectors (tolerance 1e-9).
  void validate() const;

  static DmcModel identity(int q);
  static DmcModel uniform(int q);
  /// Symbol kept with probability 1 - p, otherwise uniform over the other q-1.
  static DmcModel symmetric(int q, double p);
};

/// Monte-Carlo estimate of the symbol transition matrix: `trials` devices
/// are enrolled, quantized, remeasured under `cfg` and requantized (with or
/// without W'). Transitions are pooled over all nodes and smoothed with one
/// pseudo-count per cell.
DmcModel estimate_channel(const EnvironmentConfig& cfg, const Quantizer& qz, std::uint64_t trials,
                          bool use_w_prime, std::uint64_t seed,
                          unsigned threads = default_threads());

/// Row-normalized likelihood vector [P(y|0), ..., P(y|q-1)] / sum.
Eigen::VectorXd channel_llvec(Symbol y, const DmcModel& model);

/// Likelihood of codeword symbol c after the code offset: the decoder sees
/// w = c + x (stored) and the requantized y ~ P(.|x), so
/// L(c) = P(y | c + w), normalized.
Eigen::VectorXd code_offset_llvec(Symbol y, Symbol w, const DmcModel& model);

/// Draws channel outputs from a DmcModel.
class ChannelSampler {
 public:
  explicit ChannelSampler(const DmcModel& model);

  Symbol sample_input(Rng& rng) const;
  Symbol sample_output(Symbol input, Rng& rng) const;

  /// Simulates the code-offset read-out of `codeword` and returns the q x n
  /// likelihood matrix the decoder sees.
  Eigen::MatrixXd observe(std::span<const Symbol> codeword, Rng& rng) const;

  const DmcModel& model() const { return model_; }

 private:
  DmcModel model_;
  std::vector<double> prior_cdf_;
  std::vector<double> column_cdf_;  // q columns of q cumulative entries
};

/// Plot-ready CSV: header `y,c,p`, one row per matrix entry.
void write_channel_csv(std::ostream& out, const DmcModel& model);

}  // namespace wtpuf
