#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "wtpuf/galois.hpp"
#include "wtpuf/quantize.hpp"

namespace wtpuf {

/// Per-position soft input: column j holds P(y_j | c_j = a) for a = 0..q-1.
using Likelihoods = Eigen::MatrixXd;

/// The 2x2 kernel [[1, 0], [alpha, 1]] over GF(q), alpha != 0.
class PolarKernel {
 public:
  PolarKernel(GaloisField field, Symbol alpha);

  const GaloisField& field() const { return field_; }
  Symbol alpha() const { return alpha_; }
  int q() const { return field_.order(); }
  Symbol times_alpha(Symbol b) const { return alpha_mul_[b]; }

 private:
  GaloisField field_;
  Symbol alpha_;
  std::vector<Symbol> alpha_mul_;
};

/// c = u * F(alpha)^{(x) log2 n}, via the butterfly network.
/// Throws std::invalid_argument unless n is a power of two.
SymbolVector polar_encode(std::span<const Symbol> u, const PolarKernel& kernel);

/// One successive-cancellation decoding path.
///
/// Leaves must be visited in order: leaf(i) computes the posterior of u_i
/// given the channel and the committed u_0..u_{i-1}; commit(i, s) fixes u_i
/// and updates the partial sums. Messages are renormalized per position.
class ScPath {
 public:
  ScPath(const PolarKernel& kernel, const Likelihoods& channel);

  /// Normalized P(u_i = a | y, u_<i) for a = 0..q-1.
  std::span<const double> leaf(int i);
  void commit(int i, Symbol s);

  int length() const { return n_; }
  const SymbolVector& decisions() const { return decisions_; }
  /// Re-encoded decisions; complete once the last leaf is committed.
  const SymbolVector& codeword() const { return codeword_; }

 private:
  const double* input(int depth) const;
  double* block(int depth);
  void check_node(int depth);
  void variable_node(int depth);

  const PolarKernel* kernel_;
  const Likelihoods* channel_;
  int n_;
  int m_;
  int q_;
  int next_ = 0;
  Eigen::MatrixXd messages_;  // q x (n-1): depth d occupies n>>d columns
  SymbolVector partial_;      // left-child partial sums, same layout
  SymbolVector decisions_;
  SymbolVector codeword_;
  SymbolVector scratch_;
};

/// Positions carrying a known value (frozen); nullopt positions are decided.
using FixedSymbols = std::vector<std::optional<Symbol>>;

/// Hard decision rule: argmax, lowest symbol on ties.
Symbol hard_decision(std::span<const double> posterior);

SymbolVector sc_decode(const PolarKernel& kernel, const Likelihoods& channel,
                       std::span<const std::optional<Symbol>> fixed);

/// Genie-aided SC: at each position the decoder's hard decision is reported
/// through `on_leaf(i, posterior, decision)` and then replaced by truth[i].
void genie_sc_decode(const PolarKernel& kernel, const Likelihoods& channel,
                     std::span<const Symbol> truth,
                     const std::function<void(int, std::span<const double>, Symbol)>& on_leaf);

class DecodeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SclOptions {
  int list_size = 8;
  /// Drop paths whose log-metric trails the best by more than this.
  std::optional<double> prune_delta;
  /// Candidate selection on the final list (e.g. a digest check).
  std::function<bool(std::span<const Symbol>)> acceptor;
};

struct SclResult {
  SymbolVector u;
  double metric = 0;     ///< log P(u | y) up to a common constant
  bool accepted = false; ///< true when the acceptor approved `u`
  std::size_t final_list = 0;
};

/// Successive-cancellation list decoding with log-domain path metrics.
/// Throws DecodeFailure if pruning empties the list.
SclResult scl_decode(const PolarKernel& kernel, const Likelihoods& channel,
                     std::span<const std::optional<Symbol>> fixed, const SclOptions& options);

}  // namespace wtpuf
