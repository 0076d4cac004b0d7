#pragma once

#include <cstdint>
#include <vector>

namespace wtpuf {

/// A symbol of GF(2^m) in bit-vector (polynomial basis) representation.
using Symbol = std::uint8_t;

/// Binary extension field GF(2^m), 1 <= m <= 5, backed by log/antilog tables.
///
/// Immutable after construction; all member functions are pure and the
/// object can be shared between threads.
class GaloisField {
 public:
  /// Field of degree m with its default primitive polynomial.
  explicit GaloisField(int m);
  /// Field of degree m reduced modulo `polynomial` (bit mask including x^m).
  /// Throws std::invalid_argument unless `polynomial` is primitive.
  GaloisField(int m, unsigned polynomial);

  /// Field with q = 2^m elements.
  static GaloisField with_order(int q);
  static unsigned default_polynomial(int m);

  int degree() const { return m_; }
  int order() const { return q_; }
  unsigned polynomial() const { return poly_; }
  bool contains(unsigned a) const { return a < static_cast<unsigned>(q_); }

  Symbol add(Symbol a, Symbol b) const { return a ^ b; }
  Symbol sub(Symbol a, Symbol b) const { return a ^ b; }

  Symbol mul(Symbol a, Symbol b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }

  /// Multiplicative inverse; throws std::domain_error for zero.
  Symbol inv(Symbol a) const;
  Symbol div(Symbol a, Symbol b) const { return mul(a, inv(b)); }

  /// Discrete log base the primitive element x; a must be nonzero.
  int log(Symbol a) const { return log_[a]; }
  /// x^k for any k >= 0.
  Symbol exp(int k) const { return exp_[k % (q_ - 1)]; }

 private:
  int m_;
  int q_;
  unsigned poly_;
  std::vector<int> log_;
  std::vector<Symbol> exp_;  // doubled so mul() never reduces the exponent
};

/// Carry-less multiply of a and b followed by reduction modulo `polynomial`.
/// Slow reference path used to cross-check the table arithmetic.
Symbol schoolbook_mul(Symbol a, Symbol b, int m, unsigned polynomial);

/// The default polar kernel parameter: the element x (or 1 in GF(2)).
Symbol default_alpha(const GaloisField& field);

}  // namespace wtpuf
