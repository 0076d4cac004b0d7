#include "wtpuf/galois.hpp"

#include <stdexcept>
#include <string>

namespace wtpuf {

unsigned GaloisField::default_polynomial(int m) {
  switch (m) {
    case 1: return 0b11;      // x + 1
    case 2: return 0b111;     // x^2 + x + 1
    case 3: return 0b1011;    // x^3 + x + 1
    case 4: return 0b10011;   // x^4 + x + 1
    case 5: return 0b100101;  // x^5 + x^2 + 1
    default:
      throw std::invalid_argument("unsupported field degree " + std::to_string(m));
  }
}

GaloisField::GaloisField(int m) : GaloisField(m, default_polynomial(m)) {}

GaloisField::GaloisField(int m, unsigned polynomial)
    : m_(m), q_(1 << m), poly_(polynomial) {
  if (m < 1 || m > 5) throw std::invalid_argument("field degree must be in [1, 5]");
  if ((polynomial >> m) != 1u)
    throw std::invalid_argument("polynomial degree does not match field degree");

  log_.assign(q_, -1);
  exp_.assign(2 * (q_ - 1), 0);
  unsigned b = 1;
  for (int k = 0; k < q_ - 1; ++k) {
    if (log_[b] != -1) throw std::invalid_argument("polynomial is not primitive");
    log_[b] = k;
    exp_[k] = static_cast<Symbol>(b);
    exp_[k + q_ - 1] = static_cast<Symbol>(b);
    b <<= 1;
    if (b & static_cast<unsigned>(q_)) b ^= polynomial;
  }
  if (b != 1) throw std::invalid_argument("polynomial is not primitive");
  log_[0] = 0;  // never read through mul(); keeps the table total
}

GaloisField GaloisField::with_order(int q) {
  for (int m = 1; m <= 5; ++m)
    if (q == (1 << m)) return GaloisField(m);
  throw std::invalid_argument("field order must be a power of two in [2, 32], got " +
                              std::to_string(q));
}

Symbol GaloisField::inv(Symbol a) const {
  if (a == 0) throw std::domain_error("zero has no multiplicative inverse");
  return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

Symbol schoolbook_mul(Symbol a, Symbol b, int m, unsigned polynomial) {
  unsigned product = 0;
  for (int bit = 0; bit < m; ++bit)
    if (b & (1u << bit)) product ^= static_cast<unsigned>(a) << bit;
  for (int bit = 2 * m - 2; bit >= m; --bit)
    if (product & (1u << bit)) product ^= polynomial << (bit - m);
  return static_cast<Symbol>(product);
}

Symbol default_alpha(const GaloisField& field) { return field.order() > 2 ? 2 : 1; }

}  // namespace wtpuf
