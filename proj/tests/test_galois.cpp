#include <doctest.h>

#include <stdexcept>

#include "wtpuf/galois.hpp"

using wtpuf::GaloisField;
using wtpuf::Symbol;

TEST_CASE("GF(8) hand-checked values") {
  GaloisField f(3);
  CHECK(f.polynomial() == 0b1011u);
  CHECK(f.add(3, 5) == 6);
  CHECK(f.mul(3, 3) == 5);  // (x+1)^2 = x^2+1
  CHECK(f.inv(2) == 5);     // x * (x^2+1) = x^3+x = 1
  CHECK(f.inv(1) == 1);
  CHECK_THROWS_AS(f.inv(0), std::domain_error);
}

TEST_CASE("default polynomials") {
  CHECK(GaloisField::default_polynomial(4) == 0b10011u);
  CHECK(GaloisField::default_polynomial(5) == 0b100101u);
  CHECK(GaloisField::with_order(32).degree() == 5);
  CHECK_THROWS(GaloisField::with_order(12));
  CHECK_THROWS(GaloisField(6));
  CHECK_THROWS(GaloisField(3, 0b1111));  // x^3+x^2+x+1 = (x+1)^3, reducible
  CHECK_THROWS(GaloisField(4, 0b11111)); // irreducible but not primitive
}

TEST_CASE("field axioms hold exhaustively up to q = 32") {
  for (int m = 1; m <= 5; ++m) {
    const GaloisField f(m);
    const int q = f.order();
    CAPTURE(q);
    for (int a = 0; a < q; ++a) {
      CHECK(f.add(0, a) == a);
      CHECK(f.add(a, a) == 0);
      CHECK(f.mul(a, 1) == a);
      CHECK(f.mul(0, a) == 0);
      if (a) {
        CHECK(f.mul(a, f.inv(a)) == 1);
        CHECK(f.exp(f.log(a)) == a);
      }
      for (int b = 0; b < q; ++b) {
        CHECK(f.mul(a, b) == f.mul(b, a));
        CHECK(f.mul(a, b) == wtpuf::schoolbook_mul(a, b, m, f.polynomial()));
        if (b) CHECK(f.mul(f.div(a, b), b) == a);
        for (int c = 0; c < q; ++c) {
          CHECK(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
          CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
        }
      }
    }
  }
}

TEST_CASE("x generates the multiplicative group") {
  for (int m = 2; m <= 5; ++m) {
    const GaloisField f(m);
    CHECK(wtpuf::default_alpha(f) == 2);
    std::vector<bool> seen(f.order(), false);
    for (int k = 0; k < f.order() - 1; ++k) seen[f.exp(k)] = true;
    for (int a = 1; a < f.order(); ++a) CHECK(seen[a]);
  }
  CHECK(wtpuf::default_alpha(GaloisField(1)) == 1);
}
