#pragma once
// Slow, obviously-correct reference implementations shared by the unit tests
// and the acceptance binary.

#include <cmath>
#include <optional>
#include <vector>

#include "wtpuf/galois.hpp"
#include "wtpuf/polar.hpp"

namespace oracle {

using wtpuf::GaloisField;
using wtpuf::Symbol;
using wtpuf::SymbolVector;

// Dense n x n generator F^{(x)m} with F = [[1, 0], [alpha, 1]].
inline std::vector<SymbolVector> kronecker_generator(const GaloisField& f, Symbol alpha, int n) {
  std::vector<SymbolVector> g{{1}};
  for (int size = 1; size < n; size *= 2) {
    const Symbol kernel[2][2] = {{1, 0}, {alpha, 1}};
    std::vector<SymbolVector> next(2 * size, SymbolVector(2 * size, 0));
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int r = 0; r < size; ++r)
          for (int c = 0; c < size; ++c)
            next[a * size + r][b * size + c] = f.mul(kernel[a][b], g[r][c]);
    g = std::move(next);
  }
  return g;
}

// Row vector times matrix over GF(q).
inline SymbolVector dense_encode(const SymbolVector& u, const std::vector<SymbolVector>& g,
                                 const GaloisField& f) {
  SymbolVector c(u.size(), 0);
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < u.size(); ++j) c[j] = f.add(c[j], f.mul(u[i], g[i][j]));
  return c;
}

// Every vector in GF(q)^n, lexicographic with index 0 most significant.
inline std::vector<SymbolVector> all_vectors(int q, int n) {
  std::vector<SymbolVector> out;
  SymbolVector v(n, 0);
  while (true) {
    out.push_back(v);
    int k = n - 1;
    while (k >= 0 && ++v[k] == q) v[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

inline double likelihood(const wtpuf::Likelihoods& ch, const SymbolVector& c) {
  double p = 1;
  for (std::size_t j = 0; j < c.size(); ++j) p *= ch(c[j], static_cast<int>(j));
  return p;
}

// P(u_i = a | y, u_<i = prefix) by summing the joint over all source vectors.
inline std::vector<double> brute_posterior(const wtpuf::PolarKernel& k,
                                           const wtpuf::Likelihoods& ch, const SymbolVector& prefix) {
  const int n = static_cast<int>(ch.cols());
  const int i = static_cast<int>(prefix.size());
  std::vector<double> post(k.q(), 0.0);
  for (const auto& u : all_vectors(k.q(), n)) {
    bool match = true;
    for (int j = 0; j < i && match; ++j) match = u[j] == prefix[j];
    if (!match) continue;
    post[u[i]] += likelihood(ch, wtpuf::polar_encode(u, k));
  }
  double sum = 0;
  for (double p : post) sum += p;
  for (double& p : post) p /= sum;
  return post;
}

// Exhaustive maximum-likelihood source vector consistent with `fixed`.
inline SymbolVector brute_ml(const wtpuf::PolarKernel& k, const wtpuf::Likelihoods& ch,
                             const std::vector<std::optional<Symbol>>& fixed) {
  SymbolVector best;
  double best_p = -1;
  for (const auto& u : all_vectors(k.q(), static_cast<int>(ch.cols()))) {
    bool ok = true;
    for (std::size_t j = 0; j < u.size() && ok; ++j) ok = !fixed[j] || *fixed[j] == u[j];
    if (!ok) continue;
    const double p = likelihood(ch, wtpuf::polar_encode(u, k));
    if (p > best_p) {
      best_p = p;
      best = u;
    }
  }
  return best;
}

// Standard normal quantile by bisection on erfc.
inline double normal_quantile(double p) {
  double lo = -40, hi = 40;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (0.5 * std::erfc(-mid / std::sqrt(2.0)) < p) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Upper 1% point of chi-square with k degrees of freedom (Wilson-Hilferty).
inline double chi2_critical_1pct(int k) {
  const double z = 2.326347874;
  const double a = 2.0 / (9.0 * k);
  return k * std::pow(1 - a + z * std::sqrt(a), 3);
}

}  // namespace oracle
