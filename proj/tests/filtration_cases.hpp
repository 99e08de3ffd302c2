#pragma once

// Random elements of the filtration pieces S_n and T_n.

#include <random>

#include "padyn/mahler.hpp"

namespace testing_helpers {

using padyn::ContextPtr;
using padyn::MahlerPoly;
using padyn::PadicInt;

inline MahlerPoly random_poly(const ContextPtr& c, int degree, std::mt19937_64& rng) {
  std::vector<PadicInt> v;
  for (int k = 0; k <= degree; ++k) v.emplace_back(c, static_cast<long>(rng() % 1000));
  return MahlerPoly(c, v);
}

// c + sum_{i=1}^{n} p^i h_i with deg h_i <= 2i - 1
inline MahlerPoly random_s(const ContextPtr& c, int n, std::mt19937_64& rng) {
  MahlerPoly out = random_poly(c, 0, rng);
  for (int i = 1; i <= n; ++i) out = out + random_poly(c, 2 * i - 1, rng).scaled(PadicInt(c, c->power(i)));
  return out;
}

// S_n + sum_{i=1}^{m} p^i h_i with deg h_i <= 2i - 2
inline MahlerPoly random_t(const ContextPtr& c, int n, int m, std::mt19937_64& rng) {
  MahlerPoly out = random_s(c, n, rng);
  for (int i = 1; i <= m; ++i) out = out + random_poly(c, 2 * i - 2, rng).scaled(PadicInt(c, c->power(i)));
  return out;
}

}  // namespace testing_helpers
