#pragma once

// Random witnesses u(z) * prod (z - r_i) with u a unit-valued polynomial, in
// both the monomial and the Mahler form. u(z) == u_0 mod p, so the only
// zeros in Z_p are the r_i.

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "padyn/mahler.hpp"

namespace testing_helpers {

struct RootedWitness {
  std::vector<long> roots;
  std::vector<mpz_class> monomial;  // c_0 .. c_d
  padyn::PowerSeries power;
  padyn::MahlerSeries mahler;
};

inline std::vector<mpz_class> poly_mul(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) {
  std::vector<mpz_class> out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

inline RootedWitness rooted_witness(const padyn::ContextPtr& ctx, std::mt19937_64& rng, int max_roots = 3) {
  const long p = static_cast<long>(ctx->prime());
  std::uniform_int_distribution<int> count_dist(0, max_roots);
  std::uniform_int_distribution<long> root_dist(-8, 25), unit_dist(1, p - 1), small(-3, 3);

  std::set<long> roots;
  const int count = count_dist(rng);
  while (static_cast<int>(roots.size()) < count) roots.insert(root_dist(rng));

  std::vector<mpz_class> f{unit_dist(rng), p * small(rng), p * small(rng)};
  for (long r : roots) f = poly_mul(f, {mpz_class(-r), mpz_class(1)});

  padyn::PowerSeries ps;
  ps.ctx = ctx;
  for (const auto& c : f) {
    ps.coeffs.emplace_back(ctx, c);
    ps.precision.push_back(ctx->precision());
  }
  ps.tail_bound = padyn::kUnbounded;

  std::vector<padyn::PadicInt> values;
  for (std::size_t z = 0; z < f.size(); ++z) {
    mpz_class v = 0, zp = 1;
    for (const auto& c : f) {
      v += c * zp;
      zp *= static_cast<long>(z);
    }
    values.emplace_back(ctx, v);
  }
  padyn::MahlerSeries ms(ctx, padyn::values_to_mahler(values).coefficients(), padyn::TailRule{0, true});
  return {std::vector<long>(roots.begin(), roots.end()), f, ps, ms};
}

}  // namespace testing_helpers
