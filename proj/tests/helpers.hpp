#pragma once

#include <initializer_list>
#include <random>
#include <utility>

#include "padyn/poly.hpp"

namespace testing_helpers {

using Term = std::pair<padyn::Monomial, long>;

inline padyn::MultiPoly poly(const padyn::ContextPtr& c, std::size_t g, int cap, std::initializer_list<Term> terms) {
  padyn::MultiPoly f(c, g, cap);
  for (const auto& [m, coeff] : terms) f.add_term(m, mpz_class(coeff));
  return f;
}

inline padyn::PadicVec vec(const padyn::ContextPtr& c, std::initializer_list<long> xs) {
  std::vector<padyn::PadicInt> v;
  for (long x : xs) v.emplace_back(c, x);
  return padyn::PadicVec(std::move(v));
}

using padyn::ContextPtr;
using padyn::Monomial;
using padyn::MultiPoly;
using padyn::PadicInt;
using padyn::PadicVec;
using padyn::PolyMap;

inline PolyMap random_map(const ContextPtr& c, std::size_t g, int max_deg, int cap, std::mt19937_64& rng,
                   bool divisible_constant) {
  std::vector<MultiPoly> comps;
  const long p = static_cast<long>(c->prime());
  for (std::size_t i = 0; i < g; ++i) {
    MultiPoly f(c, g, cap);
    for (int t = 0; t < 6; ++t) {
      Monomial m(g, 0);
      int budget = static_cast<int>(rng() % (max_deg + 1));
      for (int s = 0; s < budget; ++s) m[rng() % g]++;
      f.add_term(m, mpz_class(static_cast<long>(rng() % 1000) - 500));
    }
    f.add_term(Monomial(g, 0), mpz_class(-f.constant_term().residue()));
    f.add_term(Monomial(g, 0), mpz_class(divisible_constant ? p * static_cast<long>(rng() % 50) : static_cast<long>(rng() % 50)));
    comps.push_back(f);
  }
  return PolyMap(std::move(comps));
}

inline PadicVec random_point(const ContextPtr& c, std::size_t g, std::mt19937_64& rng) {
  gmp_randclass r(gmp_randinit_default);
  r.seed(static_cast<unsigned long>(rng()));
  std::vector<PadicInt> v;
  for (std::size_t i = 0; i < g; ++i) v.emplace_back(c, r.get_z_range(c->modulus()));
  return PadicVec(std::move(v));
}

}  // namespace testing_helpers
