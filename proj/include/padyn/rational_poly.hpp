#pragma once

// Exact multivariate polynomials over Q. These hold the user's model; the
// p-adic side only ever sees reductions of them.

#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "padyn/poly.hpp"

namespace padyn {

using RationalPoint = std::vector<mpq_class>;

class RationalPoly {
 public:
  using Terms = std::map<Monomial, mpq_class>;

  explicit RationalPoly(std::size_t num_vars = 0) : num_vars_(num_vars) {}
  static RationalPoly constant(std::size_t num_vars, const mpq_class& c);
  static RationalPoly variable(std::size_t num_vars, std::size_t index);

  std::size_t num_vars() const { return num_vars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;

  void add_term(const Monomial& m, const mpq_class& c);

  mpq_class evaluate(const RationalPoint& x) const;
  // Value mod p of the reduction; the caller guarantees p-integral coefficients
  // and a p-integral point.
  std::uint64_t evaluate_mod_p(const std::vector<std::uint64_t>& x, std::uint64_t p) const;
  RationalPoly derivative(std::size_t var) const;

  // Coefficients mapped into Z_p / p^K; every term is kept (cap = max(degree, min_cap)).
  // Throws NotAUnit when p divides a denominator.
  MultiPoly to_padic(const ContextPtr& ctx, int min_cap = 0) const;
  // True when no denominator is divisible by p.
  bool p_integral(std::uint64_t p) const;

  RationalPoly& operator+=(const RationalPoly& o);
  RationalPoly& operator-=(const RationalPoly& o);
  friend RationalPoly operator+(RationalPoly a, const RationalPoly& b) { return a += b; }
  friend RationalPoly operator-(RationalPoly a, const RationalPoly& b) { return a -= b; }
  friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b);

  bool operator==(const RationalPoly& o) const { return num_vars_ == o.num_vars_ && terms_ == o.terms_; }

  std::string to_string() const;

 private:
  std::size_t num_vars_;
  Terms terms_;
};

using RationalMap = std::vector<RationalPoly>;

// f(h_1, ..., h_g) exactly, no truncation.
RationalPoly compose(const RationalPoly& f, const RationalMap& h);
RationalMap compose(const RationalMap& f, const RationalMap& h);
RationalMap identity_map(std::size_t g);
RationalPoint evaluate(const RationalMap& f, const RationalPoint& x);

// x mod p for a p-integral rational.
std::uint64_t reduce_mod_p(const mpq_class& x, std::uint64_t p);
bool p_integral(const mpq_class& x, std::uint64_t p);

}  // namespace padyn
