#pragma once

// Sparse multivariate polynomials over Z_p / p^K with total-degree
// truncation, and polynomial self-maps of Z_p^g built from them.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "padyn/padic.hpp"

namespace padyn {

using Monomial = std::vector<std::uint32_t>;

int total_degree(const Monomial& m);
std::string monomial_to_string(const Monomial& m);

class MultiPoly {
 public:
  using Terms = std::map<Monomial, mpz_class>;

  MultiPoly(ContextPtr ctx, std::size_t num_vars, int degree_cap);

  static MultiPoly constant(ContextPtr ctx, std::size_t num_vars, int degree_cap, const PadicInt& c);
  static MultiPoly variable(ContextPtr ctx, std::size_t num_vars, int degree_cap, std::size_t index);

  const ContextPtr& context() const { return ctx_; }
  std::size_t num_vars() const { return num_vars_; }
  int degree_cap() const { return degree_cap_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;

  // Adds coeff * x^m. Terms above the degree cap and zero residues are dropped.
  void add_term(const Monomial& m, const mpz_class& coeff);
  PadicInt coefficient(const Monomial& m) const;
  PadicInt constant_term() const;

  PadicInt evaluate(const PadicVec& point) const;
  MultiPoly derivative(std::size_t var) const;
  MultiPoly scaled(const PadicInt& c) const;
  // Same polynomial viewed in a coarser context (same p, lower precision).
  MultiPoly reduced(const ContextPtr& coarser) const;
  MultiPoly with_degree_cap(int cap) const;

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  // Product truncated at the degree cap.
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);

  bool operator==(const MultiPoly& o) const;

 private:
  void check_compatible(const MultiPoly& o) const;

  ContextPtr ctx_;
  std::size_t num_vars_;
  int degree_cap_;
  Terms terms_;
};

inline PadicInt evaluate(const MultiPoly& f, const PadicVec& v) { return f.evaluate(v); }

// A self-map of Z_p^g given by g polynomials in g variables.
class PolyMap {
 public:
  explicit PolyMap(std::vector<MultiPoly> components);
  static PolyMap identity(ContextPtr ctx, std::size_t g, int degree_cap);

  std::size_t dimension() const { return components_.size(); }
  const ContextPtr& context() const { return components_.front().context(); }
  int degree_cap() const { return components_.front().degree_cap(); }
  const MultiPoly& operator[](std::size_t i) const { return components_[i]; }
  const std::vector<MultiPoly>& components() const { return components_; }

  PadicVec evaluate(const PadicVec& point) const;
  PolyMap reduced(const ContextPtr& coarser) const;
  PolyMap with_degree_cap(int cap) const;

  // Constant vector C and linear part L of the map x -> C + L x + (higher).
  PadicVec constant_part() const;
  PadicMatrix linear_part() const;

  bool operator==(const PolyMap& o) const { return components_ == o.components_; }

 private:
  std::vector<MultiPoly> components_;
};

// f(h_1, ..., h_g), truncated at h's degree cap. All of f is used, so f may
// carry a larger cap than h (needed when h has constant terms).
MultiPoly compose(const MultiPoly& f, const PolyMap& h);
PolyMap compose(const PolyMap& f, const PolyMap& h);
// m-fold composite f o ... o f.
PolyMap iterate_map(const PolyMap& f, std::uint64_t m);

// Matrix of formal partial derivatives evaluated at v; entry (i, j) is
// d f_i / d x_j.
PadicMatrix jacobian_at(const PolyMap& f, const PadicVec& v);

// f_i(x) == x_i (mod p) coefficientwise for every component.
bool check_condition_a(const PolyMap& f);
// Every degree-d >= 2 coefficient has valuation >= d - 1.
bool check_condition_b(const PolyMap& f);
// Human-readable description of the first offending term, if any.
std::optional<std::string> condition_a_violation(const PolyMap& f);
std::optional<std::string> condition_b_violation(const PolyMap& f);

// F_i(T) = H_i(p T) / p. Requires every constant term of H to be divisible
// by p (ConstantTermNotDivisible otherwise). The division by p costs one
// digit, so F lives at precision K - 1 where K is H's precision.
PolyMap rescale_conjugate(const PolyMap& H);

}  // namespace padyn
