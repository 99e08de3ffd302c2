#pragma once

// Functions on Z_p written in the binomial (Mahler) basis
//   f(z) = sum_k c_k * binom(z, k).
// Coefficients are recovered from values at 0, 1, 2, ... by forward
// differences, which is exact for every Mahler series, finite or not.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "padyn/padic.hpp"

namespace padyn {

// Valuation bounds above this are treated as "no constraint".
inline constexpr int kUnbounded = std::numeric_limits<int>::max() / 4;

class MahlerPoly {
 public:
  MahlerPoly(ContextPtr ctx, std::vector<PadicInt> coeffs);
  static MahlerPoly zero(ContextPtr ctx);
  static MahlerPoly from_integers(ContextPtr ctx, std::span<const long> coeffs);

  const ContextPtr& context() const { return ctx_; }
  const std::vector<PadicInt>& coefficients() const { return coeffs_; }
  // Coefficient of binom(z, k); zero past the stored range.
  PadicInt coefficient(std::size_t k) const;
  // Largest k with a nonzero coefficient, -1 for the zero polynomial.
  int degree() const;

  // Value at an integer z (binomials computed exactly over Z).
  PadicInt evaluate(const mpz_class& z) const;
  // Value at z, taking the residue in [0, p^K) as the integer representative.
  PadicInt evaluate(const PadicInt& z) const;
  // Values at z = 0, ..., count - 1.
  std::vector<PadicInt> values(std::size_t count) const;

  MahlerPoly operator+(const MahlerPoly& o) const;
  MahlerPoly operator-(const MahlerPoly& o) const;
  MahlerPoly scaled(const PadicInt& c) const;
  MahlerPoly reduced(const ContextPtr& coarser) const;
  // Same residues read in a finer context (used to lift data known mod p).
  MahlerPoly lifted(const ContextPtr& finer) const;

  bool operator==(const MahlerPoly& o) const;

 private:
  void trim();

  ContextPtr ctx_;
  std::vector<PadicInt> coeffs_;
};

// k-th forward differences at 0 of the given samples f(0), ..., f(m).
MahlerPoly values_to_mahler(std::span<const PadicInt> vals);

// z -> f(z + 1), i.e. c'_k = c_k + c_{k+1}.
MahlerPoly shift(const MahlerPoly& f);

// Canonical antidifference: h = -sum_k q_k binom(z, k + 1), so that
// h(0) = 0 and h(z + 1) - h(z) = -Q(z).
MahlerPoly solve_difference(const MahlerPoly& Q);

// Product of two Mahler polynomials (computed on sample values).
MahlerPoly multiply(const MahlerPoly& a, const MahlerPoly& b);

// Certified lower bound on the valuation of the index-k Mahler coefficient:
// ceil((k + 1 - shift) / 2) for k >= 1. When `vanishes` is set, every
// coefficient past the stored ones is exactly zero.
struct TailRule {
  int shift = 0;
  bool vanishes = false;

  int at(std::size_t k) const;
  bool operator==(const TailRule&) const = default;
};

class MahlerSeries {
 public:
  MahlerSeries(ContextPtr ctx, std::vector<PadicInt> coeffs, TailRule tail);
  static MahlerSeries from_poly(const MahlerPoly& f);

  const ContextPtr& context() const { return ctx_; }
  const std::vector<PadicInt>& coefficients() const { return coeffs_; }
  const TailRule& tail_rule() const { return tail_; }
  // Index T of the last stored coefficient.
  std::size_t truncation() const { return coeffs_.size() - 1; }
  // True when every coefficient past T is certified to vanish mod p^K.
  bool tail_certified() const;

 private:
  ContextPtr ctx_;
  std::vector<PadicInt> coeffs_;
  TailRule tail_;
};

// sum_{k <= T} b_k binom(z, k) mod p^K. Throws TailNotCertified when the
// untracked coefficients could still contribute at precision K.
PadicInt evaluate_series(const MahlerSeries& f, const mpz_class& z);
PadicInt evaluate_series(const MahlerSeries& f, const PadicInt& z);

// Monomial expansion f(z) = sum_m a_m z^m. Coefficient a_m is known modulo
// p^precision[m]; every a_m with m past the stored range has valuation at
// least tail_bound.
struct PowerSeries {
  ContextPtr ctx;
  std::vector<PadicInt> coeffs;
  std::vector<int> precision;
  int tail_bound = kUnbounded;
};

// Signed Stirling numbers of the first kind s(k, m), 0 <= m <= k <= n.
std::vector<std::vector<mpz_class>> stirling_first_kind(std::size_t n);
// Exponent of p in k!.
int factorial_valuation(std::uint64_t k, std::uint64_t p);

// a_m = sum_{k >= m} b_k s(k, m) / k!. Throws PrecisionExhausted when some
// certified precision drops below `floor`, ConditionViolated when a stored
// coefficient is too small in valuation for the division by k! to stay in Z_p.
PowerSeries to_power_series(const MahlerSeries& f, int floor = 1);

// Decomposition witnessing membership in the filtration piece
//   T_n = { c + sum_{i>=1} p^i q_i : deg q_i <= 2i - 1 (i <= n), deg q_i <= 2i - 2 (i > n) }.
// levels[i] holds q_i (levels[0] is the constant c).
struct FiltrationDecomposition {
  std::vector<MahlerPoly> levels;
};

// Index i at which binom(z, k) first becomes available in T_n.
int filtration_level(std::size_t k, int n);
// Greedy extraction: the index-k coefficient is assigned to level
// filtration_level(k, n). Returns nullopt when some coefficient is not
// divisible by the required power of p.
std::optional<FiltrationDecomposition> decompose_filtration(const MahlerPoly& f, int n);

}  // namespace padyn
