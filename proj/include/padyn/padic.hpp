#pragma once

// Fixed-precision arithmetic in Z_p (residues modulo p^K) together with the
// small amount of linear algebra over Z_p and F_p that the dynamics needs.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "padyn/errors.hpp"

namespace padyn {

bool is_prime(std::uint64_t n);

// Precision model shared by every value that lives in Z_p / p^K Z_p.
class PadicContext {
 public:
  static std::shared_ptr<const PadicContext> make(std::uint64_t p, int precision);

  std::uint64_t prime() const { return p_; }
  int precision() const { return precision_; }
  const mpz_class& modulus() const { return powers_.back(); }
  // p^e for 0 <= e <= K.
  const mpz_class& power(int e) const;

  bool operator==(const PadicContext& other) const {
    return p_ == other.p_ && precision_ == other.precision_;
  }

  PadicContext(std::uint64_t p, int precision);

 private:
  std::uint64_t p_;
  int precision_;
  std::vector<mpz_class> powers_;
};

using ContextPtr = std::shared_ptr<const PadicContext>;

bool same_context(const ContextPtr& a, const ContextPtr& b);
void require_same_context(const ContextPtr& a, const ContextPtr& b);

// Result of a valuation query. A residue that is 0 mod p^K reports K with
// `at_precision_floor` set: the true valuation is only known to be >= K.
struct Valuation {
  int value = 0;
  bool at_precision_floor = false;

  bool operator==(const Valuation&) const = default;
};

// Valuation of an exact integer, capped at `cap`; 0 reports `cap`.
int valuation_of(const mpz_class& n, std::uint64_t p, int cap);

class PadicInt {
 public:
  PadicInt(ContextPtr ctx, const mpz_class& value);
  PadicInt(ContextPtr ctx, long value);

  static PadicInt zero(ContextPtr ctx) { return PadicInt(std::move(ctx), 0L); }
  static PadicInt one(ContextPtr ctx) { return PadicInt(std::move(ctx), 1L); }
  // a/b with b a p-adic unit. Throws NotAUnit when p divides b.
  static PadicInt from_rational(ContextPtr ctx, const mpq_class& q);

  const ContextPtr& context() const { return ctx_; }
  const mpz_class& residue() const { return residue_; }
  bool is_zero() const { return residue_ == 0; }

  Valuation valuation() const;
  bool is_unit() const;
  PadicInt inverse() const;
  // Same element viewed at a lower (or equal) precision.
  PadicInt reduced(const ContextPtr& coarser) const;

  PadicInt& operator+=(const PadicInt& o);
  PadicInt& operator-=(const PadicInt& o);
  PadicInt& operator*=(const PadicInt& o);

  friend PadicInt operator+(PadicInt a, const PadicInt& b) { return a += b; }
  friend PadicInt operator-(PadicInt a, const PadicInt& b) { return a -= b; }
  friend PadicInt operator*(PadicInt a, const PadicInt& b) { return a *= b; }
  PadicInt operator-() const;

  bool operator==(const PadicInt& o) const;

 private:
  void normalize();

  ContextPtr ctx_;
  mpz_class residue_;
};

std::ostream& operator<<(std::ostream& os, const PadicInt& x);

inline Valuation valuation(const PadicInt& a) { return a.valuation(); }
inline PadicInt invert(const PadicInt& a) { return a.inverse(); }

class PadicVec {
 public:
  PadicVec(ContextPtr ctx, std::size_t size);
  explicit PadicVec(std::vector<PadicInt> entries);
  static PadicVec from_integers(ContextPtr ctx, std::span<const long> values);

  const ContextPtr& context() const { return ctx_; }
  std::size_t size() const { return entries_.size(); }
  const PadicInt& operator[](std::size_t i) const { return entries_[i]; }
  void set(std::size_t i, PadicInt value);
  const std::vector<PadicInt>& entries() const { return entries_; }

  bool operator==(const PadicVec& o) const { return entries_ == o.entries_; }

 private:
  ContextPtr ctx_;
  std::vector<PadicInt> entries_;
};

// Square g x g matrix over Z_p, row major.
class PadicMatrix {
 public:
  PadicMatrix(ContextPtr ctx, std::size_t g);
  static PadicMatrix identity(ContextPtr ctx, std::size_t g);
  static PadicMatrix from_integers(ContextPtr ctx, std::size_t g, std::span<const long> row_major);

  const ContextPtr& context() const { return ctx_; }
  std::size_t dimension() const { return g_; }
  const PadicInt& at(std::size_t r, std::size_t c) const { return entries_[r * g_ + c]; }
  void set(std::size_t r, std::size_t c, PadicInt value);

  PadicMatrix operator*(const PadicMatrix& o) const;
  PadicVec operator*(const PadicVec& v) const;
  bool operator==(const PadicMatrix& o) const { return g_ == o.g_ && entries_ == o.entries_; }

 private:
  ContextPtr ctx_;
  std::size_t g_;
  std::vector<PadicInt> entries_;
};

// det(L) mod p, in [0, p).
std::uint64_t determinant_mod_p(const PadicMatrix& L);
bool matrix_invertible_mod_p(const PadicMatrix& L);

// Least M >= 1 such that the affine map x -> C + L x on F_p^g composed M
// times is the identity. Throws NotInvertible when L is singular mod p.
std::uint64_t affine_order_mod_p(const PadicMatrix& L, const PadicVec& C);

}  // namespace padyn
