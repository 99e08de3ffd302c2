#include "padyn/padic.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace padyn {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

PadicContext::PadicContext(std::uint64_t p, int precision) : p_(p), precision_(precision) {
  if (!is_prime(p) || p < 5) {
    throw std::invalid_argument("PadicContext: p must be a prime >= 5, got " + std::to_string(p));
  }
  if (precision < 1) {
    throw std::invalid_argument("PadicContext: precision must be >= 1");
  }
  powers_.reserve(static_cast<std::size_t>(precision) + 1);
  mpz_class acc = 1;
  for (int e = 0; e <= precision; ++e) {
    powers_.push_back(acc);
    acc *= static_cast<unsigned long>(p);
  }
}

std::shared_ptr<const PadicContext> PadicContext::make(std::uint64_t p, int precision) {
  return std::make_shared<const PadicContext>(p, precision);
}

const mpz_class& PadicContext::power(int e) const {
  if (e < 0 || e > precision_) {
    throw std::out_of_range("PadicContext::power: exponent out of range");
  }
  return powers_[static_cast<std::size_t>(e)];
}

bool same_context(const ContextPtr& a, const ContextPtr& b) {
  return a == b || (a && b && *a == *b);
}

void require_same_context(const ContextPtr& a, const ContextPtr& b) {
  if (!same_context(a, b)) {
    throw ContextMismatch("operands live in different p-adic contexts");
  }
}

int valuation_of(const mpz_class& n, std::uint64_t p, int cap) {
  if (n == 0) return cap;
  mpz_class rest = n;
  int v = 0;
  while (v < cap && mpz_divisible_ui_p(rest.get_mpz_t(), static_cast<unsigned long>(p))) {
    mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), static_cast<unsigned long>(p));
    ++v;
  }
  return v;
}

PadicInt::PadicInt(ContextPtr ctx, const mpz_class& value) : ctx_(std::move(ctx)), residue_(value) {
  normalize();
}

PadicInt::PadicInt(ContextPtr ctx, long value) : ctx_(std::move(ctx)), residue_(value) { normalize(); }

void PadicInt::normalize() {
  mpz_fdiv_r(residue_.get_mpz_t(), residue_.get_mpz_t(), ctx_->modulus().get_mpz_t());
}

PadicInt PadicInt::from_rational(ContextPtr ctx, const mpq_class& q) {
  const mpz_class& den = q.get_den();
  if (mpz_divisible_ui_p(den.get_mpz_t(), static_cast<unsigned long>(ctx->prime()))) {
    std::ostringstream msg;
    msg << "denominator of " << q.get_str() << " is divisible by p = " << ctx->prime();
    throw NotAUnit(msg.str());
  }
  PadicInt d(ctx, den);
  return PadicInt(ctx, q.get_num()) * d.inverse();
}

Valuation PadicInt::valuation() const {
  const int K = ctx_->precision();
  if (residue_ == 0) return {K, true};
  return {valuation_of(residue_, ctx_->prime(), K), false};
}

bool PadicInt::is_unit() const {
  return !mpz_divisible_ui_p(residue_.get_mpz_t(), static_cast<unsigned long>(ctx_->prime()));
}

PadicInt PadicInt::inverse() const {
  if (!is_unit()) {
    throw NotAUnit("cannot invert " + residue_.get_str() + ": positive valuation");
  }
  // Inverse mod p, then Newton lifting x <- x (2 - a x), doubling the
  // number of correct digits each round.
  const unsigned long p = static_cast<unsigned long>(ctx_->prime());
  mpz_class x;
  mpz_class a_mod_p = residue_ % p;
  mpz_invert(x.get_mpz_t(), a_mod_p.get_mpz_t(), mpz_class(p).get_mpz_t());
  const int K = ctx_->precision();
  for (int digits = 1; digits < K;) {
    digits = std::min(K, 2 * digits);
    const mpz_class& m = ctx_->power(digits);
    mpz_class ax = residue_ * x;
    x = x * (2 - ax);
    mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  }
  return PadicInt(ctx_, x);
}

PadicInt PadicInt::reduced(const ContextPtr& coarser) const {
  if (coarser->prime() != ctx_->prime() || coarser->precision() > ctx_->precision()) {
    throw ContextMismatch("reduced: target context must share p and have lower precision");
  }
  return PadicInt(coarser, residue_);
}

PadicInt& PadicInt::operator+=(const PadicInt& o) {
  require_same_context(ctx_, o.ctx_);
  residue_ += o.residue_;
  if (residue_ >= ctx_->modulus()) residue_ -= ctx_->modulus();
  return *this;
}

PadicInt& PadicInt::operator-=(const PadicInt& o) {
  require_same_context(ctx_, o.ctx_);
  residue_ -= o.residue_;
  if (residue_ < 0) residue_ += ctx_->modulus();
  return *this;
}

PadicInt& PadicInt::operator*=(const PadicInt& o) {
  require_same_context(ctx_, o.ctx_);
  residue_ *= o.residue_;
  normalize();
  return *this;
}

PadicInt PadicInt::operator-() const {
  return PadicInt(ctx_, -residue_);
}

bool PadicInt::operator==(const PadicInt& o) const {
  return same_context(ctx_, o.ctx_) && residue_ == o.residue_;
}

std::ostream& operator<<(std::ostream& os, const PadicInt& x) {
  return os << x.residue().get_str() << " (mod " << x.context()->prime() << "^"
            << x.context()->precision() << ")";
}

PadicVec::PadicVec(ContextPtr ctx, std::size_t size) : ctx_(ctx) {
  entries_.assign(size, PadicInt::zero(ctx));
}

PadicVec::PadicVec(std::vector<PadicInt> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw DimensionMismatch("PadicVec needs at least one entry");
  ctx_ = entries_.front().context();
  for (const auto& e : entries_) require_same_context(ctx_, e.context());
}

PadicVec PadicVec::from_integers(ContextPtr ctx, std::span<const long> values) {
  std::vector<PadicInt> entries;
  entries.reserve(values.size());
  for (long v : values) entries.emplace_back(ctx, v);
  return PadicVec(std::move(entries));
}

void PadicVec::set(std::size_t i, PadicInt value) {
  require_same_context(ctx_, value.context());
  entries_.at(i) = std::move(value);
}

PadicMatrix::PadicMatrix(ContextPtr ctx, std::size_t g) : ctx_(ctx), g_(g) {
  entries_.assign(g * g, PadicInt::zero(ctx));
}

PadicMatrix PadicMatrix::identity(ContextPtr ctx, std::size_t g) {
  PadicMatrix m(ctx, g);
  for (std::size_t i = 0; i < g; ++i) m.set(i, i, PadicInt::one(ctx));
  return m;
}

PadicMatrix PadicMatrix::from_integers(ContextPtr ctx, std::size_t g, std::span<const long> row_major) {
  if (row_major.size() != g * g) throw DimensionMismatch("matrix data has wrong size");
  PadicMatrix m(ctx, g);
  for (std::size_t i = 0; i < g * g; ++i) m.entries_[i] = PadicInt(ctx, row_major[i]);
  return m;
}

void PadicMatrix::set(std::size_t r, std::size_t c, PadicInt value) {
  require_same_context(ctx_, value.context());
  entries_.at(r * g_ + c) = std::move(value);
}

PadicMatrix PadicMatrix::operator*(const PadicMatrix& o) const {
  require_same_context(ctx_, o.ctx_);
  if (g_ != o.g_) throw DimensionMismatch("matrix product: dimension mismatch");
  PadicMatrix out(ctx_, g_);
  for (std::size_t i = 0; i < g_; ++i) {
    for (std::size_t j = 0; j < g_; ++j) {
      mpz_class acc = 0;
      for (std::size_t k = 0; k < g_; ++k) acc += at(i, k).residue() * o.at(k, j).residue();
      out.entries_[i * g_ + j] = PadicInt(ctx_, acc);
    }
  }
  return out;
}

PadicVec PadicMatrix::operator*(const PadicVec& v) const {
  require_same_context(ctx_, v.context());
  if (v.size() != g_) throw DimensionMismatch("matrix-vector product: dimension mismatch");
  std::vector<PadicInt> out;
  out.reserve(g_);
  for (std::size_t i = 0; i < g_; ++i) {
    mpz_class acc = 0;
    for (std::size_t k = 0; k < g_; ++k) acc += at(i, k).residue() * v[k].residue();
    out.emplace_back(ctx_, acc);
  }
  return PadicVec(std::move(out));
}

namespace {

using ModMatrix = std::vector<std::uint64_t>;  // row major, entries in [0, p)

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

std::uint64_t to_mod_p(const PadicInt& x) {
  return mpz_class(x.residue() % static_cast<unsigned long>(x.context()->prime())).get_ui();
}

ModMatrix reduce_matrix(const PadicMatrix& L) {
  const std::size_t g = L.dimension();
  ModMatrix m(g * g);
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < g; ++j) m[i * g + j] = to_mod_p(L.at(i, j));
  return m;
}

}  // namespace

std::uint64_t determinant_mod_p(const PadicMatrix& L) {
  const std::uint64_t p = L.context()->prime();
  const std::size_t g = L.dimension();
  ModMatrix m = reduce_matrix(L);
  std::uint64_t det = 1;
  for (std::size_t col = 0; col < g; ++col) {
    std::size_t pivot = col;
    while (pivot < g && m[pivot * g + col] == 0) ++pivot;
    if (pivot == g) return 0;
    if (pivot != col) {
      for (std::size_t c = 0; c < g; ++c) std::swap(m[pivot * g + c], m[col * g + c]);
      det = (p - det) % p;
    }
    const std::uint64_t piv = m[col * g + col];
    det = mulmod(det, piv, p);
    const std::uint64_t inv = powmod(piv, p - 2, p);
    for (std::size_t r = col + 1; r < g; ++r) {
      const std::uint64_t f = mulmod(m[r * g + col], inv, p);
      if (f == 0) continue;
      for (std::size_t c = col; c < g; ++c) {
        m[r * g + c] = (m[r * g + c] + p - mulmod(f, m[col * g + c], p)) % p;
      }
    }
  }
  return det;
}

bool matrix_invertible_mod_p(const PadicMatrix& L) { return determinant_mod_p(L) != 0; }

std::uint64_t affine_order_mod_p(const PadicMatrix& L, const PadicVec& C) {
  require_same_context(L.context(), C.context());
  if (C.size() != L.dimension()) throw DimensionMismatch("affine_order_mod_p: dimension mismatch");
  if (!matrix_invertible_mod_p(L)) throw NotInvertible("linear part is singular modulo p");

  const std::uint64_t p = L.context()->prime();
  const std::size_t g = L.dimension();
  const ModMatrix lin = reduce_matrix(L);
  std::vector<std::uint64_t> off(g);
  for (std::size_t i = 0; i < g; ++i) off[i] = to_mod_p(C[i]);

  // (A, c) holds the m-fold composite x -> c + A x.
  ModMatrix A = lin;
  std::vector<std::uint64_t> c = off;
  auto is_identity = [&] {
    for (std::size_t i = 0; i < g; ++i) {
      if (c[i] != 0) return false;
      for (std::size_t j = 0; j < g; ++j)
        if (A[i * g + j] != (i == j ? 1u : 0u)) return false;
    }
    return true;
  };

  // Element orders in AGL(g, p) are bounded by p * (p^g - 1) * ... ; this cap
  // only guards against a runaway loop on bad input.
  std::uint64_t cap = p;
  for (std::size_t i = 0; i < g && cap < (1ULL << 40); ++i) cap *= p;
  cap = cap * cap;

  for (std::uint64_t m = 1; m <= cap; ++m) {
    if (is_identity()) return m;
    // Compose once more: x -> off + lin (c + A x).
    ModMatrix nextA(g * g, 0);
    std::vector<std::uint64_t> nextc(g, 0);
    for (std::size_t i = 0; i < g; ++i) {
      std::uint64_t acc = off[i];
      for (std::size_t k = 0; k < g; ++k) acc = (acc + mulmod(lin[i * g + k], c[k], p)) % p;
      nextc[i] = acc;
      for (std::size_t j = 0; j < g; ++j) {
        std::uint64_t s = 0;
        for (std::size_t k = 0; k < g; ++k) s = (s + mulmod(lin[i * g + k], A[k * g + j], p)) % p;
        nextA[i * g + j] = s;
      }
    }
    A = std::move(nextA);
    c = std::move(nextc);
  }
  throw NotInvertible("affine_order_mod_p: order not found");
}

}  // namespace padyn
