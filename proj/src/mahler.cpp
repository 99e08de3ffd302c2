#include "padyn/mahler.hpp"

#include <algorithm>

namespace padyn {

namespace {

mpz_class mod_reduce(const mpz_class& x, const ContextPtr& ctx) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), ctx->modulus().get_mpz_t());
  return r;
}

// sum_k coeffs[k] * binom(z, k) mod p^K for an integer z.
PadicInt evaluate_binomial_sum(const ContextPtr& ctx, const std::vector<PadicInt>& coeffs,
                               const mpz_class& z) {
  mpz_class acc = 0;
  if (z >= 0 && z < (1L << 20)) {
    // Small naturals: exact binomials, which vanish once k > z.
    mpz_class binom = 1;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      if (k > 0) {
        binom *= z - static_cast<unsigned long>(k - 1);
        mpz_divexact_ui(binom.get_mpz_t(), binom.get_mpz_t(), static_cast<unsigned long>(k));
      }
      if (binom == 0) break;
      if (coeffs[k].is_zero()) continue;
      mpz_class b = mod_reduce(binom, ctx);
      mpz_addmul(acc.get_mpz_t(), coeffs[k].residue().get_mpz_t(), b.get_mpz_t());
    }
    return PadicInt(ctx, acc);
  }

  // General integers: binom(z, k) mod p^K only depends on z mod p^{K + v_p(k!)},
  // so keep the falling factorial modulo p^{K + V} with V = v_p(n!) and strip
  // the p-part of k! by exact division.
  const std::uint64_t p = ctx->prime();
  const int K = ctx->precision();
  const std::size_t n = coeffs.empty() ? 0 : coeffs.size() - 1;
  const int V = factorial_valuation(n, p);
  mpz_class wide_mod;
  mpz_ui_pow_ui(wide_mod.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(K + V));
  mpz_class zr;
  mpz_fdiv_r(zr.get_mpz_t(), z.get_mpz_t(), wide_mod.get_mpz_t());

  mpz_class falling = 1;  // z (z-1) ... (z-k+1) mod p^{K+V}
  mpz_class unit = 1;     // p-free part of k! mod p^K
  int fact_val = 0;
  mpz_class pv, q, inv;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (k > 0) {
      falling *= zr - static_cast<unsigned long>(k - 1);
      mpz_fdiv_r(falling.get_mpz_t(), falling.get_mpz_t(), wide_mod.get_mpz_t());
      std::uint64_t m = k;
      while (m % p == 0) {
        m /= p;
        ++fact_val;
      }
      unit *= static_cast<unsigned long>(m);
      mpz_fdiv_r(unit.get_mpz_t(), unit.get_mpz_t(), ctx->modulus().get_mpz_t());
    }
    if (coeffs[k].is_zero()) continue;
    mpz_ui_pow_ui(pv.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(fact_val));
    mpz_divexact(q.get_mpz_t(), falling.get_mpz_t(), pv.get_mpz_t());
    mpz_invert(inv.get_mpz_t(), unit.get_mpz_t(), ctx->modulus().get_mpz_t());
    q *= inv;
    mpz_fdiv_r(q.get_mpz_t(), q.get_mpz_t(), ctx->modulus().get_mpz_t());
    mpz_addmul(acc.get_mpz_t(), coeffs[k].residue().get_mpz_t(), q.get_mpz_t());
  }
  return PadicInt(ctx, acc);
}

}  // namespace

MahlerPoly::MahlerPoly(ContextPtr ctx, std::vector<PadicInt> coeffs)
    : ctx_(std::move(ctx)), coeffs_(std::move(coeffs)) {
  for (const auto& c : coeffs_) require_same_context(ctx_, c.context());
  trim();
}

MahlerPoly MahlerPoly::zero(ContextPtr ctx) { return MahlerPoly(std::move(ctx), {}); }

MahlerPoly MahlerPoly::from_integers(ContextPtr ctx, std::span<const long> coeffs) {
  std::vector<PadicInt> cs;
  for (long c : coeffs) cs.emplace_back(ctx, c);
  return MahlerPoly(ctx, std::move(cs));
}

void MahlerPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

PadicInt MahlerPoly::coefficient(std::size_t k) const {
  return k < coeffs_.size() ? coeffs_[k] : PadicInt::zero(ctx_);
}

int MahlerPoly::degree() const { return static_cast<int>(coeffs_.size()) - 1; }

PadicInt MahlerPoly::evaluate(const mpz_class& z) const { return evaluate_binomial_sum(ctx_, coeffs_, z); }

PadicInt MahlerPoly::evaluate(const PadicInt& z) const {
  require_same_context(ctx_, z.context());
  return evaluate(z.residue());
}

std::vector<PadicInt> MahlerPoly::values(std::size_t count) const {
  // Pascal's rule row by row: binom(z, k) for z < count.
  std::vector<PadicInt> out;
  out.reserve(count);
  std::vector<mpz_class> row{1};
  for (std::size_t z = 0; z < count; ++z) {
    mpz_class acc = 0;
    const std::size_t top = std::min(row.size(), coeffs_.size());
    for (std::size_t k = 0; k < top; ++k) {
      mpz_addmul(acc.get_mpz_t(), coeffs_[k].residue().get_mpz_t(), row[k].get_mpz_t());
    }
    out.emplace_back(ctx_, acc);
    // Advance to row z + 1; entries past the degree are never needed.
    std::vector<mpz_class> next(std::min(row.size() + 1, coeffs_.size() + 1));
    for (std::size_t k = 0; k < next.size(); ++k) {
      mpz_class v = k < row.size() ? row[k] : mpz_class(0);
      if (k > 0 && k - 1 < row.size()) v += row[k - 1];
      next[k] = mod_reduce(v, ctx_);
    }
    row = std::move(next);
  }
  return out;
}

MahlerPoly MahlerPoly::operator+(const MahlerPoly& o) const {
  require_same_context(ctx_, o.ctx_);
  std::vector<PadicInt> out;
  const std::size_t n = std::max(coeffs_.size(), o.coeffs_.size());
  for (std::size_t k = 0; k < n; ++k) out.push_back(coefficient(k) + o.coefficient(k));
  return MahlerPoly(ctx_, std::move(out));
}

MahlerPoly MahlerPoly::operator-(const MahlerPoly& o) const {
  require_same_context(ctx_, o.ctx_);
  std::vector<PadicInt> out;
  const std::size_t n = std::max(coeffs_.size(), o.coeffs_.size());
  for (std::size_t k = 0; k < n; ++k) out.push_back(coefficient(k) - o.coefficient(k));
  return MahlerPoly(ctx_, std::move(out));
}

MahlerPoly MahlerPoly::scaled(const PadicInt& c) const {
  std::vector<PadicInt> out;
  for (const auto& x : coeffs_) out.push_back(x * c);
  return MahlerPoly(ctx_, std::move(out));
}

MahlerPoly MahlerPoly::reduced(const ContextPtr& coarser) const {
  std::vector<PadicInt> out;
  for (const auto& x : coeffs_) out.push_back(x.reduced(coarser));
  return MahlerPoly(coarser, std::move(out));
}

MahlerPoly MahlerPoly::lifted(const ContextPtr& finer) const {
  if (finer->prime() != ctx_->prime()) throw ContextMismatch("lifted: prime mismatch");
  std::vector<PadicInt> out;
  for (const auto& x : coeffs_) out.emplace_back(finer, x.residue());
  return MahlerPoly(finer, std::move(out));
}

bool MahlerPoly::operator==(const MahlerPoly& o) const {
  return same_context(ctx_, o.ctx_) && coeffs_ == o.coeffs_;
}

MahlerPoly values_to_mahler(std::span<const PadicInt> vals) {
  if (vals.empty()) throw DimensionMismatch("values_to_mahler: no samples");
  const ContextPtr ctx = vals.front().context();
  std::vector<mpz_class> diff;
  diff.reserve(vals.size());
  for (const auto& v : vals) {
    require_same_context(ctx, v.context());
    diff.push_back(v.residue());
  }
  // In-place difference table; after step k, diff[k] holds Delta^k f(0).
  std::vector<PadicInt> coeffs;
  coeffs.reserve(vals.size());
  for (std::size_t k = 0; k < diff.size(); ++k) {
    coeffs.emplace_back(ctx, diff[k]);
    for (std::size_t i = diff.size() - 1; i > k; --i) {
      diff[i] -= diff[i - 1];
      mpz_fdiv_r(diff[i].get_mpz_t(), diff[i].get_mpz_t(), ctx->modulus().get_mpz_t());
    }
  }
  return MahlerPoly(ctx, std::move(coeffs));
}

MahlerPoly shift(const MahlerPoly& f) {
  const auto& c = f.coefficients();
  std::vector<PadicInt> out;
  out.reserve(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) out.push_back(c[k] + f.coefficient(k + 1));
  return MahlerPoly(f.context(), std::move(out));
}

MahlerPoly solve_difference(const MahlerPoly& Q) {
  const auto& q = Q.coefficients();
  std::vector<PadicInt> out(q.size() + 1, PadicInt::zero(Q.context()));
  for (std::size_t k = 0; k < q.size(); ++k) out[k + 1] = -q[k];
  return MahlerPoly(Q.context(), std::move(out));
}

MahlerPoly multiply(const MahlerPoly& a, const MahlerPoly& b) {
  require_same_context(a.context(), b.context());
  if (a.degree() < 0 || b.degree() < 0) return MahlerPoly::zero(a.context());
  const std::size_t count = static_cast<std::size_t>(a.degree() + b.degree()) + 1;
  auto va = a.values(count);
  const auto vb = b.values(count);
  for (std::size_t z = 0; z < count; ++z) va[z] *= vb[z];
  return values_to_mahler(va);
}

int TailRule::at(std::size_t k) const {
  if (k == 0) return 0;
  const long num = static_cast<long>(k) + 1 - shift;
  if (num <= 0) return 0;
  return static_cast<int>((num + 1) / 2);
}

MahlerSeries::MahlerSeries(ContextPtr ctx, std::vector<PadicInt> coeffs, TailRule tail)
    : ctx_(std::move(ctx)), coeffs_(std::move(coeffs)), tail_(tail) {
  if (coeffs_.empty()) coeffs_.push_back(PadicInt::zero(ctx_));
  for (const auto& c : coeffs_) require_same_context(ctx_, c.context());
}

MahlerSeries MahlerSeries::from_poly(const MahlerPoly& f) {
  return MahlerSeries(f.context(), f.coefficients(), TailRule{0, true});
}

bool MahlerSeries::tail_certified() const {
  return tail_.vanishes || tail_.at(truncation() + 1) >= ctx_->precision();
}

PadicInt evaluate_series(const MahlerSeries& f, const mpz_class& z) {
  if (!f.tail_certified()) {
    throw TailNotCertified("Mahler coefficients past index " + std::to_string(f.truncation()) +
                           " are not certified to vanish at working precision");
  }
  return evaluate_binomial_sum(f.context(), f.coefficients(), z);
}

PadicInt evaluate_series(const MahlerSeries& f, const PadicInt& z) {
  require_same_context(f.context(), z.context());
  return evaluate_series(f, z.residue());
}

std::vector<std::vector<mpz_class>> stirling_first_kind(std::size_t n) {
  std::vector<std::vector<mpz_class>> s(n + 1);
  s[0] = {1};
  for (std::size_t k = 0; k < n; ++k) {
    // s(k+1, m) = s(k, m-1) - k s(k, m)
    s[k + 1].assign(k + 2, 0);
    for (std::size_t m = 0; m <= k + 1; ++m) {
      mpz_class v = 0;
      if (m >= 1) v += s[k][m - 1];
      if (m <= k) v -= s[k][m] * static_cast<unsigned long>(k);
      s[k + 1][m] = std::move(v);
    }
  }
  return s;
}

int factorial_valuation(std::uint64_t k, std::uint64_t p) {
  int v = 0;
  for (std::uint64_t q = k / p; q > 0; q /= p) v += static_cast<int>(q);
  return v;
}

PowerSeries to_power_series(const MahlerSeries& f, int floor) {
  const ContextPtr& ctx = f.context();
  const std::uint64_t p = ctx->prime();
  const int K = ctx->precision();
  const auto& b = f.coefficients();

  std::size_t T = b.size() - 1;
  if (f.tail_rule().vanishes) {
    while (T > 0 && b[T].is_zero()) --T;
  }

  // Valuation lower bound for every untracked term b_k / k!, k > T.
  int tail_bound = kUnbounded;
  if (!f.tail_rule().vanishes) {
    for (std::uint64_t k = T + 1;; ++k) {
      const int bound = f.tail_rule().at(k) - factorial_valuation(k, p);
      tail_bound = std::min(tail_bound, bound);
      // at(k) - v_p(k!) >= (k + 1 - shift) / 2 - (k - 1) / (p - 1), which is
      // increasing in k for p >= 5; stop once it clears the running minimum.
      const double lower = (static_cast<double>(k) + 1 - f.tail_rule().shift) / 2.0 -
                           (static_cast<double>(k) - 1) / static_cast<double>(p - 1);
      if (lower > tail_bound + 1 || k > T + 100000) break;
    }
  }

  const int retained_precision = K - factorial_valuation(T, p);
  const int precision = std::min(retained_precision, tail_bound);
  if (precision < floor) {
    throw PrecisionExhausted("power-series coefficients certified to only " + std::to_string(precision) +
                             " digits, floor is " + std::to_string(floor));
  }

  // term_k = b_k / k! mod p^K (meaningful mod p^{K - v_p(k!)}).
  std::vector<mpz_class> term(T + 1);
  mpz_class fact_unit = 1;
  int fact_val = 0;
  for (std::size_t k = 0; k <= T; ++k) {
    if (k > 0) {
      std::uint64_t m = k;
      while (m % p == 0) {
        m /= p;
        ++fact_val;
      }
      fact_unit *= static_cast<unsigned long>(m);
      mpz_fdiv_r(fact_unit.get_mpz_t(), fact_unit.get_mpz_t(), ctx->modulus().get_mpz_t());
    }
    const mpz_class& r = b[k].residue();
    if (r != 0 && !mpz_divisible_p(r.get_mpz_t(), ctx->power(fact_val).get_mpz_t())) {
      throw ConditionViolated("Mahler coefficient " + std::to_string(k) +
                              " has valuation below v_p(k!); the monomial expansion leaves Z_p");
    }
    mpz_class q;
    mpz_divexact(q.get_mpz_t(), r.get_mpz_t(), ctx->power(fact_val).get_mpz_t());
    const PadicInt inv = PadicInt(ctx, fact_unit).inverse();
    term[k] = q * inv.residue();
  }

  const auto s = stirling_first_kind(T);
  PowerSeries out{ctx, {}, {}, tail_bound};
  for (std::size_t m = 0; m <= T; ++m) {
    mpz_class acc = 0;
    for (std::size_t k = m; k <= T; ++k) {
      if (term[k] == 0) continue;
      mpz_addmul(acc.get_mpz_t(), term[k].get_mpz_t(), s[k][m].get_mpz_t());
    }
    PadicInt a(ctx, acc);
    // Digits beyond the certified precision are noise; clear them.
    out.coeffs.emplace_back(ctx, mpz_class(a.residue() % ctx->power(std::min(precision, K))));
    out.precision.push_back(std::min(precision, K));
  }
  return out;
}

int filtration_level(std::size_t k, int n) {
  if (k == 0) return 0;
  const int kk = static_cast<int>(k);
  const int early = (kk + 2) / 2;  // ceil((k + 1) / 2): deg <= 2i - 1
  if (early <= n) return early;
  return std::max(n + 1, (kk + 3) / 2);  // ceil((k + 2) / 2): deg <= 2i - 2
}

std::optional<FiltrationDecomposition> decompose_filtration(const MahlerPoly& f, int n) {
  const ContextPtr& ctx = f.context();
  const int K = ctx->precision();
  FiltrationDecomposition out;
  std::vector<std::vector<PadicInt>> levels;
  auto level_slot = [&](int i) -> std::vector<PadicInt>& {
    if (static_cast<int>(levels.size()) <= i) levels.resize(static_cast<std::size_t>(i) + 1);
    return levels[static_cast<std::size_t>(i)];
  };
  const auto& c = f.coefficients();
  for (std::size_t k = 0; k < c.size(); ++k) {
    const int i = filtration_level(k, n);
    const int need = std::min(i, K);
    if (!mpz_divisible_p(c[k].residue().get_mpz_t(), ctx->power(need).get_mpz_t())) return std::nullopt;
    mpz_class q;
    mpz_divexact(q.get_mpz_t(), c[k].residue().get_mpz_t(), ctx->power(need).get_mpz_t());
    auto& slot = level_slot(i);
    if (slot.size() <= k) slot.resize(k + 1, PadicInt::zero(ctx));
    slot[k] = PadicInt(ctx, q);
  }
  for (auto& l : levels) out.levels.emplace_back(ctx, std::move(l));
  return out;
}

}  // namespace padyn
