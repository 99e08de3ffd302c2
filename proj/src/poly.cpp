#include "padyn/poly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace padyn {

int total_degree(const Monomial& m) {
  return static_cast<int>(std::accumulate(m.begin(), m.end(), std::uint64_t{0}));
}

std::string monomial_to_string(const Monomial& m) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!first) os << "*";
    os << "x" << (i + 1);
    if (m[i] > 1) os << "^" << m[i];
    first = false;
  }
  if (first) os << "1";
  return os.str();
}

MultiPoly::MultiPoly(ContextPtr ctx, std::size_t num_vars, int degree_cap)
    : ctx_(std::move(ctx)), num_vars_(num_vars), degree_cap_(degree_cap) {
  if (num_vars_ == 0) throw DimensionMismatch("MultiPoly needs at least one variable");
  if (degree_cap_ < 0) throw std::invalid_argument("MultiPoly: negative degree cap");
}

MultiPoly MultiPoly::constant(ContextPtr ctx, std::size_t num_vars, int degree_cap, const PadicInt& c) {
  require_same_context(ctx, c.context());
  MultiPoly f(ctx, num_vars, degree_cap);
  f.add_term(Monomial(num_vars, 0), c.residue());
  return f;
}

MultiPoly MultiPoly::variable(ContextPtr ctx, std::size_t num_vars, int degree_cap, std::size_t index) {
  if (index >= num_vars) throw DimensionMismatch("variable index out of range");
  MultiPoly f(ctx, num_vars, degree_cap);
  Monomial m(num_vars, 0);
  m[index] = 1;
  f.add_term(m, 1);
  return f;
}

int MultiPoly::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, total_degree(m));
  return d;
}

void MultiPoly::add_term(const Monomial& m, const mpz_class& coeff) {
  if (m.size() != num_vars_) throw DimensionMismatch("monomial has wrong number of variables");
  if (total_degree(m) > degree_cap_) return;
  auto it = terms_.find(m);
  mpz_class value = coeff;
  if (it != terms_.end()) value += it->second;
  mpz_fdiv_r(value.get_mpz_t(), value.get_mpz_t(), ctx_->modulus().get_mpz_t());
  if (value == 0) {
    if (it != terms_.end()) terms_.erase(it);
  } else if (it != terms_.end()) {
    it->second = std::move(value);
  } else {
    terms_.emplace(m, std::move(value));
  }
}

PadicInt MultiPoly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? PadicInt::zero(ctx_) : PadicInt(ctx_, it->second);
}

PadicInt MultiPoly::constant_term() const { return coefficient(Monomial(num_vars_, 0)); }

PadicInt MultiPoly::evaluate(const PadicVec& point) const {
  require_same_context(ctx_, point.context());
  if (point.size() != num_vars_) throw DimensionMismatch("evaluate: point has wrong dimension");
  const mpz_class& mod = ctx_->modulus();

  std::vector<std::uint32_t> max_exp(num_vars_, 0);
  for (const auto& [m, c] : terms_)
    for (std::size_t i = 0; i < num_vars_; ++i) max_exp[i] = std::max(max_exp[i], m[i]);
  std::vector<std::vector<mpz_class>> powers(num_vars_);
  for (std::size_t i = 0; i < num_vars_; ++i) {
    powers[i].resize(max_exp[i] + 1);
    powers[i][0] = 1;
    for (std::uint32_t e = 1; e <= max_exp[i]; ++e) {
      powers[i][e] = powers[i][e - 1] * point[i].residue();
      mpz_fdiv_r(powers[i][e].get_mpz_t(), powers[i][e].get_mpz_t(), mod.get_mpz_t());
    }
  }

  mpz_class acc = 0;
  mpz_class term;
  for (const auto& [m, c] : terms_) {
    term = c;
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (m[i] == 0) continue;
      term *= powers[i][m[i]];
      mpz_fdiv_r(term.get_mpz_t(), term.get_mpz_t(), mod.get_mpz_t());
    }
    acc += term;
  }
  return PadicInt(ctx_, acc);
}

MultiPoly MultiPoly::derivative(std::size_t var) const {
  if (var >= num_vars_) throw DimensionMismatch("derivative: variable index out of range");
  MultiPoly out(ctx_, num_vars_, degree_cap_);
  for (const auto& [m, c] : terms_) {
    if (m[var] == 0) continue;
    Monomial dm = m;
    dm[var] -= 1;
    out.add_term(dm, c * static_cast<unsigned long>(m[var]));
  }
  return out;
}

MultiPoly MultiPoly::scaled(const PadicInt& c) const {
  require_same_context(ctx_, c.context());
  MultiPoly out(ctx_, num_vars_, degree_cap_);
  for (const auto& [m, coeff] : terms_) out.add_term(m, coeff * c.residue());
  return out;
}

MultiPoly MultiPoly::reduced(const ContextPtr& coarser) const {
  if (coarser->prime() != ctx_->prime() || coarser->precision() > ctx_->precision()) {
    throw ContextMismatch("reduced: target context must share p and have lower precision");
  }
  MultiPoly out(coarser, num_vars_, degree_cap_);
  for (const auto& [m, c] : terms_) out.add_term(m, c);
  return out;
}

MultiPoly MultiPoly::with_degree_cap(int cap) const {
  MultiPoly out(ctx_, num_vars_, cap);
  for (const auto& [m, c] : terms_) out.add_term(m, c);
  return out;
}

void MultiPoly::check_compatible(const MultiPoly& o) const {
  require_same_context(ctx_, o.ctx_);
  if (num_vars_ != o.num_vars_) throw DimensionMismatch("polynomials have different variable counts");
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  check_compatible(o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  check_compatible(o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  a.check_compatible(b);
  const int cap = std::min(a.degree_cap_, b.degree_cap_);
  std::map<Monomial, mpz_class> acc;
  Monomial m(a.num_vars_);
  for (const auto& [ma, ca] : a.terms_) {
    const int da = total_degree(ma);
    for (const auto& [mb, cb] : b.terms_) {
      if (da + total_degree(mb) > cap) continue;
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      mpz_addmul(acc[m].get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
    }
  }
  MultiPoly out(a.ctx_, a.num_vars_, cap);
  for (auto& [mon, c] : acc) out.add_term(mon, c);
  return out;
}

bool MultiPoly::operator==(const MultiPoly& o) const {
  return same_context(ctx_, o.ctx_) && num_vars_ == o.num_vars_ && terms_ == o.terms_;
}

PolyMap::PolyMap(std::vector<MultiPoly> components) : components_(std::move(components)) {
  if (components_.empty()) throw DimensionMismatch("PolyMap needs at least one component");
  const auto& first = components_.front();
  for (const auto& c : components_) {
    require_same_context(first.context(), c.context());
    if (c.num_vars() != components_.size()) {
      throw DimensionMismatch("PolyMap components must have as many variables as components");
    }
    if (c.degree_cap() != first.degree_cap()) {
      throw DimensionMismatch("PolyMap components must share a degree cap");
    }
  }
}

PolyMap PolyMap::identity(ContextPtr ctx, std::size_t g, int degree_cap) {
  std::vector<MultiPoly> comps;
  for (std::size_t i = 0; i < g; ++i) comps.push_back(MultiPoly::variable(ctx, g, degree_cap, i));
  return PolyMap(std::move(comps));
}

PadicVec PolyMap::evaluate(const PadicVec& point) const {
  std::vector<PadicInt> out;
  out.reserve(components_.size());
  for (const auto& c : components_) out.push_back(c.evaluate(point));
  return PadicVec(std::move(out));
}

PolyMap PolyMap::reduced(const ContextPtr& coarser) const {
  std::vector<MultiPoly> comps;
  for (const auto& c : components_) comps.push_back(c.reduced(coarser));
  return PolyMap(std::move(comps));
}

PolyMap PolyMap::with_degree_cap(int cap) const {
  std::vector<MultiPoly> comps;
  for (const auto& c : components_) comps.push_back(c.with_degree_cap(cap));
  return PolyMap(std::move(comps));
}

PadicVec PolyMap::constant_part() const {
  std::vector<PadicInt> out;
  for (const auto& c : components_) out.push_back(c.constant_term());
  return PadicVec(std::move(out));
}

PadicMatrix PolyMap::linear_part() const {
  const std::size_t g = dimension();
  PadicMatrix L(context(), g);
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < g; ++j) {
      Monomial m(g, 0);
      m[j] = 1;
      L.set(i, j, components_[i].coefficient(m));
    }
  }
  return L;
}

MultiPoly compose(const MultiPoly& f, const PolyMap& h) {
  require_same_context(f.context(), h.context());
  if (f.num_vars() != h.dimension()) throw DimensionMismatch("compose: arity mismatch");
  const std::size_t nv = h[0].num_vars();
  // Every term of f is substituted; only the result is truncated.
  const int cap = h.degree_cap();
  const ContextPtr& ctx = f.context();

  std::vector<MultiPoly> inner;
  for (const auto& c : h.components()) inner.push_back(c.with_degree_cap(cap));
  // powers[i][e] = h_i^e, built lazily.
  std::vector<std::vector<MultiPoly>> powers(f.num_vars());
  auto power = [&](std::size_t i, std::uint32_t e) -> const MultiPoly& {
    auto& table = powers[i];
    if (table.empty()) table.push_back(MultiPoly::constant(ctx, nv, cap, PadicInt::one(ctx)));
    while (table.size() <= e) table.push_back(table.back() * inner[i]);
    return table[e];
  };

  MultiPoly out(ctx, nv, cap);
  for (const auto& [m, c] : f.terms()) {
    MultiPoly term = MultiPoly::constant(ctx, nv, cap, PadicInt(ctx, c));
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] != 0) term = term * power(i, m[i]);
    }
    out += term;
  }
  return out;
}

PolyMap compose(const PolyMap& f, const PolyMap& h) {
  std::vector<MultiPoly> comps;
  comps.reserve(f.dimension());
  for (const auto& c : f.components()) comps.push_back(compose(c, h));
  return PolyMap(std::move(comps));
}

PolyMap iterate_map(const PolyMap& f, std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("iterate_map: m must be >= 1");
  std::optional<PolyMap> result;
  PolyMap base = f;
  while (true) {
    if (m & 1) result = result ? compose(*result, base) : base;
    m >>= 1;
    if (m == 0) break;
    base = compose(base, base);
  }
  return *result;
}

PadicMatrix jacobian_at(const PolyMap& f, const PadicVec& v) {
  const std::size_t g = f.dimension();
  PadicMatrix J(f.context(), g);
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < g; ++j) J.set(i, j, f[i].derivative(j).evaluate(v));
  return J;
}

std::optional<std::string> condition_a_violation(const PolyMap& f) {
  const std::size_t g = f.dimension();
  const auto& ctx = f.context();
  for (std::size_t i = 0; i < g; ++i) {
    MultiPoly diff = f[i] - MultiPoly::variable(ctx, g, f.degree_cap(), i);
    for (const auto& [m, c] : diff.terms()) {
      if (valuation_of(c, ctx->prime(), ctx->precision()) < 1) {
        std::ostringstream os;
        os << "component " << (i + 1) << ", term " << monomial_to_string(m)
           << ": coefficient of phi_i - x_i is a unit, so phi_i(x) != x_i mod p";
        return os.str();
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> condition_b_violation(const PolyMap& f) {
  const auto& ctx = f.context();
  for (std::size_t i = 0; i < f.dimension(); ++i) {
    for (const auto& [m, c] : f[i].terms()) {
      const int d = total_degree(m);
      if (d < 2) continue;
      const int v = valuation_of(c, ctx->prime(), ctx->precision());
      if (v < d - 1) {
        std::ostringstream os;
        os << "component " << (i + 1) << ", term " << monomial_to_string(m) << ": degree " << d
           << " needs valuation >= " << (d - 1) << ", has " << v;
        return os.str();
      }
    }
  }
  return std::nullopt;
}

bool check_condition_a(const PolyMap& f) { return !condition_a_violation(f); }
bool check_condition_b(const PolyMap& f) { return !condition_b_violation(f); }

PolyMap rescale_conjugate(const PolyMap& H) {
  const auto& ctx = H.context();
  const int K = ctx->precision();
  if (K < 2) throw PrecisionExhausted("rescale_conjugate needs precision >= 2");
  const auto out_ctx = PadicContext::make(ctx->prime(), K - 1);
  const unsigned long p = static_cast<unsigned long>(ctx->prime());

  std::vector<MultiPoly> comps;
  for (std::size_t i = 0; i < H.dimension(); ++i) {
    MultiPoly F(out_ctx, H.dimension(), H.degree_cap());
    for (const auto& [m, c] : H[i].terms()) {
      const int d = total_degree(m);
      if (d == 0) {
        if (!mpz_divisible_ui_p(c.get_mpz_t(), p)) {
          throw ConstantTermNotDivisible("component " + std::to_string(i + 1) +
                                         ": constant term is not divisible by p, the residue class is not fixed");
        }
        mpz_class q;
        mpz_divexact_ui(q.get_mpz_t(), c.get_mpz_t(), p);
        F.add_term(m, q);
      } else if (d - 1 < K) {
        F.add_term(m, c * ctx->power(d - 1));
      }
    }
    comps.push_back(std::move(F));
  }
  return PolyMap(std::move(comps));
}

}  // namespace padyn
