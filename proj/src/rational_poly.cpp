#include "padyn/rational_poly.hpp"

#include <algorithm>
#include <sstream>

namespace padyn {

RationalPoly RationalPoly::constant(std::size_t num_vars, const mpq_class& c) {
  RationalPoly f(num_vars);
  f.add_term(Monomial(num_vars, 0), c);
  return f;
}

RationalPoly RationalPoly::variable(std::size_t num_vars, std::size_t index) {
  RationalPoly f(num_vars);
  Monomial m(num_vars, 0);
  m.at(index) = 1;
  f.add_term(m, 1);
  return f;
}

int RationalPoly::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, total_degree(m));
  return d;
}

void RationalPoly::add_term(const Monomial& m, const mpq_class& c) {
  if (m.size() != num_vars_) throw DimensionMismatch("RationalPoly: exponent vector has wrong length");
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

mpq_class RationalPoly::evaluate(const RationalPoint& x) const {
  if (x.size() != num_vars_) throw DimensionMismatch("RationalPoly::evaluate: point has wrong dimension");
  // Cache powers per variable.
  std::vector<std::vector<mpq_class>> powers(num_vars_);
  mpq_class acc = 0;
  for (const auto& [m, c] : terms_) {
    mpq_class t = c;
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (m[i] == 0) continue;
      auto& table = powers[i];
      if (table.empty()) table.push_back(1);
      while (table.size() <= m[i]) table.push_back(table.back() * x[i]);
      t *= table[m[i]];
    }
    acc += t;
  }
  return acc;
}

std::uint64_t RationalPoly::evaluate_mod_p(const std::vector<std::uint64_t>& x, std::uint64_t p) const {
  if (x.size() != num_vars_) throw DimensionMismatch("RationalPoly::evaluate_mod_p: point has wrong dimension");
  mpz_class acc = 0;
  const mpz_class P(static_cast<unsigned long>(p));
  for (const auto& [m, c] : terms_) {
    mpz_class t(static_cast<unsigned long>(reduce_mod_p(c, p)));
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (m[i] == 0) continue;
      mpz_class xp;
      mpz_powm_ui(xp.get_mpz_t(), mpz_class(static_cast<unsigned long>(x[i])).get_mpz_t(), m[i], P.get_mpz_t());
      t = (t * xp) % P;
    }
    acc += t;
  }
  acc %= P;
  return acc.get_ui();
}

RationalPoly RationalPoly::derivative(std::size_t var) const {
  RationalPoly out(num_vars_);
  for (const auto& [m, c] : terms_) {
    if (m[var] == 0) continue;
    Monomial d = m;
    d[var] -= 1;
    out.add_term(d, c * m[var]);
  }
  return out;
}

MultiPoly RationalPoly::to_padic(const ContextPtr& ctx, int min_cap) const {
  MultiPoly out(ctx, num_vars_, std::max(degree(), min_cap));
  for (const auto& [m, c] : terms_) out.add_term(m, PadicInt::from_rational(ctx, c).residue());
  return out;
}

bool RationalPoly::p_integral(std::uint64_t p) const {
  return std::all_of(terms_.begin(), terms_.end(), [p](const auto& t) { return padyn::p_integral(t.second, p); });
}

RationalPoly& RationalPoly::operator+=(const RationalPoly& o) {
  if (o.num_vars_ != num_vars_) throw DimensionMismatch("RationalPoly: arity mismatch");
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

RationalPoly& RationalPoly::operator-=(const RationalPoly& o) {
  if (o.num_vars_ != num_vars_) throw DimensionMismatch("RationalPoly: arity mismatch");
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
  if (a.num_vars_ != b.num_vars_) throw DimensionMismatch("RationalPoly: arity mismatch");
  RationalPoly out(a.num_vars_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      Monomial m(ma.size());
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      out.add_term(m, ca * cb);
    }
  }
  return out;
}

std::string RationalPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!first) os << " + ";
    first = false;
    const bool constant = total_degree(it->first) == 0;
    if (constant) {
      os << it->second.get_str();
    } else {
      if (it->second != 1) os << it->second.get_str() << "*";
      os << monomial_to_string(it->first);
    }
  }
  return os.str();
}

RationalPoly compose(const RationalPoly& f, const RationalMap& h) {
  if (h.size() != f.num_vars()) throw DimensionMismatch("compose: arity mismatch");
  const std::size_t nv = h.empty() ? 0 : h.front().num_vars();
  std::vector<std::vector<RationalPoly>> powers(h.size());
  RationalPoly out(nv);
  for (const auto& [m, c] : f.terms()) {
    RationalPoly t = RationalPoly::constant(nv, c);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      auto& table = powers[i];
      if (table.empty()) table.push_back(RationalPoly::constant(nv, 1));
      while (table.size() <= m[i]) table.push_back(table.back() * h[i]);
      t = t * table[m[i]];
    }
    out += t;
  }
  return out;
}

RationalMap compose(const RationalMap& f, const RationalMap& h) {
  RationalMap out;
  for (const auto& fi : f) out.push_back(compose(fi, h));
  return out;
}

RationalMap identity_map(std::size_t g) {
  RationalMap out;
  for (std::size_t i = 0; i < g; ++i) out.push_back(RationalPoly::variable(g, i));
  return out;
}

RationalPoint evaluate(const RationalMap& f, const RationalPoint& x) {
  RationalPoint out;
  out.reserve(f.size());
  for (const auto& fi : f) out.push_back(fi.evaluate(x));
  return out;
}

bool p_integral(const mpq_class& x, std::uint64_t p) {
  return mpz_divisible_ui_p(x.get_den_mpz_t(), static_cast<unsigned long>(p)) == 0;
}

std::uint64_t reduce_mod_p(const mpq_class& x, std::uint64_t p) {
  if (!p_integral(x, p)) throw NotAUnit("reduce_mod_p: denominator divisible by p");
  const mpz_class P(static_cast<unsigned long>(p));
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), x.get_den_mpz_t(), P.get_mpz_t());
  mpz_class r = x.get_num() * inv;
  mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), P.get_mpz_t());
  return r.get_ui();
}

}  // namespace padyn
