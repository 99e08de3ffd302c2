#include <doctest.h>

#include <random>

#include "filtration_cases.hpp"
#include "padyn/mahler.hpp"

using namespace padyn;
using testing_helpers::random_s;
using testing_helpers::random_t;

namespace {

std::vector<PadicInt> ints(const ContextPtr& c, std::initializer_list<long> xs) {
  std::vector<PadicInt> v;
  for (long x : xs) v.emplace_back(c, x);
  return v;
}

MahlerPoly mp(const ContextPtr& c, std::initializer_list<long> xs) { return MahlerPoly(c, ints(c, xs)); }

// b_k = p^k for k <= 2K, the Mahler expansion of (1 + p)^z.
MahlerSeries one_plus_p_power(const ContextPtr& c) {
  std::vector<PadicInt> b;
  for (int k = 0; k <= 2 * c->precision(); ++k) b.emplace_back(c, k <= c->precision() ? c->power(std::min(k, c->precision())) : mpz_class(0));
  return MahlerSeries(c, std::move(b), TailRule{0, false});
}

PadicInt random_element(const ContextPtr& c, gmp_randclass& r) { return PadicInt(c, r.get_z_range(c->modulus())); }

}  // namespace

TEST_CASE("values_to_mahler examples") {
  auto c = PadicContext::make(5, 4);
  CHECK(values_to_mahler(ints(c, {7, 7, 7, 7})) == mp(c, {7}));
  CHECK(values_to_mahler(ints(c, {0, 1, 2, 3})) == mp(c, {0, 1}));
  CHECK(values_to_mahler(ints(c, {0, 1, 4, 9})) == mp(c, {0, 1, 2}));
}

TEST_CASE("values_to_mahler round trip") {
  gmp_randclass r(gmp_randinit_default);
  r.seed(3);
  for (std::uint64_t p : {5u, 7u, 13u}) {
    auto c = PadicContext::make(p, 15);
    for (int t = 0; t < 10; ++t) {
      std::vector<PadicInt> vals;
      for (int z = 0; z < 25; ++z) vals.push_back(random_element(c, r));
      auto f = values_to_mahler(vals);
      CHECK(f.values(vals.size()) == vals);
      for (std::size_t z = 0; z < vals.size(); ++z) CHECK(f.evaluate(mpz_class(static_cast<unsigned long>(z))) == vals[z]);
    }
  }
}

TEST_CASE("shift examples and agreement with reevaluation") {
  auto c = PadicContext::make(5, 6);
  CHECK(shift(mp(c, {9})) == mp(c, {9}));
  CHECK(shift(mp(c, {0, 1})) == mp(c, {1, 1}));
  CHECK(shift(mp(c, {0, 0, 1})) == mp(c, {0, 1, 1}));
  gmp_randclass r(gmp_randinit_default);
  r.seed(4);
  std::vector<PadicInt> coeffs;
  for (int k = 0; k < 12; ++k) coeffs.push_back(random_element(c, r));
  MahlerPoly f(c, coeffs);
  auto g = shift(f);
  for (long z = 0; z <= 20; ++z) CHECK(g.evaluate(mpz_class(z)) == f.evaluate(mpz_class(z + 1)));
}

TEST_CASE("solve_difference examples and postcondition") {
  auto c = PadicContext::make(5, 1);
  CHECK(solve_difference(MahlerPoly::zero(c)) == MahlerPoly::zero(c));
  CHECK(solve_difference(mp(c, {1})) == mp(c, {0, -1}));
  CHECK(solve_difference(mp(c, {0, 1})) == mp(c, {0, 0, -1}));
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    std::vector<PadicInt> q;
    for (int k = 0; k < 8; ++k) q.emplace_back(c, static_cast<long>(rng() % 5));
    MahlerPoly Q(c, q);
    auto h = solve_difference(Q);
    CHECK(h.coefficient(0).is_zero());
    CHECK(h.degree() <= Q.degree() + 1);
    for (long z = 0; z <= 20; ++z) {
      CHECK((h.evaluate(mpz_class(z + 1)) - h.evaluate(mpz_class(z)) + Q.evaluate(mpz_class(z))).is_zero());
    }
  }
}

TEST_CASE("evaluate_series examples") {
  auto c = PadicContext::make(5, 4);
  MahlerSeries constant(c, ints(c, {17}), TailRule{0, true});
  CHECK(evaluate_series(constant, mpz_class(12345)).residue() == 17);
  auto f = one_plus_p_power(c);
  CHECK(evaluate_series(f, mpz_class(1)).residue() == 6);
  CHECK(evaluate_series(f, mpz_class(2)).residue() == 36);
  // (1 + p)^z at a large and a negative integer
  const mpz_class big("123456789012345678901234567890");
  mpz_class expected;
  mpz_powm(expected.get_mpz_t(), mpz_class(6).get_mpz_t(), big.get_mpz_t(), c->modulus().get_mpz_t());
  CHECK(evaluate_series(f, big).residue() == expected);
  // 6 * 6^{-1} = 1
  CHECK(evaluate_series(f, mpz_class(-1)) * PadicInt(c, 6L) == PadicInt::one(c));
}

TEST_CASE("evaluate_series refuses uncertified tails") {
  auto c = PadicContext::make(5, 10);
  MahlerSeries short_series(c, ints(c, {1, 5, 25}), TailRule{0, false});
  CHECK_THROWS_AS(evaluate_series(short_series, mpz_class(3)), TailNotCertified);
}

TEST_CASE("evaluate at a p-adic point matches the modular falling factorial") {
  auto c = PadicContext::make(7, 6);
  gmp_randclass r(gmp_randinit_default);
  r.seed(12);
  std::vector<PadicInt> coeffs;
  for (int k = 0; k < 30; ++k) coeffs.push_back(random_element(c, r));
  MahlerPoly f(c, coeffs);
  for (int t = 0; t < 10; ++t) {
    // z and z + p^{K + v_p(29!)} give the same value mod p^K
    const mpz_class z = r.get_z_range(mpz_class(1000000000));
    mpz_class wide;
    mpz_ui_pow_ui(wide.get_mpz_t(), 7, 6 + factorial_valuation(29, 7));
    CHECK(f.evaluate(z) == f.evaluate(mpz_class(z + wide * 12345)));
    // small path agrees with the general path
    const long zs = static_cast<long>(t * 37);
    CHECK(f.evaluate(mpz_class(zs)) == f.evaluate(mpz_class(zs + wide * 3)));
  }
}

TEST_CASE("Stirling numbers and factorial valuations") {
  auto s = stirling_first_kind(5);
  // z(z-1)(z-2) = z^3 - 3z^2 + 2z
  CHECK(s[3][3] == 1);
  CHECK(s[3][2] == -3);
  CHECK(s[3][1] == 2);
  CHECK(s[3][0] == 0);
  CHECK(s[5][1] == 24);
  CHECK(factorial_valuation(25, 5) == 6);
  CHECK(factorial_valuation(4, 5) == 0);
  CHECK(factorial_valuation(0, 5) == 0);
}

TEST_CASE("to_power_series examples") {
  auto c = PadicContext::make(5, 12);
  auto constant = to_power_series(MahlerSeries(c, ints(c, {9}), TailRule{0, true}));
  CHECK(constant.coeffs.at(0).residue() == 9);
  for (std::size_t m = 1; m < constant.coeffs.size(); ++m) CHECK(constant.coeffs[m].is_zero());
  auto linear = to_power_series(MahlerSeries(c, ints(c, {0, 1}), TailRule{0, true}));
  CHECK(linear.coeffs.at(1).residue() == 1);
  CHECK(linear.precision.at(1) == 12);

  // a_1 of (1 + p)^z is log(1 + p) = sum (-1)^{n+1} p^n / n.
  auto f = one_plus_p_power(c);
  auto ps = to_power_series(f);
  const int prec = ps.precision.at(1);
  CHECK(prec >= 1);
  mpq_class log_sum = 0;
  for (int n = 1; n <= 60; ++n) {
    mpz_class pn;
    mpz_ui_pow_ui(pn.get_mpz_t(), 5, n);
    mpq_class term(pn, n);
    term.canonicalize();
    log_sum += (n % 2 == 1) ? term : mpq_class(-term);
  }
  auto lc = PadicContext::make(5, prec);
  // Terms past n = 60 have valuation > 40 > prec, so this is exact mod p^prec.
  CHECK(ps.coeffs[1].reduced(lc) == PadicInt::from_rational(lc, log_sum));
}

TEST_CASE("to_power_series agrees with evaluate_series at small integers") {
  auto c = PadicContext::make(7, 16);
  gmp_randclass r(gmp_randinit_default);
  r.seed(21);
  std::vector<PadicInt> b;
  TailRule tail{0, false};
  for (int k = 0; k <= 32; ++k) {
    b.push_back(random_element(c, r) * PadicInt(c, c->power(std::min(tail.at(static_cast<std::size_t>(k)), 16))));
  }
  MahlerSeries f(c, b, tail);
  auto ps = to_power_series(f);
  for (long z = 0; z < 8; ++z) {
    mpz_class acc = 0, zp = 1;
    for (std::size_t m = 0; m < ps.coeffs.size(); ++m) {
      acc += ps.coeffs[m].residue() * zp;
      zp *= z;
    }
    auto prec = PadicContext::make(7, ps.precision[0]);
    CHECK(PadicInt(prec, acc) == evaluate_series(f, mpz_class(z)).reduced(prec));
  }
}

TEST_CASE("to_power_series reports exhausted precision") {
  auto c = PadicContext::make(5, 4);
  auto f = one_plus_p_power(c);
  CHECK_THROWS_AS(to_power_series(f, 4), PrecisionExhausted);
}

TEST_CASE("filtration levels") {
  CHECK(filtration_level(0, 0) == 0);
  // n = 0: deg q_i <= 2i - 2 only
  CHECK(filtration_level(1, 0) == 2);
  CHECK(filtration_level(2, 0) == 2);
  CHECK(filtration_level(3, 0) == 3);
  // n = 2: binom(z,1) at p^1, binom(z,3) at p^2, binom(z,4) at p^3
  CHECK(filtration_level(1, 2) == 1);
  CHECK(filtration_level(3, 2) == 2);
  CHECK(filtration_level(4, 2) == 3);
  auto c = PadicContext::make(5, 10);
  CHECK(decompose_filtration(mp(c, {3, 5, 25, 25}), 2).has_value());
  CHECK_FALSE(decompose_filtration(mp(c, {3, 5, 5}), 2).has_value());
}


TEST_CASE("products of S_n and T_n elements stay in T_n") {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 40; ++t) {
    const std::uint64_t p = (t % 2) ? 5 : 7;
    auto c = PadicContext::make(p, 30);
    const int n = static_cast<int>(rng() % 5);
    auto H = random_s(c, n, rng);
    auto G = random_t(c, n, static_cast<int>(rng() % 6), rng);
    REQUIRE(decompose_filtration(H, n).has_value());
    REQUIRE(decompose_filtration(G, n).has_value());
    CHECK(decompose_filtration(multiply(H, G), n).has_value());
  }
}
