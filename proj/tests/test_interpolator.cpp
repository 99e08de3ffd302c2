#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "interpolation_cases.hpp"
#include "padyn/interpolator.hpp"

using namespace padyn;
using testing_helpers::poly;
using testing_helpers::vec;

namespace {

PadicInt at(const MahlerSeries& f, long z) { return evaluate_series(f, mpz_class(z)); }

}  // namespace

TEST_CASE("residual and advance_stage examples") {
  auto c = PadicContext::make(5, 6);
  SUBCASE("identity") {
    IteratedMap phi(PolyMap::identity(c, 2, 7));
    auto s = initial_stage(vec(c, {3, 4}));
    for (int j = 1; j <= 4; ++j) {
      auto Q = residual(s, phi);
      for (const auto& q : Q) CHECK(q.degree() == -1);
      auto next = advance_stage(s, phi);
      CHECK(next.partial_sums == s.partial_sums);
      s = next;
    }
  }
  SUBCASE("translation by p") {
    IteratedMap phi(PolyMap({poly(c, 1, 7, {{{1}, 1}, {{0}, 5}})}));
    auto s0 = initial_stage(vec(c, {0}));
    auto Q = residual(s0, phi);
    auto mod_p = PadicContext::make(5, 1);
    CHECK(Q[0] == MahlerPoly(mod_p, {PadicInt(mod_p, -1L)}));
    auto s1 = advance_stage(s0, phi);
    CHECK(s1.increments[0] == MahlerPoly(c, {PadicInt::zero(c), PadicInt::one(c)}));
    CHECK(s1.partial_sums[0] == MahlerPoly(c, {PadicInt::zero(c), PadicInt(c, 5L)}));
  }
  SUBCASE("multiplication by 1 + p") {
    IteratedMap phi(PolyMap({poly(c, 1, 7, {{{1}, 6}})}));
    auto s0 = initial_stage(vec(c, {1}));
    auto Q = residual(s0, phi);
    auto mod_p = PadicContext::make(5, 1);
    CHECK(Q[0] == MahlerPoly(mod_p, {PadicInt(mod_p, -1L)}));
    auto s1 = advance_stage(s0, phi);
    CHECK(s1.increments[0] == MahlerPoly(c, {PadicInt::zero(c), PadicInt::one(c)}));
    CHECK(s1.partial_sums[0] == MahlerPoly(c, {PadicInt::one(c), PadicInt(c, 5L)}));
  }
}

TEST_CASE("interpolate examples") {
  auto c = PadicContext::make(5, 8);
  SUBCASE("identity gives the constant series") {
    auto f = interpolate(PolyMap::identity(c, 1, 9), vec(c, {3}));
    REQUIRE(f.size() == 1);
    CHECK(f[0].coefficients()[0].residue() == 3);
    for (std::size_t k = 1; k < f[0].coefficients().size(); ++k) CHECK(f[0].coefficients()[k].is_zero());
  }
  SUBCASE("translation by p") {
    auto f = interpolate(PolyMap({poly(c, 1, 9, {{{1}, 1}, {{0}, 5}})}), vec(c, {0}));
    for (long k = 0; k <= 30; ++k) CHECK(at(f[0], k) == PadicInt(c, 5 * k));
  }
  SUBCASE("multiplication by 1 + p") {
    auto f = interpolate(PolyMap({poly(c, 1, 9, {{{1}, 6}})}), vec(c, {1}));
    const auto& b = f[0].coefficients();
    CHECK(b.size() == 17);
    for (int k = 0; k <= 16; ++k) CHECK(b[static_cast<std::size_t>(k)] == PadicInt(c, c->power(std::min(k, 8))));
    PadicInt expect = PadicInt::one(c);
    for (long k = 0; k <= 30; ++k) {
      CHECK(at(f[0], k) == expect);
      expect *= PadicInt(c, 6L);
    }
  }
}

TEST_CASE("interpolate rejects maps outside the hypotheses") {
  auto c = PadicContext::make(5, 6);
  try {
    interpolate(PolyMap({poly(c, 1, 7, {{{1}, 2}})}), vec(c, {1}));
    FAIL("expected ConditionViolated");
  } catch (const ConditionViolated& e) {
    CHECK(std::string(e.what()).find("x1") != std::string::npos);
  }
  CHECK_THROWS_AS(interpolate(PolyMap({poly(c, 1, 7, {{{1}, 1}, {{3}, 5}})}), vec(c, {1})), ConditionViolated);
  CHECK_THROWS_AS(interpolate(PolyMap::identity(c, 1, 7), vec(c, {1}), {.stages = 2}), PrecisionExhausted);
}

TEST_CASE("iterated map conditions use the power") {
  auto c = PadicContext::make(5, 6);
  // x -> 2x is the identity mod 5 after four steps
  PolyMap twice({poly(c, 1, 7, {{{1}, 2}})});
  CHECK_THROWS_AS(IteratedMap(twice, 2).require_interpolation_conditions(), ConditionViolated);
  CHECK_NOTHROW(IteratedMap(twice, 4).require_interpolation_conditions());
  auto f = interpolate(IteratedMap(twice, 4), vec(c, {3}));
  PadicInt expect(c, 3L);
  for (long k = 0; k <= 20; ++k) {
    CHECK(at(f[0], k) == expect);
    expect *= PadicInt(c, 16L);
  }
}

TEST_CASE("two-dimensional nonlinear interpolation agrees with iteration") {
  auto c = PadicContext::make(7, 10);
  // (x + 7 y^2 + 49 x^3, y + 7)
  PolyMap phi({poly(c, 2, 11, {{{1, 0}, 1}, {{0, 2}, 7}, {{3, 0}, 49}}), poly(c, 2, 11, {{{0, 1}, 1}, {{0, 0}, 7}})});
  auto omega = vec(c, {2, 5});
  auto f = interpolate(phi, omega);
  PadicVec x = omega;
  for (long k = 0; k <= 30; ++k) {
    CHECK(at(f[0], k) == x[0]);
    CHECK(at(f[1], k) == x[1]);
    x = phi.evaluate(x);
  }
  for (const auto& fi : f) {
    for (std::size_t k = 0; k < fi.coefficients().size(); ++k) {
      CHECK(fi.coefficients()[k].valuation().value >= std::min(fi.tail_rule().at(k), 10));
    }
  }
}

TEST_CASE("random maps: functional equation, start value and tail bound") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 12; ++t) {
    const std::uint64_t p = std::vector<std::uint64_t>{5, 7, 11}[t % 3];
    const auto cs = testing_helpers::random_interpolation_case(p, 1 + t % 3, 10, rng);
    const auto f = interpolate(cs.phi, cs.omega);
    std::vector<PadicVec> vals;
    for (long z = 0; z <= 21; ++z) {
      std::vector<PadicInt> v;
      for (const auto& fi : f) v.push_back(at(fi, z));
      vals.emplace_back(std::move(v));
    }
    CHECK(vals[0] == cs.omega);
    for (std::size_t z = 0; z <= 20; ++z) CHECK(cs.phi.evaluate(vals[z]) == vals[z + 1]);
    for (const auto& fi : f) {
      const int K = fi.context()->precision();
      for (std::size_t k = 0; k < fi.coefficients().size(); ++k) {
        CHECK(fi.coefficients()[k].valuation().value >= std::min(fi.tail_rule().at(k), K));
      }
    }
  }
}
