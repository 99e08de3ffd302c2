#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "padyn/poly.hpp"

using namespace padyn;
using testing_helpers::poly;
using testing_helpers::random_map;
using testing_helpers::random_point;
using testing_helpers::vec;

TEST_CASE("evaluate examples") {
  auto c = PadicContext::make(5, 3);
  auto x1 = MultiPoly::variable(c, 2, 4, 0);
  CHECK(x1.evaluate(vec(c, {7, 9})).residue() == 7);
  auto k = MultiPoly::constant(c, 2, 4, PadicInt(c, 11L));
  CHECK(k.evaluate(vec(c, {3, 4})).residue() == 11);
  auto f = poly(c, 1, 4, {{{2}, 1}, {{0}, 1}});
  CHECK(f.evaluate(vec(c, {2})).residue() == 5);
  CHECK_THROWS_AS(f.evaluate(vec(c, {1, 2})), DimensionMismatch);
}

TEST_CASE("compose examples") {
  auto c = PadicContext::make(5, 6);
  PolyMap f({poly(c, 2, 3, {{{1, 0}, 1}, {{0, 2}, 1}}), poly(c, 2, 3, {{{0, 1}, 1}, {{0, 0}, 1}})});
  CHECK(compose(f, PolyMap::identity(c, 2, 3)) == f);

  PolyMap tc({poly(c, 1, 2, {{{1}, 1}, {{0}, 3}})});
  PolyMap td({poly(c, 1, 2, {{{1}, 1}, {{0}, 4}})});
  CHECK(compose(tc, td) == PolyMap({poly(c, 1, 2, {{{1}, 1}, {{0}, 7}})}));

  PolyMap sq({poly(c, 1, 2, {{{2}, 1}})});
  PolyMap inc({poly(c, 1, 2, {{{1}, 1}, {{0}, 1}})});
  CHECK(compose(sq, inc) == PolyMap({poly(c, 1, 2, {{{2}, 1}, {{1}, 2}, {{0}, 1}})}));
}

TEST_CASE("iterate_map examples") {
  auto c = PadicContext::make(7, 6);
  PolyMap twice({poly(c, 1, 3, {{{1}, 2}})});
  CHECK(iterate_map(twice, 1) == twice);
  CHECK(iterate_map(twice, 3) == PolyMap({poly(c, 1, 3, {{{1}, 8}})}));
  CHECK_THROWS(iterate_map(twice, 0));

  PolyMap f({poly(c, 2, 4, {{{1, 0}, 1}, {{0, 2}, 1}}), poly(c, 2, 4, {{{0, 1}, 1}, {{0, 0}, 1}})});
  // (x + y^2 + (y+1)^2, y + 2)
  PolyMap expected({poly(c, 2, 4, {{{1, 0}, 1}, {{0, 2}, 2}, {{0, 1}, 2}, {{0, 0}, 1}}),
                    poly(c, 2, 4, {{{0, 1}, 1}, {{0, 0}, 2}})});
  CHECK(iterate_map(f, 2) == expected);
}

TEST_CASE("jacobian examples") {
  auto c = PadicContext::make(5, 4);
  CHECK(jacobian_at(PolyMap::identity(c, 3, 2), vec(c, {1, 2, 3})) == PadicMatrix::identity(c, 3));
  PolyMap f({poly(c, 2, 3, {{{1, 0}, 1}, {{0, 2}, 1}}), poly(c, 2, 3, {{{0, 1}, 1}, {{0, 0}, 1}})});
  CHECK(jacobian_at(f, vec(c, {0, 0})) == PadicMatrix::identity(c, 2));
  const long two[] = {2};
  CHECK(jacobian_at(PolyMap({poly(c, 1, 3, {{{1}, 2}})}), vec(c, {17})) == PadicMatrix::from_integers(c, 1, two));
}

TEST_CASE("conditions (a) and (b)") {
  auto c = PadicContext::make(5, 5);
  CHECK(check_condition_a(PolyMap::identity(c, 2, 3)));
  PolyMap xpx2({poly(c, 1, 4, {{{1}, 1}, {{2}, 5}})});
  CHECK(check_condition_a(xpx2));
  CHECK(check_condition_b(xpx2));
  PolyMap twice({poly(c, 1, 4, {{{1}, 2}})});
  CHECK_FALSE(check_condition_a(twice));
  REQUIRE(condition_a_violation(twice).has_value());
  CHECK(condition_a_violation(twice)->find("x1") != std::string::npos);
  CHECK(check_condition_b(twice));
  PolyMap cubic({poly(c, 1, 4, {{{1}, 1}, {{3}, 1}})});
  CHECK_FALSE(check_condition_b(cubic));
  CHECK(condition_b_violation(cubic)->find("x1^3") != std::string::npos);
}

TEST_CASE("rescale_conjugate examples") {
  auto c = PadicContext::make(5, 6);
  auto c5 = PadicContext::make(5, 5);
  CHECK(rescale_conjugate(PolyMap({poly(c, 1, 7, {{{0}, 5 * 3}})})) == PolyMap({poly(c5, 1, 7, {{{0}, 3}})}));
  CHECK(rescale_conjugate(PolyMap({poly(c, 1, 7, {{{1}, 2}})})) == PolyMap({poly(c5, 1, 7, {{{1}, 2}})}));
  CHECK(rescale_conjugate(PolyMap({poly(c, 1, 7, {{{0}, 5}, {{1}, 1}, {{2}, 1}})})) ==
        PolyMap({poly(c5, 1, 7, {{{0}, 1}, {{1}, 1}, {{2}, 5}})}));
  CHECK_THROWS_AS(rescale_conjugate(PolyMap({poly(c, 1, 7, {{{0}, 1}, {{1}, 1}})})), ConstantTermNotDivisible);
}

TEST_CASE("rescale_conjugate output satisfies condition (b)") {
  std::mt19937_64 rng(5);
  for (std::uint64_t p : {5u, 7u, 11u}) {
    auto c = PadicContext::make(p, 8);
    for (int t = 0; t < 30; ++t) {
      const std::size_t g = 1 + rng() % 3;
      auto F = rescale_conjugate(random_map(c, g, 5, 9, rng, true));
      CHECK(check_condition_b(F));
    }
  }
}

TEST_CASE("evaluation is compatible with composition") {
  std::mt19937_64 rng(6);
  auto c = PadicContext::make(7, 10);
  for (int t = 0; t < 30; ++t) {
    const std::size_t g = 1 + rng() % 3;
    // cap large enough that nothing is truncated
    auto f = random_map(c, g, 3, 9, rng, false);
    auto h = random_map(c, g, 3, 9, rng, false);
    auto fh = compose(f, h);
    for (int s = 0; s < 5; ++s) {
      auto v = random_point(c, g, rng);
      CHECK(fh.evaluate(v) == f.evaluate(h.evaluate(v)));
    }
  }
}

TEST_CASE("degree-K truncation is lossless for condition (a)/(b) maps") {
  std::mt19937_64 rng(8);
  for (std::uint64_t p : {5u, 7u}) {
    const int K = 6;
    auto c = PadicContext::make(p, K + 1);
    for (int t = 0; t < 10; ++t) {
      const std::size_t g = 1 + rng() % 2;
      auto F = rescale_conjugate(random_map(c, g, 4, 2 * (K + 1), rng, true));
      while (!matrix_invertible_mod_p(F.linear_part())) F = rescale_conjugate(random_map(c, g, 4, 2 * (K + 1), rng, true));
      const auto Fc = F.context();
      const auto M = affine_order_mod_p(F.linear_part(), F.constant_part());
      auto small = iterate_map(F.with_degree_cap(K + 1), M);
      auto big = iterate_map(F.with_degree_cap(2 * (K + 1)), M);
      CHECK(check_condition_a(small));
      for (int s = 0; s < 5; ++s) {
        auto v = random_point(Fc, g, rng);
        CHECK(small.evaluate(v) == big.evaluate(v));
      }
    }
  }
}

TEST_CASE("jacobian of an iterate at a fixed point is the power of the jacobian") {
  auto c = PadicContext::make(5, 8);
  // fixed point at the origin
  PolyMap f({poly(c, 2, 6, {{{1, 0}, 2}, {{0, 1}, 1}, {{1, 1}, 3}}), poly(c, 2, 6, {{{1, 0}, 1}, {{0, 1}, 1}, {{0, 2}, 7}})});
  auto origin = vec(c, {0, 0});
  auto J = jacobian_at(f, origin);
  auto J3 = J * J * J;
  CHECK(jacobian_at(iterate_map(f, 3), origin) == J3);
}
