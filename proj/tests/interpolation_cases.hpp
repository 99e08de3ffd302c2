#pragma once

// Random maps satisfying the interpolation hypotheses: rescale a random
// integral map with constant terms divisible by p, then take the power that
// makes it the identity mod p.

#include "helpers.hpp"
#include "padyn/interpolator.hpp"

namespace testing_helpers {

struct InterpolationCase {
  padyn::IteratedMap phi;
  padyn::PadicVec omega;
};

inline InterpolationCase random_interpolation_case(std::uint64_t p, std::size_t g, int precision,
                                                   std::mt19937_64& rng) {
  auto hi = padyn::PadicContext::make(p, precision + 1);
  for (;;) {
    auto F = padyn::rescale_conjugate(random_map(hi, g, 4, precision + 1, rng, true));
    if (!padyn::matrix_invertible_mod_p(F.linear_part())) continue;
    const std::uint64_t M = padyn::affine_order_mod_p(F.linear_part(), F.constant_part());
    auto omega = random_point(F.context(), g, rng);
    return {padyn::IteratedMap(F, M), omega};
  }
}

}  // namespace testing_helpers
