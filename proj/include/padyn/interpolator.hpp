#pragma once

// Stage-by-stage construction of Mahler series f_1, ..., f_n with
//   f(0) = omega   and   f(z + 1) = phi(f(z))
// for a map phi that is the identity mod p and whose degree-d coefficients
// are divisible by p^{d-1}.
//
// Stage j adds p^j h_j with deg h_j <= 2j - 1 and h_j(0) = 0, chosen so that
// the partial sum g_j satisfies g_j(z + 1) == phi(g_j(z)) mod p^{j+1}. All
// arithmetic happens on sample values at z = 0, 1, 2, ...; the degree bounds
// say how many samples pin each polynomial down.

#include <cstdint>
#include <optional>
#include <vector>

#include "padyn/mahler.hpp"
#include "padyn/poly.hpp"

namespace padyn {

// The self-map base^power of Z_p^g, evaluated point by point so that large
// powers never have to be expanded symbolically.
class IteratedMap {
 public:
  explicit IteratedMap(PolyMap base, std::uint64_t power = 1);

  const PolyMap& base() const { return base_; }
  std::uint64_t power() const { return power_; }
  std::size_t dimension() const { return base_.dimension(); }
  const ContextPtr& context() const { return base_.context(); }

  PadicVec evaluate(const PadicVec& point) const;

  // Throws ConditionViolated (naming the offending term) unless base^power
  // is congruent to the identity mod p and base has the p^{d-1} divisibility.
  void require_interpolation_conditions() const;

 private:
  PolyMap base_;
  std::uint64_t power_;
};

struct InterpolationStage {
  int j = 0;
  std::vector<MahlerPoly> increments;    // h_{i,j}
  std::vector<MahlerPoly> partial_sums;  // g_{i,j}
  // phi(g_j(z)) for z = 0, 1, ..., filled while checking the stage.
  std::vector<PadicVec> phi_values;
};

InterpolationStage initial_stage(const PadicVec& omega);

// Q_{i,j} mod p (returned in a precision-1 context), where
//   g_{j-1}(z + 1) - phi(g_{j-1}(z)) = p^j Q_j(z),
// recovered from the samples z = 0, ..., 2j - 2.
std::vector<MahlerPoly> residual(const InterpolationStage& previous, const IteratedMap& phi);

// Builds stage j from stage j - 1 and checks the congruence
// g_j(z + 1) == phi(g_j(z)) mod p^{j+1} on z = 0, ..., 2j + 1 and on ten
// pseudo-random p-adic integers.
InterpolationStage advance_stage(const InterpolationStage& previous, const IteratedMap& phi);

struct InterpolationOptions {
  // Requested stage count; stages j >= K only add multiples of p^K and are
  // no-ops at working precision.
  int stages = -1;  // -1 means 2K
};

// One Mahler series per coordinate, coefficients b_0 .. b_{2K}, tail rule
// ceil((k + 1) / 2).
std::vector<MahlerSeries> interpolate(const IteratedMap& phi, const PadicVec& omega,
                                      InterpolationOptions options = {});
std::vector<MahlerSeries> interpolate(const PolyMap& phi, const PadicVec& omega,
                                      InterpolationOptions options = {});

}  // namespace padyn
