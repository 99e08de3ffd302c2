#pragma once

// Strassmann-style zero counting for power series on Z_p, and the direct
// scan for zeros at natural numbers.

#include <cstdint>
#include <string>
#include <vector>

#include "padyn/mahler.hpp"

namespace padyn {

// Monomial coefficients with per-index certified precision and a valuation
// bound for everything past the stored range.
using AnalyticWitness = PowerSeries;

enum class ZeroKind { IdenticallyZeroAtPrecision, FiniteZeros, Inconclusive };

struct ZeroVerdict {
  ZeroKind kind = ZeroKind::Inconclusive;
  // FiniteZeros: the function has at most `bound` zeros in Z_p.
  int bound = 0;
  // Minimal valuation among the retained coefficients (FiniteZeros only).
  int min_valuation = 0;
  // FiniteZeros is certified when the tail cannot reach the minimum.
  // IdenticallyZeroAtPrecision is never certified.
  bool certified = false;
  std::string reason;

  bool operator==(const ZeroVerdict&) const = default;
};

std::string to_string(ZeroKind kind);

// Decides the witness using only its first `floor` digits. Coefficients
// known to fewer digits make the verdict Inconclusive. Reading a fixed
// number of digits keeps the answer stable when the witness is recomputed
// at a different working precision.
ZeroVerdict classify(const AnalyticWitness& w, int floor = 1);

// Natural numbers k <= scan_bound with f(k) == 0 mod p^K, ascending.
// Stops after `limit` hits.
std::vector<std::uint64_t> locate_natural_zeros(const MahlerSeries& f, std::uint64_t scan_bound,
                                                std::size_t limit = SIZE_MAX);

}  // namespace padyn
