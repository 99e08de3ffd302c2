#include "padyn/zero_counting.hpp"

#include <algorithm>

namespace padyn {

std::string to_string(ZeroKind kind) {
  switch (kind) {
    case ZeroKind::IdenticallyZeroAtPrecision: return "identically_zero_at_precision";
    case ZeroKind::FiniteZeros: return "finite_zeros";
    case ZeroKind::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

ZeroVerdict classify(const AnalyticWitness& w, int floor) {
  ZeroVerdict out;
  if (floor < 1) throw std::invalid_argument("classify: floor must be >= 1");
  for (std::size_t m = 0; m < w.coeffs.size(); ++m) {
    if (w.precision[m] < floor) {
      out.reason = "coefficient " + std::to_string(m) + " known to " + std::to_string(w.precision[m]) +
                   " digits, below the floor " + std::to_string(floor);
      return out;
    }
  }
  const std::uint64_t p = w.ctx->prime();
  std::vector<int> vals;
  for (const auto& a : w.coeffs) vals.push_back(valuation_of(a.residue(), p, floor));
  int vmin = floor;
  for (int v : vals) vmin = std::min(vmin, v);
  if (vmin >= floor) {
    if (w.tail_bound >= floor) {
      out.kind = ZeroKind::IdenticallyZeroAtPrecision;
      out.reason = "all coefficients vanish mod p^" + std::to_string(floor);
    } else {
      out.reason = "tail bound " + std::to_string(w.tail_bound) + " below the floor";
    }
    return out;
  }
  std::size_t last = 0;
  for (std::size_t m = 0; m < vals.size(); ++m) {
    if (vals[m] == vmin) last = m;
  }
  if (w.tail_bound > vmin) {
    out.kind = ZeroKind::FiniteZeros;
    out.bound = static_cast<int>(last);
    out.min_valuation = vmin;
    out.certified = true;
    out.reason = "minimal valuation " + std::to_string(vmin) + " last attained at index " + std::to_string(last);
  } else {
    out.reason = "tail may attain the minimal valuation " + std::to_string(vmin);
  }
  return out;
}

std::vector<std::uint64_t> locate_natural_zeros(const MahlerSeries& f, std::uint64_t scan_bound, std::size_t limit) {
  if (!f.tail_certified()) {
    throw TailNotCertified("locate_natural_zeros: series tail is not certified at working precision");
  }
  std::vector<std::uint64_t> out;
  if (limit == 0) return out;
  const MahlerPoly poly(f.context(), f.coefficients());
  const auto vals = poly.values(static_cast<std::size_t>(scan_bound) + 1);
  for (std::size_t k = 0; k < vals.size(); ++k) {
    if (vals[k].is_zero()) {
      out.push_back(k);
      if (out.size() >= limit) break;
    }
  }
  return out;
}

}  // namespace padyn
