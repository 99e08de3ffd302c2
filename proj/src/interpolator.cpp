#include "padyn/interpolator.hpp"

#include <random>

namespace padyn {

IteratedMap::IteratedMap(PolyMap base, std::uint64_t power) : base_(std::move(base)), power_(power) {
  if (power_ == 0) throw std::invalid_argument("IteratedMap: power must be >= 1");
}

PadicVec IteratedMap::evaluate(const PadicVec& point) const {
  PadicVec x = point;
  for (std::uint64_t i = 0; i < power_; ++i) x = base_.evaluate(x);
  return x;
}

void IteratedMap::require_interpolation_conditions() const {
  if (auto why = condition_b_violation(base_)) throw ConditionViolated("condition (b) fails: " + *why);
  if (power_ == 1) {
    if (auto why = condition_a_violation(base_)) throw ConditionViolated("condition (a) fails: " + *why);
    return;
  }
  // Mod p the base is affine (its higher terms are divisible by p), so the
  // power can be formed exactly at precision 1.
  const auto mod_p = PadicContext::make(context()->prime(), 1);
  const PolyMap reduced = base_.reduced(mod_p).with_degree_cap(1);
  if (auto why = condition_a_violation(iterate_map(reduced, power_))) {
    throw ConditionViolated("condition (a) fails for the " + std::to_string(power_) + "-th iterate: " + *why);
  }
}

namespace {

std::vector<PadicVec> partial_sum_values(const std::vector<MahlerPoly>& g, std::size_t count) {
  std::vector<std::vector<PadicInt>> per_coord;
  for (const auto& gi : g) per_coord.push_back(gi.values(count));
  std::vector<PadicVec> out;
  out.reserve(count);
  for (std::size_t z = 0; z < count; ++z) {
    std::vector<PadicInt> v;
    for (const auto& c : per_coord) v.push_back(c[z]);
    out.emplace_back(std::move(v));
  }
  return out;
}

PadicVec evaluate_at(const std::vector<MahlerPoly>& g, const mpz_class& z) {
  std::vector<PadicInt> v;
  for (const auto& gi : g) v.push_back(gi.evaluate(z));
  return PadicVec(std::move(v));
}

bool divisible(const PadicInt& x, int e) {
  const auto& ctx = x.context();
  if (e >= ctx->precision()) return x.is_zero();
  return mpz_divisible_p(x.residue().get_mpz_t(), ctx->power(e).get_mpz_t());
}

// phi(g(z)) for z = 0 .. count-1, reusing whatever the stage already holds.
std::vector<PadicVec> phi_on_samples(const InterpolationStage& stage, const IteratedMap& phi,
                                     const std::vector<PadicVec>& g_values, std::size_t count) {
  std::vector<PadicVec> out;
  out.reserve(count);
  for (std::size_t z = 0; z < count; ++z) {
    out.push_back(z < stage.phi_values.size() ? stage.phi_values[z] : phi.evaluate(g_values[z]));
  }
  return out;
}

void check_stage(InterpolationStage& stage, const IteratedMap& phi) {
  const int j = stage.j;
  const auto& ctx = phi.context();
  const int modulus_exp = j + 1;
  const std::size_t count = static_cast<std::size_t>(2 * j + 2);
  const auto g_values = partial_sum_values(stage.partial_sums, count + 1);
  stage.phi_values = phi_on_samples(InterpolationStage{}, phi, g_values, count);
  for (std::size_t z = 0; z < count; ++z) {
    for (std::size_t i = 0; i < phi.dimension(); ++i) {
      if (!divisible(g_values[z + 1][i] - stage.phi_values[z][i], modulus_exp)) {
        throw DivisibilityFailure("stage " + std::to_string(j) + ": functional equation fails mod p^" +
                                  std::to_string(modulus_exp) + " at z = " + std::to_string(z));
      }
    }
  }
  // Spot checks away from the sample grid.
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(j));
  gmp_randclass gmp_rng(gmp_randinit_default);
  gmp_rng.seed(static_cast<unsigned long>(rng()));
  for (int t = 0; t < 10; ++t) {
    const mpz_class z = gmp_rng.get_z_range(ctx->modulus());
    const PadicVec at_z = evaluate_at(stage.partial_sums, z);
    const PadicVec at_next = evaluate_at(stage.partial_sums, z + 1);
    const PadicVec image = phi.evaluate(at_z);
    for (std::size_t i = 0; i < phi.dimension(); ++i) {
      if (!divisible(at_next[i] - image[i], modulus_exp)) {
        throw DivisibilityFailure("stage " + std::to_string(j) + ": functional equation fails mod p^" +
                                  std::to_string(modulus_exp) + " at a random p-adic point");
      }
    }
  }
}

}  // namespace

InterpolationStage initial_stage(const PadicVec& omega) {
  InterpolationStage s;
  s.j = 0;
  for (std::size_t i = 0; i < omega.size(); ++i) {
    MahlerPoly c(omega.context(), {omega[i]});
    s.increments.push_back(c);
    s.partial_sums.push_back(c);
  }
  return s;
}

std::vector<MahlerPoly> residual(const InterpolationStage& previous, const IteratedMap& phi) {
  const int j = previous.j + 1;
  const auto& ctx = phi.context();
  if (j >= ctx->precision()) {
    throw PrecisionExhausted("residual at stage " + std::to_string(j) + " needs precision above " +
                             std::to_string(ctx->precision()));
  }
  const auto mod_p = PadicContext::make(ctx->prime(), 1);
  const std::size_t samples = static_cast<std::size_t>(2 * j - 1);
  const auto g_values = partial_sum_values(previous.partial_sums, samples + 1);
  const auto images = phi_on_samples(previous, phi, g_values, samples);
  const mpz_class& pj = ctx->power(j);

  std::vector<MahlerPoly> out;
  for (std::size_t i = 0; i < phi.dimension(); ++i) {
    std::vector<PadicInt> q;
    q.reserve(samples);
    for (std::size_t z = 0; z < samples; ++z) {
      const PadicInt diff = g_values[z + 1][i] - images[z][i];
      if (!mpz_divisible_p(diff.residue().get_mpz_t(), pj.get_mpz_t())) {
        throw DivisibilityFailure("stage " + std::to_string(j) + ": residual at z = " + std::to_string(z) +
                                  " is not divisible by p^" + std::to_string(j));
      }
      mpz_class quotient;
      mpz_divexact(quotient.get_mpz_t(), diff.residue().get_mpz_t(), pj.get_mpz_t());
      q.emplace_back(mod_p, quotient);
    }
    out.push_back(values_to_mahler(q));
  }
  return out;
}

InterpolationStage advance_stage(const InterpolationStage& previous, const IteratedMap& phi) {
  const int j = previous.j + 1;
  const auto& ctx = phi.context();
  const auto Q = residual(previous, phi);
  const PadicInt pj(ctx, ctx->power(j));

  InterpolationStage next;
  next.j = j;
  for (std::size_t i = 0; i < phi.dimension(); ++i) {
    // Off-diagonal Jacobian terms vanish mod p, so each coordinate solves
    // Q + h(z + 1) - h(z) == 0 on its own.
    MahlerPoly h = solve_difference(Q[i]).lifted(ctx);
    if (h.degree() > 2 * j - 1 || !h.coefficient(0).is_zero()) {
      throw std::logic_error("interpolator: increment violates the degree ledger at stage " + std::to_string(j));
    }
    next.partial_sums.push_back(previous.partial_sums[i] + h.scaled(pj));
    next.increments.push_back(std::move(h));
  }
  check_stage(next, phi);
  return next;
}

std::vector<MahlerSeries> interpolate(const IteratedMap& phi, const PadicVec& omega, InterpolationOptions options) {
  const auto& ctx = phi.context();
  require_same_context(ctx, omega.context());
  if (omega.size() != phi.dimension()) throw DimensionMismatch("interpolate: omega has wrong dimension");
  phi.require_interpolation_conditions();

  const int K = ctx->precision();
  const int requested = options.stages < 0 ? 2 * K : options.stages;
  if (requested < K - 1) {
    throw PrecisionExhausted("interpolate: " + std::to_string(requested) + " stages cannot reach precision " +
                             std::to_string(K) + " (need at least " + std::to_string(K - 1) + ")");
  }
  const int effective = std::min(requested, K - 1);

  InterpolationStage stage = initial_stage(omega);
  check_stage(stage, phi);
  for (int j = 1; j <= effective; ++j) stage = advance_stage(stage, phi);

  const std::size_t T = static_cast<std::size_t>(2 * K);
  std::vector<MahlerSeries> out;
  for (const auto& g : stage.partial_sums) {
    std::vector<PadicInt> b;
    b.reserve(T + 1);
    for (std::size_t k = 0; k <= T; ++k) b.push_back(g.coefficient(k));
    out.emplace_back(ctx, std::move(b), TailRule{0, false});
  }
  return out;
}

std::vector<MahlerSeries> interpolate(const PolyMap& phi, const PadicVec& omega, InterpolationOptions options) {
  return interpolate(IteratedMap(phi, 1), omega, options);
}

}  // namespace padyn
