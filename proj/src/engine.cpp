#include "padyn/engine.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace padyn {

namespace {

std::string point_to_string(const std::vector<std::uint64_t>& x) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

int status_rank(Status s) {
  switch (s) {
    case Status::Certified: return 2;
    case Status::PrecisionQualified: return 1;
    case Status::Uncertified: return 0;
  }
  return 0;
}

Status status_of_rank(int r) {
  return r >= 2 ? Status::Certified : (r == 1 ? Status::PrecisionQualified : Status::Uncertified);
}

Status weaker(Status a, Status b) { return status_rank(a) <= status_rank(b) ? a : b; }

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::size_t point_bits(const RationalPoint& x) {
  std::size_t bits = 0;
  for (const auto& c : x) {
    bits += mpz_sizeinbase(c.get_num_mpz_t(), 2) + mpz_sizeinbase(c.get_den_mpz_t(), 2);
  }
  return bits;
}

}  // namespace

// ---------------------------------------------------------------- model

void AffineModel::validate() const {
  const std::size_t g = dimension;
  if (g == 0) throw InvalidModel("dimension must be at least 1");
  if (map.size() != g) throw InvalidModel("map has " + std::to_string(map.size()) + " components, expected " + std::to_string(g));
  if (point.size() != g) throw InvalidModel("point has " + std::to_string(point.size()) + " coordinates, expected " + std::to_string(g));
  auto check_arity = [g](const RationalPoly& f, const std::string& what) {
    if (f.num_vars() != g) throw InvalidModel(what + " has " + std::to_string(f.num_vars()) + " variables, expected " + std::to_string(g));
  };
  for (std::size_t i = 0; i < g; ++i) check_arity(map[i], "map component " + std::to_string(i + 1));
  for (std::size_t i = 0; i < variety.size(); ++i) check_arity(variety[i], "variety equation " + std::to_string(i + 1));
  if (inverse) {
    if (inverse->size() != g) throw InvalidModel("inverse has " + std::to_string(inverse->size()) + " components, expected " + std::to_string(g));
    for (std::size_t i = 0; i < g; ++i) check_arity((*inverse)[i], "inverse component " + std::to_string(i + 1));
    const RationalMap id = identity_map(g);
    if (compose(map, *inverse) != id) throw InvalidModel("map composed with inverse is not the identity");
    if (compose(*inverse, map) != id) throw InvalidModel("inverse composed with map is not the identity");
  }
}

AffineModel AffineModel::inverted() const {
  if (!inverse) throw InvalidModel("model has no inverse");
  AffineModel out = *this;
  out.map = *inverse;
  out.inverse = map;
  return out;
}

void RunConfig::validate() const {
  if (prime && (*prime < 5 || !is_prime(*prime))) throw std::invalid_argument("prime must be a prime >= 5");
  if (precision < 2) throw std::invalid_argument("precision must be at least 2");
  if (stages == 0 || stages < -1) throw std::invalid_argument("stages must be positive");
  if (scan_bound == 0) throw std::invalid_argument("scan bound must be positive");
  if (verify_count < 0) throw std::invalid_argument("verify count must be non-negative");
  if (retry_max < 0) throw std::invalid_argument("retry max must be non-negative");
}

// ---------------------------------------------------------------- primes

std::optional<ResidueOrbit> residue_orbit(const AffineModel& model, std::uint64_t p, std::size_t cap) {
  std::vector<std::uint64_t> x;
  for (const auto& c : model.point) x.push_back(reduce_mod_p(c, p));
  std::map<std::vector<std::uint64_t>, std::size_t> seen;
  ResidueOrbit out;
  while (true) {
    auto [it, inserted] = seen.emplace(x, out.points.size());
    if (!inserted) {
      out.preperiod = it->second;
      out.period = out.points.size() - it->second;
      return out;
    }
    if (out.points.size() >= cap) return std::nullopt;
    out.points.push_back(x);
    std::vector<std::uint64_t> next;
    for (const auto& f : model.map) next.push_back(f.evaluate_mod_p(x, p));
    x = std::move(next);
  }
}

std::string prime_rejection(const AffineModel& model, std::uint64_t p, std::size_t orbit_cap) {
  if (p < 5 || !is_prime(p)) return std::to_string(p) + " is not a prime >= 5";
  for (std::size_t i = 0; i < model.map.size(); ++i) {
    if (!model.map[i].p_integral(p)) return "p divides a denominator of map component " + std::to_string(i + 1);
  }
  for (std::size_t i = 0; i < model.point.size(); ++i) {
    if (!p_integral(model.point[i], p)) return "p divides the denominator of point coordinate " + std::to_string(i + 1);
  }
  for (std::size_t i = 0; i < model.variety.size(); ++i) {
    if (!model.variety[i].p_integral(p)) return "p divides a denominator of variety equation " + std::to_string(i + 1);
  }
  const auto orbit = residue_orbit(model, p, orbit_cap);
  if (!orbit) return "residue orbit does not close within " + std::to_string(orbit_cap) + " steps";

  const std::size_t g = model.dimension;
  std::vector<RationalPoly> partials;
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < g; ++j) partials.push_back(model.map[i].derivative(j));
  const auto mod_p = PadicContext::make(p, 1);
  for (const auto& x : orbit->points) {
    PadicMatrix J(mod_p, g);
    for (std::size_t i = 0; i < g; ++i)
      for (std::size_t j = 0; j < g; ++j)
        J.set(i, j, PadicInt(mod_p, static_cast<long>(partials[i * g + j].evaluate_mod_p(x, p))));
    if (determinant_mod_p(J) == 0) return "Jacobian determinant vanishes mod p at residue point " + point_to_string(x);
  }
  return {};
}

std::uint64_t select_prime(const std::vector<AffineModel>& models, std::uint64_t limit, std::size_t orbit_cap) {
  std::string last;
  for (std::uint64_t p = 5; p < limit; ++p) {
    if (!is_prime(p)) continue;
    bool ok = true;
    for (const auto& m : models) {
      std::string why = prime_rejection(m, p, orbit_cap);
      if (!why.empty()) {
        last = "p = " + std::to_string(p) + ": " + why;
        ok = false;
        break;
      }
    }
    if (ok) return p;
  }
  throw NoPrimeFound("no admissible prime below " + std::to_string(limit) + (last.empty() ? "" : " (last rejection: " + last + ")"));
}

std::uint64_t select_prime(const AffineModel& model, std::uint64_t limit) {
  return select_prime(std::vector<AffineModel>{model}, limit);
}

// ---------------------------------------------------------------- charts

ResidueChart::ResidueChart(std::uint64_t p, std::vector<std::uint64_t> residue) : p_(p), residue_(std::move(residue)) {}

PadicVec ResidueChart::x_hat(const ContextPtr& ctx) const {
  std::vector<PadicInt> v;
  for (auto r : residue_) v.emplace_back(ctx, mpz_class(static_cast<unsigned long>(r)));
  return PadicVec(std::move(v));
}

PadicVec ResidueChart::to_chart(const PadicVec& beta) const {
  const auto& hi = beta.context();
  if (hi->prime() != p_) throw ContextMismatch("chart: prime mismatch");
  if (beta.size() != residue_.size()) throw DimensionMismatch("chart: dimension mismatch");
  const auto lo = PadicContext::make(p_, hi->precision() - 1);
  std::vector<PadicInt> out;
  for (std::size_t i = 0; i < residue_.size(); ++i) {
    mpz_class d = beta[i].residue() - static_cast<unsigned long>(residue_[i]);
    if (!mpz_divisible_ui_p(d.get_mpz_t(), static_cast<unsigned long>(p_))) {
      throw std::logic_error("chart: point does not reduce to the chart's residue");
    }
    mpz_divexact_ui(d.get_mpz_t(), d.get_mpz_t(), static_cast<unsigned long>(p_));
    out.emplace_back(lo, d);
  }
  return PadicVec(std::move(out));
}

PadicVec ResidueChart::from_chart(const PadicVec& v) const {
  const auto hi = PadicContext::make(p_, v.context()->precision() + 1);
  std::vector<PadicInt> out;
  for (std::size_t i = 0; i < residue_.size(); ++i) {
    mpz_class x = v[i].residue() * static_cast<unsigned long>(p_) + static_cast<unsigned long>(residue_[i]);
    out.emplace_back(hi, x);
  }
  return PadicVec(std::move(out));
}

namespace {

PolyMap padic_map(const RationalMap& map, const ContextPtr& ctx) {
  int cap = 1;
  for (const auto& f : map) cap = std::max(cap, f.degree());
  std::vector<MultiPoly> comps;
  for (const auto& f : map) comps.push_back(f.to_padic(ctx, cap));
  return PolyMap(std::move(comps));
}

}  // namespace

PolyMap build_local_map(const AffineModel& model, const ResidueChart& chart, std::size_t period, int precision) {
  const std::size_t g = model.dimension;
  const std::uint64_t p = chart.prime();
  const auto hi = PadicContext::make(p, precision + 1);
  const int cap = precision + 1;
  const PolyMap phi = padic_map(model.map, hi);
  const PadicVec x_hat = chart.x_hat(hi);

  // G(u) = x_hat + u, then G <- Phi o G, period times.
  std::vector<MultiPoly> start;
  for (std::size_t i = 0; i < g; ++i) {
    start.push_back(MultiPoly::variable(hi, g, cap, i) + MultiPoly::constant(hi, g, cap, x_hat[i]));
  }
  PolyMap G(std::move(start));
  for (std::size_t step = 0; step < period; ++step) G = compose(phi, G);

  std::vector<MultiPoly> H;
  for (std::size_t i = 0; i < g; ++i) H.push_back(G[i] - MultiPoly::constant(hi, g, cap, x_hat[i]));
  PolyMap F = [&] {
    try {
      return rescale_conjugate(PolyMap(std::move(H)));
    } catch (const ConstantTermNotDivisible&) {
      throw std::logic_error("local map: residue point " + point_to_string(chart.residue()) + " is not fixed by the period");
    }
  }();
  if (!matrix_invertible_mod_p(F.linear_part())) {
    throw NotUnramifiedAtResidue("linear part of the local map at " + point_to_string(chart.residue()) +
                                 " is singular mod " + std::to_string(p) + "; try another prime");
  }
  return F;
}

std::uint64_t find_identity_power(const PolyMap& F) { return affine_order_mod_p(F.linear_part(), F.constant_part()); }

// ---------------------------------------------------------------- results

std::string to_string(Status s) {
  switch (s) {
    case Status::Certified: return "certified";
    case Status::PrecisionQualified: return "precision_qualified";
    case Status::Uncertified: return "uncertified";
  }
  return "uncertified";
}

Status status_from_string(const std::string& s) {
  if (s == "certified") return Status::Certified;
  if (s == "precision_qualified") return Status::PrecisionQualified;
  if (s == "uncertified") return Status::Uncertified;
  throw ParseError("unknown status '" + s + "'");
}

std::string to_string(BranchOutcome o) {
  switch (o) {
    case BranchOutcome::Progression: return "progression";
    case BranchOutcome::Finite: return "finite";
    case BranchOutcome::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

BranchOutcome branch_outcome_from_string(const std::string& s) {
  if (s == "progression") return BranchOutcome::Progression;
  if (s == "finite") return BranchOutcome::Finite;
  if (s == "inconclusive") return BranchOutcome::Inconclusive;
  throw ParseError("unknown branch outcome '" + s + "'");
}

bool Progression::contains(std::int64_t n) const {
  if (!two_sided && n < start) return false;
  return floor_mod(n - residue, modulus) == 0;
}

bool ProgressionSet::contains(std::int64_t n) const {
  for (const auto& pr : progressions)
    if (pr.contains(n)) return true;
  for (const auto& e : exceptional)
    if (e.n == n) return true;
  return false;
}

namespace {

// Merges residue classes mod their lcm into the coarsest disjoint classes.
std::vector<Progression> merge_classes(const std::vector<Progression>& group, bool two_sided) {
  if (group.empty()) return {};
  std::int64_t L = 1;
  for (const auto& pr : group) {
    L = std::lcm(L, pr.modulus);
    if (L > 100000) break;
  }
  if (L > 100000) {
    std::vector<Progression> out = group;
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      return std::tie(a.modulus, a.residue) < std::tie(b.modulus, b.residue);
    });
    out.erase(std::unique(out.begin(), out.end(), [](const auto& a, const auto& b) {
                return a.modulus == b.modulus && a.residue == b.residue;
              }), out.end());
    return out;
  }
  std::vector<int> cover(static_cast<std::size_t>(L), -1);
  for (const auto& pr : group) {
    for (std::int64_t r = pr.residue; r < L; r += pr.modulus) {
      auto& c = cover[static_cast<std::size_t>(r)];
      c = std::max(c, status_rank(pr.status));
    }
  }
  std::vector<bool> emitted(static_cast<std::size_t>(L), false);
  std::vector<Progression> out;
  for (std::int64_t d = 1; d <= L; ++d) {
    if (L % d != 0) continue;
    for (std::int64_t r = 0; r < d; ++r) {
      bool full = true;
      int rank = 2;
      for (std::int64_t x = r; x < L; x += d) {
        const auto idx = static_cast<std::size_t>(x);
        if (cover[idx] < 0 || emitted[idx]) {
          full = false;
          break;
        }
        rank = std::min(rank, cover[idx]);
      }
      if (!full) continue;
      for (std::int64_t x = r; x < L; x += d) emitted[static_cast<std::size_t>(x)] = true;
      out.push_back(Progression{d, r, two_sided ? 0 : r, two_sided, status_of_rank(rank)});
    }
  }
  return out;
}

}  // namespace

void ProgressionSet::canonicalize() {
  std::map<std::int64_t, bool> ex;
  for (const auto& e : exceptional) ex[e.n] = ex.count(e.n) ? (ex[e.n] || e.verified) : e.verified;

  for (auto& pr : progressions) {
    if (pr.modulus < 1) throw std::logic_error("progression modulus must be positive");
    pr.residue = floor_mod(pr.residue, pr.modulus);
    if (pr.two_sided) {
      pr.start = 0;
      continue;
    }
    while (pr.start - pr.modulus >= 0) {
      auto it = ex.find(pr.start - pr.modulus);
      if (it == ex.end()) break;
      if (!it->second) pr.status = weaker(pr.status, Status::PrecisionQualified);
      ex.erase(it);
      pr.start -= pr.modulus;
    }
  }

  std::vector<Progression> two, full, partial;
  for (const auto& pr : progressions) {
    if (pr.two_sided) two.push_back(pr);
    else if (pr.start < pr.modulus) full.push_back(pr);
    else partial.push_back(pr);
  }
  std::vector<Progression> merged = merge_classes(two, true);
  for (auto& pr : merge_classes(full, false)) merged.push_back(pr);
  std::sort(partial.begin(), partial.end(), [](const auto& a, const auto& b) {
    return std::tie(a.modulus, a.residue, a.start) < std::tie(b.modulus, b.residue, b.start);
  });
  partial.erase(std::unique(partial.begin(), partial.end()), partial.end());
  for (auto& pr : partial) merged.push_back(pr);
  std::sort(merged.begin(), merged.end(), [](const auto& a, const auto& b) {
    return std::tuple(!a.two_sided, a.modulus, a.residue, a.start) < std::tuple(!b.two_sided, b.modulus, b.residue, b.start);
  });
  progressions = std::move(merged);

  exceptional.clear();
  for (const auto& [n, verified] : ex) {
    bool covered = false;
    for (const auto& pr : progressions) covered = covered || pr.contains(n);
    if (!covered) exceptional.push_back({n, verified});
  }
}

// ---------------------------------------------------------------- exact orbit

ExactOrbit::ExactOrbit(RationalMap map, RationalPoint start, std::size_t bit_cap)
    : map_(std::move(map)), bit_cap_(bit_cap) {
  points_.push_back(std::move(start));
}

const RationalPoint* ExactOrbit::at(std::uint64_t n) {
  while (points_.size() <= n) {
    if (capped_) return nullptr;
    RationalPoint next = evaluate(map_, points_.back());
    if (point_bits(next) > bit_cap_) {
      capped_ = true;
      return nullptr;
    }
    points_.push_back(std::move(next));
  }
  return &points_[n];
}

std::optional<bool> ExactOrbit::vanishes(std::uint64_t n, const RationalPoly& h) {
  const RationalPoint* x = at(n);
  if (!x) return std::nullopt;
  return h.evaluate(*x) == 0;
}

std::optional<bool> ExactOrbit::in_variety(std::uint64_t n, const std::vector<RationalPoly>& variety) {
  const RationalPoint* x = at(n);
  if (!x) return std::nullopt;
  for (const auto& h : variety)
    if (h.evaluate(*x) != 0) return false;
  return true;
}

// ---------------------------------------------------------------- engine

Engine::Engine(AffineModel model, RunConfig config)
    : model_(std::move(model)), config_(std::move(config)), exact_(model_.map, model_.point, config_.exact_bit_cap) {
  model_.validate();
  config_.validate();
  if (config_.prime) {
    const std::string why = prime_rejection(model_, *config_.prime, config_.residue_orbit_cap);
    if (!why.empty()) throw NoPrimeFound("prime " + std::to_string(*config_.prime) + " is not admissible: " + why);
    prime_ = *config_.prime;
  } else {
    prime_ = select_prime(std::vector<AffineModel>{model_}, config_.prime_limit, config_.residue_orbit_cap);
  }
  orbit_ = *residue_orbit(model_, prime_, config_.residue_orbit_cap);
}

Engine::PrecisionData& Engine::data(int precision) {
  auto it = per_precision_.find(precision);
  if (it != per_precision_.end()) return it->second;
  PrecisionData d;
  d.ctx = PadicContext::make(prime_, precision);
  d.ctx_hi = PadicContext::make(prime_, precision + 1);
  d.phi = std::make_unique<PolyMap>(padic_map(model_.map, d.ctx_hi));
  std::vector<PadicInt> alpha;
  for (const auto& c : model_.point) alpha.push_back(PadicInt::from_rational(d.ctx_hi, c));
  d.orbit.emplace_back(std::move(alpha));
  return per_precision_.emplace(precision, std::move(d)).first->second;
}

int Engine::stages_for(int precision) const {
  if (config_.stages < 0) return 2 * precision;
  // Scale a user-supplied stage count along with the precision on retries.
  const long scaled = static_cast<long>(config_.stages) * precision / config_.precision;
  return static_cast<int>(std::max<long>(scaled, config_.stages));
}

int Engine::floor_for(int precision) const { return std::max(1, precision / 4); }

ResidueChart Engine::chart(std::uint64_t phase) const { return ResidueChart(prime_, orbit_.cycle_point(phase)); }

const PolyMap& Engine::local_map(std::uint64_t phase, int precision) {
  auto& d = data(precision);
  auto it = d.local_maps.find(phase);
  if (it != d.local_maps.end()) return it->second;
  PolyMap F = build_local_map(model_, chart(phase), orbit_.period, precision);
  return d.local_maps.emplace(phase, std::move(F)).first->second;
}

std::uint64_t Engine::identity_power(std::uint64_t phase) {
  auto it = identity_powers_.find(phase);
  if (it != identity_powers_.end()) return it->second;
  const std::uint64_t M = find_identity_power(local_map(phase, config_.precision));
  identity_powers_[phase] = M;
  return M;
}

std::vector<BranchKey> Engine::branches() {
  std::vector<BranchKey> out;
  const std::uint64_t N = orbit_.period;
  for (std::uint64_t j = 0; j < N; ++j) {
    const std::uint64_t M = identity_power(j);
    for (std::uint64_t l = 0; l < M; ++l) out.push_back(BranchKey{j, l, orbit_.preperiod + j + N * l, N * M});
  }
  return out;
}

const PadicVec& Engine::padic_orbit_point(std::uint64_t n, int precision) {
  auto& d = data(precision);
  while (d.orbit.size() <= n) d.orbit.push_back(d.phi->evaluate(d.orbit.back()));
  return d.orbit[n];
}

std::vector<MahlerSeries> Engine::branch_series(const BranchKey& key, int precision) {
  const PolyMap& F = local_map(key.phase, precision);
  const std::uint64_t M = identity_power(key.phase);
  const PadicVec omega = chart(key.phase).to_chart(padic_orbit_point(key.start, precision));
  return interpolate(IteratedMap(F, M), omega, InterpolationOptions{stages_for(precision)});
}

BranchReport Engine::analyze_branch(const BranchKey& key, int precision) {
  BranchReport report;
  report.key = key;
  report.precision = precision;
  auto& d = data(precision);
  const ContextPtr ctx = d.ctx;
  const ResidueChart ch = chart(key.phase);
  const std::size_t g = model_.dimension;

  std::vector<MahlerSeries> U;
  try {
    U = branch_series(key, precision);
  } catch (const PrecisionExhausted& e) {
    report.note = e.what();
    return report;
  }

  // The interpolated subsequence must retrace the orbit.
  for (std::uint64_t k = 0; k <= 10; ++k) {
    std::vector<PadicInt> v;
    for (const auto& u : U) v.push_back(evaluate_series(u, mpz_class(static_cast<unsigned long>(k))));
    if (!(ch.from_chart(PadicVec(std::move(v))) == padic_orbit_point(key.start + key.modulus * k, precision))) {
      throw std::logic_error("branch " + std::to_string(key.start) + " mod " + std::to_string(key.modulus) +
                             ": interpolated orbit disagrees with iteration at k = " + std::to_string(k));
    }
  }

  // Orbit points x_hat + p U(z) at precision K for z = 0 .. 2K.
  const std::size_t T = static_cast<std::size_t>(2 * precision);
  const mpz_class p(static_cast<unsigned long>(prime_));
  std::vector<std::vector<PadicInt>> coords;
  for (const auto& u : U) coords.push_back(MahlerPoly(ctx, u.coefficients()).values(T + 1));
  std::vector<PadicVec> samples;
  for (std::size_t z = 0; z <= T; ++z) {
    std::vector<PadicInt> v;
    for (std::size_t i = 0; i < g; ++i) {
      v.emplace_back(ctx, coords[i][z].residue() * p + static_cast<unsigned long>(ch.residue()[i]));
    }
    samples.emplace_back(std::move(v));
  }

  const int floor = floor_for(precision);
  std::vector<MahlerSeries> witnesses;
  bool all_zero = true;
  bool any_finite = false;
  for (const auto& h : model_.variety) {
    const MultiPoly hp = h.to_padic(ctx);
    std::vector<PadicInt> vals;
    for (const auto& s : samples) vals.push_back(hp.evaluate(s));
    const MahlerPoly gm = values_to_mahler(vals);
    std::vector<PadicInt> b;
    for (std::size_t k = 0; k <= T; ++k) b.push_back(gm.coefficient(k));
    witnesses.emplace_back(ctx, std::move(b), TailRule{0, false});

    GeneratorReport gr;
    try {
      gr.verdict = classify(to_power_series(witnesses.back(), floor), floor);
    } catch (const PrecisionExhausted& e) {
      gr.verdict.reason = e.what();
    }
    all_zero = all_zero && gr.verdict.kind == ZeroKind::IdenticallyZeroAtPrecision;
    any_finite = any_finite || gr.verdict.kind == ZeroKind::FiniteZeros;
    report.generators.push_back(std::move(gr));
  }

  if (all_zero) {
    // Every equation vanishes along the subsequence to working precision;
    // check the first members exactly before claiming the progression.
    Status status = config_.verify_count > 0 ? Status::Certified : Status::PrecisionQualified;
    for (int k = 0; k < config_.verify_count; ++k) {
      const std::uint64_t n = key.start + key.modulus * static_cast<std::uint64_t>(k);
      const auto inside = exact_.in_variety(n, model_.variety);
      if (!inside) {
        status = Status::PrecisionQualified;
        break;
      }
      if (!*inside) {
        report.note = "equations vanish mod p^" + std::to_string(floor) + " along the subsequence but n = " +
                      std::to_string(n) + " is not in V";
        return report;
      }
    }
    report.outcome = BranchOutcome::Progression;
    report.status = status;
    report.complete = true;
    return report;
  }

  if (!any_finite) {
    report.note = "no equation has a finite zero count at this precision";
    return report;
  }

  const std::uint64_t B = config_.scan_bound;
  std::vector<std::vector<std::uint64_t>> hits(model_.variety.size());
  std::optional<std::vector<std::uint64_t>> candidates;
  for (std::size_t i = 0; i < model_.variety.size(); ++i) {
    auto& gr = report.generators[i];
    if (gr.verdict.kind != ZeroKind::FiniteZeros) continue;
    if (gr.verdict.bound > 0) hits[i] = locate_natural_zeros(witnesses[i], B);
    for (auto k : hits[i]) {
      const auto zero = exact_.vanishes(key.start + key.modulus * k, model_.variety[i]);
      if (zero && *zero) gr.natural_zeros.push_back(k);
    }
    if (gr.natural_zeros.size() > static_cast<std::size_t>(gr.verdict.bound)) {
      throw std::logic_error("zero count exceeds the Strassmann bound on branch " + std::to_string(key.start) +
                             " mod " + std::to_string(key.modulus));
    }
    if (gr.natural_zeros.size() == static_cast<std::size_t>(gr.verdict.bound)) report.complete = true;
    if (!candidates) {
      candidates = hits[i];
    } else {
      std::vector<std::uint64_t> both;
      std::set_intersection(candidates->begin(), candidates->end(), hits[i].begin(), hits[i].end(),
                            std::back_inserter(both));
      candidates = std::move(both);
    }
  }
  for (auto k : *candidates) {
    const std::uint64_t n = key.start + key.modulus * k;
    const auto inside = exact_.in_variety(n, model_.variety);
    if (inside && !*inside) continue;
    report.zeros.push_back(ExceptionalPoint{static_cast<std::int64_t>(n), inside.has_value()});
  }
  report.outcome = BranchOutcome::Finite;
  report.status = report.complete ? Status::Certified : Status::Uncertified;
  if (!report.complete) {
    report.note = "zeros found by scanning k <= " + std::to_string(B) +
                  " do not account for every zero allowed by the Strassmann bound";
  }
  return report;
}

AnalysisResult Engine::run() {
  AnalysisResult res;
  res.prime = prime_;
  res.precision = config_.precision;
  res.preperiod = orbit_.preperiod;
  res.period = orbit_.period;

  bool preperiod_exact = true;
  for (std::uint64_t n = 0; n < orbit_.preperiod; ++n) {
    const auto inside = exact_.in_variety(n, model_.variety);
    if (inside) {
      if (*inside) res.set.exceptional.push_back({static_cast<std::int64_t>(n), true});
      continue;
    }
    preperiod_exact = false;
    // Fall back to the p-adic orbit.
    const auto& x = padic_orbit_point(n, config_.precision);
    bool zero = true;
    for (const auto& h : model_.variety) zero = zero && h.to_padic(x.context()).evaluate(x).is_zero();
    if (zero) res.set.exceptional.push_back({static_cast<std::int64_t>(n), false});
  }

  bool conclusive = true;
  bool complete = preperiod_exact;
  for (const auto& key : branches()) {
    int K = config_.precision;
    BranchReport br;
    for (int attempt = 0; attempt <= config_.retry_max; ++attempt, K *= 2) {
      br = analyze_branch(key, K);
      if (br.outcome != BranchOutcome::Inconclusive) break;
    }
    switch (br.outcome) {
      case BranchOutcome::Progression:
        res.set.progressions.push_back(Progression{static_cast<std::int64_t>(key.modulus),
                                                   static_cast<std::int64_t>(key.start % key.modulus),
                                                   static_cast<std::int64_t>(key.start), false, br.status});
        break;
      case BranchOutcome::Finite:
        for (const auto& z : br.zeros) res.set.exceptional.push_back(z);
        complete = complete && br.complete;
        break;
      case BranchOutcome::Inconclusive:
        conclusive = false;
        break;
    }
    res.branches.push_back(std::move(br));
  }
  res.set.canonicalize();
  res.conclusive = conclusive;
  res.complete = conclusive && complete;
  res.notes.push_back("certified progressions: every equation vanishes to working precision along the subsequence and the first " +
                      std::to_string(config_.verify_count) + " members were checked in exact arithmetic");
  if (!res.complete) {
    res.notes.push_back("exceptional points were found by scanning subsequence indices k <= " +
                        std::to_string(config_.scan_bound) + " on branches listed as incomplete");
  }
  return res;
}

AnalysisResult analyze(const AffineModel& model, const RunConfig& config) { return Engine(model, config).run(); }

AnalysisResult analyze_full_orbit(const AffineModel& model, const RunConfig& config) {
  model.validate();
  if (!model.inverse) throw InvalidModel("full-orbit analysis needs the inverse map");
  const AffineModel backward_model = model.inverted();
  RunConfig cfg = config;
  if (cfg.prime) {
    for (const auto* m : {&model, &backward_model}) {
      const std::string why = prime_rejection(*m, *cfg.prime, cfg.residue_orbit_cap);
      if (!why.empty()) throw NoPrimeFound("prime " + std::to_string(*cfg.prime) + " is not admissible: " + why);
    }
  } else {
    cfg.prime = select_prime(std::vector<AffineModel>{model, backward_model}, cfg.prime_limit, cfg.residue_orbit_cap);
  }
  const AnalysisResult fwd = analyze(model, cfg);
  const AnalysisResult bwd = analyze(backward_model, cfg);

  AnalysisResult out;
  out.prime = *cfg.prime;
  out.precision = cfg.precision;
  out.mode = "two_sided";
  out.preperiod = fwd.preperiod;
  out.period = fwd.period;
  out.branches = fwd.branches;
  for (auto br : bwd.branches) {
    br.direction = "backward";
    out.branches.push_back(std::move(br));
  }

  // Residue classes (mod the common lcm) claimed in each direction.
  std::int64_t L = 1;
  for (const auto* r : {&fwd, &bwd})
    for (const auto& pr : r->set.progressions) L = std::lcm(L, pr.modulus);
  if (L > 100000) throw Error("two-sided merge: progression moduli are too large to reconcile");
  std::vector<int> forward_rank(static_cast<std::size_t>(L), -1), backward_rank(static_cast<std::size_t>(L), -1);
  for (const auto& pr : fwd.set.progressions) {
    if (pr.start >= pr.modulus) throw Error("two-sided merge: forward progression does not cover its residue class");
    for (std::int64_t r = pr.residue; r < L; r += pr.modulus)
      forward_rank[static_cast<std::size_t>(r)] = std::max(forward_rank[static_cast<std::size_t>(r)], status_rank(pr.status));
  }
  for (const auto& pr : bwd.set.progressions) {
    if (pr.start >= pr.modulus) throw Error("two-sided merge: backward progression does not cover its residue class");
    for (std::int64_t r = pr.residue; r < L; r += pr.modulus) {
      const auto idx = static_cast<std::size_t>(floor_mod(-r, L));
      backward_rank[idx] = std::max(backward_rank[idx], status_rank(pr.status));
    }
  }
  for (std::int64_t r = 0; r < L; ++r) {
    const int f = forward_rank[static_cast<std::size_t>(r)];
    const int b = backward_rank[static_cast<std::size_t>(r)];
    if ((f < 0) != (b < 0)) {
      throw Error("two-sided merge: residue " + std::to_string(r) + " mod " + std::to_string(L) +
                  " is a progression in only one direction");
    }
    if (f >= 0) out.set.progressions.push_back(Progression{L, r, 0, true, status_of_rank(std::min(f, b))});
  }
  for (const auto& e : fwd.set.exceptional) out.set.exceptional.push_back(e);
  for (const auto& e : bwd.set.exceptional) out.set.exceptional.push_back({-e.n, e.verified});
  out.set.canonicalize();
  out.conclusive = fwd.conclusive && bwd.conclusive;
  out.complete = fwd.complete && bwd.complete;
  out.notes = fwd.notes;
  out.notes.push_back("negative indices n stand for the inverse map applied -n times");
  return out;
}

AffineModel recurrence_to_model(const std::vector<mpq_class>& coefficients, const std::vector<mpq_class>& initial) {
  const std::size_t g = coefficients.size();
  if (g == 0) throw InvalidModel("recurrence needs at least one coefficient");
  if (initial.size() != g) {
    throw InvalidModel("recurrence of order " + std::to_string(g) + " needs " + std::to_string(g) + " initial values, got " +
                       std::to_string(initial.size()));
  }
  if (coefficients.back() == 0) throw ZeroLeadingCoefficient("the coefficient c_" + std::to_string(g) + " of a_n must be nonzero");

  AffineModel m;
  m.dimension = g;
  // (x_1, ..., x_g) -> (x_2, ..., x_g, c_g x_1 + ... + c_1 x_g)
  for (std::size_t i = 0; i + 1 < g; ++i) m.map.push_back(RationalPoly::variable(g, i + 1));
  RationalPoly last(g);
  for (std::size_t i = 0; i < g; ++i) {
    Monomial e(g, 0);
    e[i] = 1;
    last.add_term(e, coefficients[g - 1 - i]);
  }
  m.map.push_back(last);

  // x_1 = (y_g - c_{g-1} y_1 - ... - c_1 y_{g-1}) / c_g, x_{i+1} = y_i.
  RationalMap inv;
  RationalPoly first(g);
  {
    Monomial e(g, 0);
    e[g - 1] = 1;
    first.add_term(e, mpq_class(1) / coefficients[g - 1]);
  }
  for (std::size_t i = 1; i < g; ++i) {
    Monomial e(g, 0);
    e[i - 1] = 1;
    first.add_term(e, -coefficients[g - 1 - i] / coefficients[g - 1]);
  }
  inv.push_back(first);
  for (std::size_t i = 1; i < g; ++i) inv.push_back(RationalPoly::variable(g, i - 1));
  m.inverse = inv;

  m.point = initial;
  m.variety.push_back(RationalPoly::variable(g, 0));
  return m;
}

}  // namespace padyn
