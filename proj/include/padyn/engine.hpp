#pragma once

// Return-time sets {n : Phi^n(alpha) in V} for polynomial self-maps of
// affine space over Q.
//
// Outline: pick a prime p at which the model has good reduction along the
// orbit of alpha; follow alpha mod p until it cycles (preperiod l0, period N);
// on each periodic residue class conjugate Phi^N to a map F of Z_p^g with
// F^M == id mod p; interpolate the orbit on each of the N * M subsequences
// n = l0 + j + N * (l + M k) by Mahler series in k; decide each variety
// equation along the subsequence by zero counting.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "padyn/interpolator.hpp"
#include "padyn/rational_poly.hpp"
#include "padyn/zero_counting.hpp"

namespace padyn {

struct AffineModel {
  std::size_t dimension = 0;
  RationalMap map;
  std::optional<RationalMap> inverse;
  RationalPoint point;
  // Generators of the ideal of V. An empty list means V is all of affine space.
  std::vector<RationalPoly> variety;

  // Shapes agree and, when present, the inverse composes to the identity on
  // both sides. Throws InvalidModel.
  void validate() const;
  // Same point and variety, map and inverse swapped.
  AffineModel inverted() const;
};

struct RunConfig {
  std::optional<std::uint64_t> prime;
  int precision = 40;
  int stages = -1;  // -1: twice the working precision
  std::uint64_t scan_bound = 2000;
  int verify_count = 25;
  int retry_max = 4;
  std::uint64_t prime_limit = 10000;
  // Exact orbit points larger than this many bits are not computed.
  std::size_t exact_bit_cap = std::size_t{1} << 22;
  // Residue orbits longer than this make a prime unusable.
  std::size_t residue_orbit_cap = 1000000;

  void validate() const;
};

// Residues of Phi^n(alpha) mod p for n < preperiod + period; the cycle is
// points[preperiod ...].
struct ResidueOrbit {
  std::size_t preperiod = 0;
  std::size_t period = 0;
  std::vector<std::vector<std::uint64_t>> points;

  const std::vector<std::uint64_t>& cycle_point(std::size_t phase) const { return points[preperiod + phase]; }
};

// nullopt when the orbit does not close up within `cap` steps.
std::optional<ResidueOrbit> residue_orbit(const AffineModel& model, std::uint64_t p, std::size_t cap = 1000000);

// Empty string when p is usable: all denominators prime to p and the
// Jacobian determinant nonzero mod p along the residue orbit. Otherwise
// the reason p was rejected.
std::string prime_rejection(const AffineModel& model, std::uint64_t p, std::size_t orbit_cap = 1000000);

// Smallest prime 5 <= p < limit usable for every listed model.
std::uint64_t select_prime(const std::vector<AffineModel>& models, std::uint64_t limit = 10000,
                           std::size_t orbit_cap = 1000000);
std::uint64_t select_prime(const AffineModel& model, std::uint64_t limit = 10000);

// The residue class of a point x mod p, identified with Z_p^g through
// beta -> (beta - x_hat) / p, where x_hat has coordinates in [0, p).
class ResidueChart {
 public:
  ResidueChart(std::uint64_t p, std::vector<std::uint64_t> residue);

  std::uint64_t prime() const { return p_; }
  const std::vector<std::uint64_t>& residue() const { return residue_; }
  PadicVec x_hat(const ContextPtr& ctx) const;
  // beta at precision K + 1 -> chart coordinates at precision K.
  PadicVec to_chart(const PadicVec& beta) const;
  // Chart coordinates at precision K -> point at precision K + 1.
  PadicVec from_chart(const PadicVec& v) const;

 private:
  std::uint64_t p_;
  std::vector<std::uint64_t> residue_;
};

// F(T) = (Phi^period(x_hat + p T) - x_hat) / p at precision K. Throws
// NotUnramifiedAtResidue when the linear part of F is singular mod p.
PolyMap build_local_map(const AffineModel& model, const ResidueChart& chart, std::size_t period, int precision);

// Least M with F^M == id mod p.
std::uint64_t find_identity_power(const PolyMap& F);

enum class Status { Certified, PrecisionQualified, Uncertified };
std::string to_string(Status s);
Status status_from_string(const std::string& s);

// {n >= start : n == residue mod modulus}, or all n in Z with that residue
// when two_sided is set.
struct Progression {
  std::int64_t modulus = 1;
  std::int64_t residue = 0;
  std::int64_t start = 0;
  bool two_sided = false;
  Status status = Status::Certified;

  bool contains(std::int64_t n) const;
  bool operator==(const Progression&) const = default;
};

struct ExceptionalPoint {
  std::int64_t n = 0;
  bool verified = false;

  bool operator==(const ExceptionalPoint&) const = default;
};

struct ProgressionSet {
  std::vector<Progression> progressions;
  std::vector<ExceptionalPoint> exceptional;

  bool contains(std::int64_t n) const;
  // Extends progressions down through exceptional points that continue them,
  // merges full residue classes into the coarsest moduli, drops exceptional
  // points covered by a progression, and sorts.
  void canonicalize();

  bool operator==(const ProgressionSet&) const = default;
};

enum class BranchOutcome { Progression, Finite, Inconclusive };
std::string to_string(BranchOutcome o);
BranchOutcome branch_outcome_from_string(const std::string& s);

struct GeneratorReport {
  ZeroVerdict verdict;
  // Subsequence indices k <= scan bound at which this generator vanishes,
  // checked in exact arithmetic.
  std::vector<std::uint64_t> natural_zeros;

  bool operator==(const GeneratorReport&) const = default;
};

// One subsequence n = start + modulus * k.
struct BranchKey {
  std::uint64_t phase = 0;
  std::uint64_t lift = 0;
  std::uint64_t start = 0;
  std::uint64_t modulus = 1;

  bool operator==(const BranchKey&) const = default;
};

struct BranchReport {
  std::string direction = "forward";
  BranchKey key;
  int precision = 0;
  BranchOutcome outcome = BranchOutcome::Inconclusive;
  std::vector<GeneratorReport> generators;
  std::vector<ExceptionalPoint> zeros;
  // Progression branches: how far the progression claim is certified.
  Status status = Status::Uncertified;
  // Finite branches: the zero list is provably complete.
  bool complete = false;
  std::string note;

  bool operator==(const BranchReport&) const = default;
};

struct AnalysisResult {
  std::uint64_t prime = 0;
  int precision = 0;
  std::string mode = "forward";
  std::uint64_t preperiod = 0;
  std::uint64_t period = 0;
  std::vector<BranchReport> branches;
  ProgressionSet set;
  // Every branch reached a verdict.
  bool conclusive = false;
  // Conclusive, and every finite branch has a certified complete zero list.
  bool complete = false;
  std::vector<std::string> notes;

  bool operator==(const AnalysisResult&) const = default;
};

// Exact forward orbit of a point, computed on demand and cached.
class ExactOrbit {
 public:
  ExactOrbit(RationalMap map, RationalPoint start, std::size_t bit_cap);

  // nullptr once the points grow past the bit cap.
  const RationalPoint* at(std::uint64_t n);
  // nullopt when the point is unavailable.
  std::optional<bool> in_variety(std::uint64_t n, const std::vector<RationalPoly>& variety);
  std::optional<bool> vanishes(std::uint64_t n, const RationalPoly& h);

 private:
  RationalMap map_;
  std::vector<RationalPoint> points_;
  std::size_t bit_cap_;
  bool capped_ = false;
};

class Engine {
 public:
  Engine(AffineModel model, RunConfig config);

  std::uint64_t prime() const { return prime_; }
  const ResidueOrbit& orbit() const { return orbit_; }
  const AffineModel& model() const { return model_; }

  std::vector<BranchKey> branches();
  // Identity power of the local map at a phase.
  std::uint64_t identity_power(std::uint64_t phase);
  ResidueChart chart(std::uint64_t phase) const;
  const PolyMap& local_map(std::uint64_t phase, int precision);
  // Phi^n(alpha) at precision K + 1.
  const PadicVec& padic_orbit_point(std::uint64_t n, int precision);
  // Chart coordinates of the subsequence as Mahler series in k.
  std::vector<MahlerSeries> branch_series(const BranchKey& key, int precision);
  BranchReport analyze_branch(const BranchKey& key, int precision);

  AnalysisResult run();

 private:
  struct PrecisionData {
    ContextPtr ctx;     // precision K
    ContextPtr ctx_hi;  // precision K + 1
    std::unique_ptr<PolyMap> phi;
    std::vector<PadicVec> orbit;
    std::map<std::uint64_t, PolyMap> local_maps;
  };
  PrecisionData& data(int precision);
  int stages_for(int precision) const;
  int floor_for(int precision) const;

  AffineModel model_;
  RunConfig config_;
  std::uint64_t prime_ = 0;
  ResidueOrbit orbit_;
  std::map<std::uint64_t, std::uint64_t> identity_powers_;
  std::map<int, PrecisionData> per_precision_;
  ExactOrbit exact_;
};

AnalysisResult analyze(const AffineModel& model, const RunConfig& config);
// Two-sided indices n in Z; needs the inverse map.
AnalysisResult analyze_full_orbit(const AffineModel& model, const RunConfig& config);

// a_{n+g} = c_1 a_{n+g-1} + ... + c_g a_n with a_0 .. a_{g-1} given, as the
// companion map (x_1, ..., x_g) -> (x_2, ..., x_g, c_g x_1 + ... + c_1 x_g)
// with V: x_1 = 0. Throws ZeroLeadingCoefficient when c_g = 0.
AffineModel recurrence_to_model(const std::vector<mpq_class>& coefficients, const std::vector<mpq_class>& initial);

}  // namespace padyn
