// padyn: return-time sets of polynomial orbits, from the command line.
//
//   padyn analyze model.json
//   padyn recurrence --rec 1,1 --init 0,1
//   padyn interpolate map.json --omega 1 --prime 5
//   padyn orbit model.json
//
// Exit status: 0 when every branch reached a verdict, 1 when some branch
// stayed inconclusive or the engine gave up, 2 for unreadable input or bad
// flags.

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "padyn/engine.hpp"
#include "padyn/io.hpp"

namespace {

using namespace padyn;

constexpr int kOk = 0;
constexpr int kInconclusive = 1;
constexpr int kBadInput = 2;

struct Flags {
  std::uint64_t prime = 0;
  int precision = 40;
  int stages = -1;
  std::uint64_t scan_bound = 2000;
  int verify_count = 25;
  int retry_max = 4;
  std::string out;
};

void add_run_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--prime", f.prime, "prime to work at (default: smallest admissible)");
  cmd->add_option("--precision", f.precision, "p-adic working precision K")->capture_default_str();
  cmd->add_option("--stages", f.stages, "interpolation stages (default 2K)");
  cmd->add_option("--scan-bound", f.scan_bound, "scan subsequence indices up to this bound")->capture_default_str();
  cmd->add_option("--verify-count", f.verify_count, "exact checks before certifying a progression")
      ->capture_default_str();
  cmd->add_option("--retry-max", f.retry_max, "precision doublings on inconclusive branches")->capture_default_str();
  cmd->add_option("--out", f.out, "write the report here instead of stdout");
}

RunConfig to_config(const Flags& f) {
  RunConfig c;
  if (f.prime != 0) c.prime = f.prime;
  c.precision = f.precision;
  c.stages = f.stages;
  c.scan_bound = f.scan_bound;
  c.verify_count = f.verify_count;
  c.retry_max = f.retry_max;
  c.validate();
  return c;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
}

void summarize(const AnalysisResult& r) {
  std::cerr << "p = " << r.prime << ", K = " << r.precision << ", " << r.branches.size() << " branches";
  if (!r.conclusive) std::cerr << ", INCONCLUSIVE";
  std::cerr << "\n";
  for (const auto& pr : r.set.progressions) {
    std::cerr << "  n == " << pr.residue << " mod " << pr.modulus << (pr.two_sided ? " (n in Z)" : "")
              << (pr.start > pr.residue ? ", n >= " + std::to_string(pr.start) : "") << "  [" << to_string(pr.status)
              << "]\n";
  }
  for (const auto& e : r.set.exceptional) {
    std::cerr << "  n = " << e.n << (e.verified ? "  [verified]" : "  [unverified]") << "\n";
  }
  if (r.set.progressions.empty() && r.set.exceptional.empty()) std::cerr << "  (empty)\n";
}

template <class Run>
int run_report(const Flags& flags, Run&& run) {
  const auto t0 = std::chrono::steady_clock::now();
  Report report;
  report.result = run(to_config(flags));
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_output(emit_report(report), flags.out);
  summarize(report.result);
  return report.result.conclusive ? kOk : kInconclusive;
}

int cmd_interpolate(const std::string& path, const std::string& omega_text, const Flags& flags) {
  const MapFile mf = parse_map_file(read_file(path));
  const std::uint64_t p = flags.prime != 0 ? flags.prime : mf.prime;
  if (p == 0) throw ParseError("interpolate needs --prime or a \"prime\" field in the map file");
  if (p < 5 || !is_prime(p)) throw ParseError("--prime must be a prime >= 5");
  if (flags.precision < 2) throw ParseError("--precision must be at least 2");
  const std::vector<mpq_class> omega_q = parse_rational_list(omega_text);
  if (omega_q.size() != mf.dimension) {
    throw ParseError("--omega has " + std::to_string(omega_q.size()) + " entries, the map has dimension " +
                     std::to_string(mf.dimension));
  }

  const auto ctx = PadicContext::make(p, flags.precision);
  int cap = 1;
  for (const auto& f : mf.map) cap = std::max(cap, f.degree());
  std::vector<MultiPoly> comps;
  for (const auto& f : mf.map) {
    if (!f.p_integral(p)) throw ParseError("map coefficients must be p-integral");
    comps.push_back(f.to_padic(ctx, cap));
  }
  const PolyMap phi(comps);
  std::vector<PadicInt> om;
  for (const auto& q : omega_q) {
    if (!p_integral(q, p)) throw ParseError("omega must be p-integral");
    om.push_back(PadicInt::from_rational(ctx, q));
  }
  const PadicVec omega(om);

  const auto series = interpolate(phi, omega, InterpolationOptions{flags.stages});

  // f(z + 1) = phi(f(z)) on z = 0 .. 20.
  std::vector<PadicVec> values;
  for (int z = 0; z <= 21; ++z) {
    std::vector<PadicInt> v;
    for (const auto& s : series) v.push_back(evaluate_series(s, mpz_class(z)));
    values.emplace_back(std::move(v));
  }
  bool equation_holds = values[0] == omega;
  for (int z = 0; z <= 20; ++z) equation_holds = equation_holds && phi.evaluate(values[z]) == values[z + 1];

  nlohmann::json doc;
  doc["prime"] = p;
  doc["precision"] = flags.precision;
  doc["stages"] = flags.stages < 0 ? 2 * flags.precision : flags.stages;
  doc["functional_equation_z0_to_20"] = equation_holds;
  nlohmann::json coords = nlohmann::json::array();
  for (const auto& s : series) {
    nlohmann::json coeffs = nlohmann::json::array();
    const auto& b = s.coefficients();
    std::size_t last = 0;
    for (std::size_t k = 0; k < b.size(); ++k)
      if (!b[k].is_zero()) last = k;
    for (std::size_t k = 0; k <= last; ++k) {
      const Valuation v = b[k].valuation();
      coeffs.push_back({{"k", k},
                        {"value", b[k].residue().get_str()},
                        {"valuation", v.at_precision_floor ? nlohmann::json(">=" + std::to_string(v.value)) : nlohmann::json(v.value)}});
    }
    coords.push_back(coeffs);
  }
  doc["coefficients"] = coords;
  write_output(doc.dump(2) + "\n", flags.out);

  for (std::size_t i = 0; i < series.size(); ++i) {
    std::cerr << "f_" << i + 1 << " valuations:";
    for (const auto& c : coords[i]) std::cerr << " " << c["valuation"].dump();
    std::cerr << "\n";
  }
  if (!equation_holds) {
    std::cerr << "functional equation FAILED on z = 0..20\n";
    return kInconclusive;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-adic return-time sets for polynomial orbits"};
  app.require_subcommand(1);

  Flags flags;
  std::string model_path, map_path, rec_text, init_text, omega_text;

  auto* analyze_cmd = app.add_subcommand("analyze", "return times of a forward orbit");
  analyze_cmd->add_option("model", model_path, "model JSON")->required();
  add_run_flags(analyze_cmd, flags);

  auto* rec_cmd = app.add_subcommand("recurrence", "zero set of a linear recurrence");
  rec_cmd->add_option("--rec", rec_text, "c1,..,cg for a_{n+g} = c1 a_{n+g-1} + .. + cg a_n")->required();
  rec_cmd->add_option("--init", init_text, "a0,..,a_{g-1}")->required();
  add_run_flags(rec_cmd, flags);

  auto* interp_cmd = app.add_subcommand("interpolate", "Mahler coefficients of an interpolated orbit");
  interp_cmd->add_option("map", map_path, "map JSON")->required();
  interp_cmd->add_option("--omega", omega_text, "start point, comma separated")->required();
  add_run_flags(interp_cmd, flags);

  auto* orbit_cmd = app.add_subcommand("orbit", "two-sided return times (needs the inverse map)");
  orbit_cmd->add_option("model", model_path, "model JSON")->required();
  add_run_flags(orbit_cmd, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kBadInput;
  }

  try {
    if (*analyze_cmd) {
      const AffineModel model = load_model(model_path);
      return run_report(flags, [&](const RunConfig& c) { return analyze(model, c); });
    }
    if (*orbit_cmd) {
      const AffineModel model = load_model(model_path);
      if (!model.inverse) throw ParseError(model_path + ": orbit mode needs an \"inverse\" field");
      return run_report(flags, [&](const RunConfig& c) { return analyze_full_orbit(model, c); });
    }
    if (*rec_cmd) {
      const auto coeffs = parse_rational_list(rec_text);
      const auto init = parse_rational_list(init_text);
      if (coeffs.size() != init.size()) throw ParseError("--rec and --init need the same number of entries");
      const AffineModel model = recurrence_to_model(coeffs, init);
      return run_report(flags, [&](const RunConfig& c) { return analyze(model, c); });
    }
    return cmd_interpolate(map_path, omega_text, flags);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const ZeroLeadingCoefficient& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const InvalidModel& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInconclusive;
  }
}
