#include "padyn/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace padyn {

using nlohmann::json;

namespace {

// Line of the first occurrence of a quoted literal, 0 if absent.
std::size_t line_of_literal(const std::string& text, const std::string& literal) {
  const auto pos = text.find("\"" + literal + "\"");
  if (pos == std::string::npos) return 0;
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n'));
}

std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

class ModelReader {
 public:
  explicit ModelReader(const std::string& text) : text_(text) {
    try {
      doc_ = json::parse(text);
    } catch (const json::parse_error& e) {
      const auto [line, col] = line_and_column(text, e.byte == 0 ? 0 : e.byte - 1);
      throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": malformed JSON (" +
                       std::string(e.what()) + ")");
    }
    if (!doc_.is_object()) fail("/", "top level must be an object");
  }

  const json& doc() const { return doc_; }

  [[noreturn]] void fail(const std::string& path, const std::string& what, const std::string& literal = "") const {
    std::string where = path;
    if (!literal.empty()) {
      if (auto line = line_of_literal(text_, literal)) where = "line " + std::to_string(line) + " (" + path + ")";
    }
    throw ParseError(where + ": " + what);
  }

  const json& field(const json& obj, const std::string& key, const std::string& path) const {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, "missing field '" + key + "'");
    return *it;
  }

  std::size_t dimension(const json& obj, const std::string& path) const {
    const json& d = field(obj, "dimension", path);
    if (!d.is_number_integer() || d.get<long long>() < 1) fail(path + "/dimension", "must be a positive integer");
    return d.get<std::size_t>();
  }

  mpq_class rational(const json& v, const std::string& path) const {
    if (v.is_number_integer()) return mpq_class(v.dump());
    if (!v.is_string()) fail(path, "expected a rational string like \"3/4\"");
    const std::string s = v.get<std::string>();
    try {
      return parse_rational(s);
    } catch (const ParseError& e) {
      fail(path, e.what(), s);
    }
  }

  RationalPoly poly(const json& v, std::size_t g, const std::string& path) const {
    if (!v.is_array()) fail(path, "a polynomial is a list of {exponents, coefficient} terms");
    RationalPoly f(g);
    for (std::size_t t = 0; t < v.size(); ++t) {
      const std::string tp = path + "/" + std::to_string(t);
      const json& term = v[t];
      if (!term.is_object()) fail(tp, "term must be an object");
      const json& ex = field(term, "exponents", tp);
      if (!ex.is_array() || ex.size() != g) fail(tp + "/exponents", "needs " + std::to_string(g) + " exponents");
      Monomial m;
      for (std::size_t i = 0; i < g; ++i) {
        if (!ex[i].is_number_integer() || ex[i].get<long long>() < 0 || ex[i].get<long long>() > 100000) {
          fail(tp + "/exponents/" + std::to_string(i), "exponent must be a non-negative integer");
        }
        m.push_back(ex[i].get<std::uint32_t>());
      }
      f.add_term(m, rational(field(term, "coefficient", tp), tp + "/coefficient"));
    }
    return f;
  }

  RationalMap poly_list(const json& v, std::size_t g, const std::string& path, std::optional<std::size_t> count) const {
    if (!v.is_array()) fail(path, "expected a list of polynomials");
    if (count && v.size() != *count) fail(path, "expected " + std::to_string(*count) + " polynomials, got " + std::to_string(v.size()));
    RationalMap out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(poly(v[i], g, path + "/" + std::to_string(i)));
    return out;
  }

 private:
  const std::string& text_;
  json doc_;
};

json poly_json(const RationalPoly& f) {
  json terms = json::array();
  for (const auto& [m, c] : f.terms()) terms.push_back({{"exponents", m}, {"coefficient", c.get_str()}});
  return terms;
}

json map_json(const RationalMap& m) {
  json out = json::array();
  for (const auto& f : m) out.push_back(poly_json(f));
  return out;
}

json verdict_json(const ZeroVerdict& v) {
  return {{"kind", to_string(v.kind)}, {"bound", v.bound}, {"min_valuation", v.min_valuation},
          {"certified", v.certified}, {"reason", v.reason}};
}

ZeroKind zero_kind_from_string(const std::string& s) {
  if (s == "identically_zero_at_precision") return ZeroKind::IdenticallyZeroAtPrecision;
  if (s == "finite_zeros") return ZeroKind::FiniteZeros;
  if (s == "inconclusive") return ZeroKind::Inconclusive;
  throw ParseError("unknown zero verdict '" + s + "'");
}

json points_json(const std::vector<ExceptionalPoint>& pts) {
  json out = json::array();
  for (const auto& e : pts) out.push_back({{"n", e.n}, {"verified", e.verified}});
  return out;
}

std::vector<ExceptionalPoint> points_from(const json& j) {
  std::vector<ExceptionalPoint> out;
  for (const auto& e : j) out.push_back({e.at("n").get<std::int64_t>(), e.at("verified").get<bool>()});
  return out;
}

}  // namespace

mpq_class parse_rational(const std::string& text) {
  static const auto is_int = [](const std::string& s, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && !s.empty() && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  std::string s;
  for (char c : text)
    if (c != ' ') s += c;
  const auto slash = s.find('/');
  const std::string num = s.substr(0, slash);
  const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!is_int(num, true) || !is_int(den, false)) throw ParseError("malformed rational '" + text + "'");
  mpz_class n(num[0] == '+' ? num.substr(1) : num), d(den);
  if (d == 0) throw ParseError("zero denominator in '" + text + "'");
  mpq_class q(n, d);
  q.canonicalize();
  return q;
}

std::vector<mpq_class> parse_rational_list(const std::string& text) {
  std::vector<mpq_class> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  if (out.empty()) throw ParseError("empty list");
  return out;
}

AffineModel parse_model(const std::string& text) {
  ModelReader r(text);
  const json& doc = r.doc();
  AffineModel m;
  m.dimension = r.dimension(doc, "");
  const std::size_t g = m.dimension;
  m.map = r.poly_list(r.field(doc, "map", ""), g, "/map", g);
  if (auto it = doc.find("inverse"); it != doc.end() && !it->is_null()) m.inverse = r.poly_list(*it, g, "/inverse", g);
  const json& pt = r.field(doc, "point", "");
  if (!pt.is_array() || pt.size() != g) r.fail("/point", "needs " + std::to_string(g) + " coordinates");
  for (std::size_t i = 0; i < g; ++i) m.point.push_back(r.rational(pt[i], "/point/" + std::to_string(i)));
  if (auto it = doc.find("variety"); it != doc.end()) m.variety = r.poly_list(*it, g, "/variety", std::nullopt);
  try {
    m.validate();
  } catch (const InvalidModel& e) {
    throw ParseError(std::string("invalid model: ") + e.what());
  }
  return m;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

AffineModel load_model(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return parse_model(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string model_to_json(const AffineModel& model) {
  json doc;
  doc["dimension"] = model.dimension;
  doc["map"] = map_json(model.map);
  if (model.inverse) doc["inverse"] = map_json(*model.inverse);
  json pt = json::array();
  for (const auto& c : model.point) pt.push_back(c.get_str());
  doc["point"] = pt;
  doc["variety"] = map_json(model.variety);
  return doc.dump(2) + "\n";
}

MapFile parse_map_file(const std::string& text) {
  ModelReader r(text);
  const json& doc = r.doc();
  MapFile out;
  out.dimension = r.dimension(doc, "");
  out.map = r.poly_list(r.field(doc, "map", ""), out.dimension, "/map", out.dimension);
  if (auto it = doc.find("prime"); it != doc.end()) {
    if (!it->is_number_integer() || it->get<long long>() < 5 || !is_prime(it->get<std::uint64_t>())) {
      r.fail("/prime", "must be a prime >= 5");
    }
    out.prime = it->get<std::uint64_t>();
  }
  return out;
}

std::string emit_report(const Report& report) {
  const AnalysisResult& r = report.result;
  json doc;
  doc["prime"] = r.prime;
  doc["precision"] = r.precision;
  doc["mode"] = r.mode;
  doc["preperiod"] = r.preperiod;
  doc["period"] = r.period;
  doc["conclusive"] = r.conclusive;
  doc["complete"] = r.complete;
  doc["notes"] = r.notes;
  json progs = json::array();
  for (const auto& pr : r.set.progressions) {
    progs.push_back({{"modulus", pr.modulus}, {"residue", pr.residue}, {"start", pr.start},
                     {"two_sided", pr.two_sided}, {"status", to_string(pr.status)}});
  }
  doc["progressions"] = progs;
  doc["exceptional"] = points_json(r.set.exceptional);
  json branches = json::array();
  for (const auto& b : r.branches) {
    json gens = json::array();
    for (const auto& g : b.generators) {
      json gj = verdict_json(g.verdict);
      gj["natural_zeros"] = g.natural_zeros;
      gens.push_back(gj);
    }
    branches.push_back({{"direction", b.direction},
                        {"phase", b.key.phase},
                        {"lift", b.key.lift},
                        {"start", b.key.start},
                        {"modulus", b.key.modulus},
                        {"precision", b.precision},
                        {"outcome", to_string(b.outcome)},
                        {"status", to_string(b.status)},
                        {"complete", b.complete},
                        {"zeros", points_json(b.zeros)},
                        {"generators", gens},
                        {"note", b.note}});
  }
  doc["branches"] = branches;
  doc["timing"] = {{"seconds", report.seconds}};
  return doc.dump(2) + "\n";
}

Report parse_report(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  }
  try {
    Report out;
    AnalysisResult& r = out.result;
    r.prime = doc.at("prime").get<std::uint64_t>();
    r.precision = doc.at("precision").get<int>();
    r.mode = doc.at("mode").get<std::string>();
    r.preperiod = doc.at("preperiod").get<std::uint64_t>();
    r.period = doc.at("period").get<std::uint64_t>();
    r.conclusive = doc.at("conclusive").get<bool>();
    r.complete = doc.at("complete").get<bool>();
    r.notes = doc.at("notes").get<std::vector<std::string>>();
    for (const auto& pj : doc.at("progressions")) {
      r.set.progressions.push_back(Progression{pj.at("modulus").get<std::int64_t>(), pj.at("residue").get<std::int64_t>(),
                                               pj.at("start").get<std::int64_t>(), pj.at("two_sided").get<bool>(),
                                               status_from_string(pj.at("status").get<std::string>())});
    }
    r.set.exceptional = points_from(doc.at("exceptional"));
    for (const auto& bj : doc.at("branches")) {
      BranchReport b;
      b.direction = bj.at("direction").get<std::string>();
      b.key = BranchKey{bj.at("phase").get<std::uint64_t>(), bj.at("lift").get<std::uint64_t>(),
                        bj.at("start").get<std::uint64_t>(), bj.at("modulus").get<std::uint64_t>()};
      b.precision = bj.at("precision").get<int>();
      b.outcome = branch_outcome_from_string(bj.at("outcome").get<std::string>());
      b.status = status_from_string(bj.at("status").get<std::string>());
      b.complete = bj.at("complete").get<bool>();
      b.zeros = points_from(bj.at("zeros"));
      b.note = bj.at("note").get<std::string>();
      for (const auto& gj : bj.at("generators")) {
        GeneratorReport g;
        g.verdict.kind = zero_kind_from_string(gj.at("kind").get<std::string>());
        g.verdict.bound = gj.at("bound").get<int>();
        g.verdict.min_valuation = gj.at("min_valuation").get<int>();
        g.verdict.certified = gj.at("certified").get<bool>();
        g.verdict.reason = gj.at("reason").get<std::string>();
        g.natural_zeros = gj.at("natural_zeros").get<std::vector<std::uint64_t>>();
        b.generators.push_back(std::move(g));
      }
      r.branches.push_back(std::move(b));
    }
    out.seconds = doc.at("timing").at("seconds").get<double>();
    return out;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  }
}

}  // namespace padyn
