#pragma once

// JSON model and report files. Rationals are written as strings "a/b" so
// nothing ever passes through floating point.
//
// Model:
//   { "dimension": 2,
//     "map":     [ [ {"exponents": [1, 0], "coefficient": "1"}, ... ], ... ],
//     "inverse": [ ... ],            (optional, same shape as map)
//     "point":   ["0", "1/2"],
//     "variety": [ [ ... ], ... ] }  (polynomials, same shape)

#include <filesystem>
#include <string>
#include <vector>

#include "padyn/engine.hpp"

namespace padyn {

// "3", "-7/4"; throws ParseError on malformed text or a zero denominator.
mpq_class parse_rational(const std::string& text);
// Comma-separated rationals.
std::vector<mpq_class> parse_rational_list(const std::string& text);

// ParseError messages name the JSON path and, when it can be found, the line.
AffineModel parse_model(const std::string& text);
AffineModel load_model(const std::filesystem::path& path);
std::string model_to_json(const AffineModel& model);

// A polynomial map file for the interpolate command: "dimension", "map",
// optional "prime".
struct MapFile {
  std::size_t dimension = 0;
  RationalMap map;
  std::uint64_t prime = 0;  // 0 when absent
};
MapFile parse_map_file(const std::string& text);

struct Report {
  AnalysisResult result;
  double seconds = 0;

  bool operator==(const Report&) const = default;
};

std::string emit_report(const Report& report);
Report parse_report(const std::string& text);

std::string read_file(const std::filesystem::path& path);

}  // namespace padyn
