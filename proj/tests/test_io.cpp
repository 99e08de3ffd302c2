#include <doctest.h>

#include "models.hpp"
#include "padyn/io.hpp"

using namespace padyn;
using namespace testing_helpers;

TEST_CASE("parse_rational") {
  CHECK(parse_rational("3") == 3);
  CHECK(parse_rational("-7/4") == mpq_class(-7, 4));
  CHECK(parse_rational("6/4") == mpq_class(3, 2));
  CHECK(parse_rational(" 2 / 3 ") == mpq_class(2, 3));
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("1.5"), ParseError);
  CHECK_THROWS_AS(parse_rational(""), ParseError);
  CHECK_THROWS_AS(parse_rational("1/-2"), ParseError);
  CHECK(parse_rational_list("1,-1,1/2") == std::vector<mpq_class>{1, -1, mpq_class(1, 2)});
}

TEST_CASE("model round trip") {
  for (const auto& m : {swap_model(), fibonacci_model(), sum_of_squares_model(), doubling_model()}) {
    const AffineModel back = parse_model(model_to_json(m));
    CHECK(back.dimension == m.dimension);
    CHECK(back.map == m.map);
    CHECK(back.inverse == m.inverse);
    CHECK(back.point == m.point);
    CHECK(back.variety == m.variety);
  }
}

TEST_CASE("model parse errors name the place") {
  const std::string zero_den = R"({
  "dimension": 1,
  "map": [ [ {"exponents": [1], "coefficient": "1/0"} ] ],
  "point": ["0"],
  "variety": []
})";
  try {
    parse_model(zero_den);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    const std::string what = e.what();
    CHECK(what.find("line 3") != std::string::npos);
    CHECK(what.find("zero denominator") != std::string::npos);
  }

  try {
    parse_model("{\n  \"dimension\": 1,\n  \"map\": [ \n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_model(R"({"dimension": 2, "map": [[]], "point": ["0", "0"]})"), ParseError);
  CHECK_THROWS_AS(parse_model(R"({"dimension": 1, "map": [[{"exponents": [1, 0], "coefficient": "1"}]], "point": ["0"]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_model(R"({"dimension": 1, "map": [[{"exponents": [1], "coefficient": 0.5}]], "point": ["0"]})"),
                  ParseError);
  // An inverse that is not one.
  CHECK_THROWS_AS(parse_model(R"({"dimension": 1,
    "map": [[{"exponents": [1], "coefficient": "2"}]],
    "inverse": [[{"exponents": [1], "coefficient": "2"}]],
    "point": ["1"]})"),
                  ParseError);
}

TEST_CASE("map files") {
  const MapFile mf = parse_map_file(R"({"dimension": 1, "prime": 5, "map": [[{"exponents": [1], "coefficient": 6}]]})");
  CHECK(mf.prime == 5);
  CHECK(mf.map.size() == 1);
  CHECK_THROWS_AS(parse_map_file(R"({"dimension": 1, "prime": 4, "map": [[]]})"), ParseError);
}

TEST_CASE("reports round trip and are deterministic") {
  RunConfig cfg;
  cfg.precision = 10;
  cfg.scan_bound = 100;
  for (const auto& m : {swap_model(), sum_of_squares_model()}) {
    Report r{analyze(m, cfg), 1.25};
    const std::string text = emit_report(r);
    CHECK(parse_report(text) == r);
    Report again{analyze(m, cfg), 7.5};
    again.seconds = r.seconds;
    CHECK(emit_report(again) == text);
  }
  const Report two_sided{analyze_full_orbit(swap_model(), cfg), 0};
  CHECK(parse_report(emit_report(two_sided)) == two_sided);
  CHECK_THROWS_AS(parse_report("{}"), ParseError);
  CHECK_THROWS_AS(parse_report("not json"), ParseError);
}
