#include <doctest.h>

#include <cmath>

#include "abt/errors.hpp"
#include "abt/json_io.hpp"

using abt::ParseError;

TEST_CASE("problem parsing from the documented format") {
  auto doc = abt::parse_document(R"({
    "sources": [{"p": [-1, 0], "m": 1}, {"p": [1, 0], "m": 1}],
    "targets": [{"p": [0, 2], "m": 2}],
    "H": {"kind": "power", "alpha": 0.5},
    "sigma": {"kind": "polygonal", "vertices": [[1,0],[0,1],[-1,0],[0,-1]]}
  })");
  auto problem = abt::parse_problem(doc);
  CHECK(problem.sources.size() == 2);
  CHECK(problem.targets.size() == 1);
  CHECK(problem.h.kind() == abt::BranchingFunction::Kind::Power);
  CHECK(problem.sigma.kind() == abt::Anisotropy::Kind::Polygonal);
  CHECK(problem.sigma.norm(abt::Vec2{1, 1}) == doctest::Approx(2.0));
}

TEST_CASE("parse errors carry line and column") {
  try {
    abt::parse_document("{\n  \"sources\": [,]\n}");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.column > 0);
  }
}

TEST_CASE("sweep variables substitute into numeric fields") {
  auto doc = abt::parse_document(R"({
    "sources": [{"p": [-1, 0], "m": 1}, {"p": [1, 0], "m": 1}],
    "targets": [{"p": [0, "$h"], "m": 2}]
  })");
  auto problem = abt::parse_problem(doc, {{"h", 1.75}});
  CHECK(problem.targets[0].point[1] == 1.75);
  CHECK_THROWS_AS((void)abt::parse_problem(doc), abt::SemanticError);  // unbound variable
}

TEST_CASE("currents round-trip through json") {
  auto current = abt::PolyhedralOneCurrent::planar({{{0, 0}, {1, 1}, 1.5}, {{1, 1}, {2, 0}, -0.25}});
  auto text = abt::to_json(current);
  auto back = abt::parse_current(abt::parse_document(text));
  REQUIRE(back.edges.size() == 2);
  CHECK(back.edges[0].theta == 1.5);
  CHECK(back.edges[1].theta == -0.25);
  CHECK(back.edges[1].a == abt::VecN{1, 1});
}

TEST_CASE("seventeen significant digits round-trip doubles") {
  abt::Rng rng(71);
  for (int i = 0; i < 200; ++i) {
    double x = std::ldexp(rng.uniform(-1, 1), rng.uniform_int(-20, 20));
    double y = std::strtod(abt::format_double(x).c_str(), nullptr);
    CHECK(y == x);
  }
}

TEST_CASE("lp gauge parsing") {
  auto inf = abt::parse_gauge(abt::parse_document(R"({"kind":"lp","p":"inf","dim":3})"));
  CHECK(inf.norm(abt::VecN{1, -3, 2}) == doctest::Approx(3.0));
  auto two = abt::parse_gauge(abt::parse_document(R"({"kind":"lp","p":2,"dim":3})"));
  CHECK(two.norm(abt::VecN{1, 2, 2}) == doctest::Approx(3.0));
}
