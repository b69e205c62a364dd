#include <doctest.h>

#include "prodridge/csv.hpp"
#include "prodridge/datagen.hpp"
#include "test_support.hpp"

using namespace prodridge;

TEST_CASE("number formatting round-trips exactly") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-1e3, 1e3);
  for (int i = 0; i < 2000; ++i) {
    const double v = U(rng) * std::pow(10.0, double(i % 40) - 20);
    const CsvTable t = parse_csv("a\n" + format_double(v) + "\n");
    CHECK(t.rows(0, 0) == v);
    CHECK(format_double(v).size() <= 24);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-2.0) == "-2");
}

TEST_CASE("points survive write and read byte for byte") {
  Scenario sc;
  sc.kind = ScenarioKind::SpiralCurve;
  sc.n = 200;
  sc.seed = 2;
  const GeneratedData g = generate(sc);
  CsvTable t;
  t.header = point_header(g.space);
  t.rows = g.data.transpose();
  const std::string text = format_csv(t);
  const PointFile pf = points_from_table(parse_csv(text), g.space, CoordinateSystem::Ambient, "mem");
  CHECK(pf.points == g.data);
  CHECK(pf.warnings.empty());
  CsvTable again;
  again.header = t.header;
  again.rows = pf.points.transpose();
  CHECK(format_csv(again) == text);
}

TEST_CASE("point headers") {
  CHECK(point_header(ProductSpace::parse("s2xr1")) == std::vector<std::string>{"x1", "x2", "x3", "r"});
  CHECK(point_header(ProductSpace::parse("s1xs1")) == std::vector<std::string>{"x1", "x2", "y1", "y2"});
  CHECK(point_header(ProductSpace::parse("r2xr1")) == std::vector<std::string>{"x1", "x2", "y1"});
}

TEST_CASE("RFC-4180 quoting and malformed input") {
  const CsvTable t = parse_csv("\"a\",\"b,c\"\n1, 2\n\n3,4\n");
  CHECK(t.header == std::vector<std::string>{"a", "b,c"});
  CHECK(t.rows.rows() == 2);
  CHECK(t.rows(1, 1) == 4.0);

  auto code_of = [](const std::string& text) {
    try {
      parse_csv(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  CHECK(code_of("a,b\n1\n") == ErrorCode::MalformedInput);
  CHECK(code_of("a,b\n1,x\n") == ErrorCode::MalformedInput);
  CHECK(code_of("") == ErrorCode::MalformedInput);
  CHECK(code_of("a\n1.5e\n") == ErrorCode::MalformedInput);
}

TEST_CASE("directional blocks: repaired with a warning or rejected") {
  const ProductSpace s = ProductSpace::parse("s1xr1");
  const PointFile ok = points_from_table(parse_csv("x1,x2,r\n1.00001,0,3\n"), s,
                                         CoordinateSystem::Ambient, "mem");
  CHECK(ok.warnings.size() == 1);
  CHECK(ok.points(0, 0) == 1.0);
  CHECK(ok.points(2, 0) == 3.0);

  const PointFile quiet = points_from_table(parse_csv("x1,x2,r\n1.0000000001,0,3\n"), s,
                                            CoordinateSystem::Ambient, "mem");
  CHECK(quiet.warnings.empty());
  CHECK(quiet.points(0, 0) == 1.0);

  try {
    points_from_table(parse_csv("x1,x2,r\n1.01,0,3\n"), s, CoordinateSystem::Ambient, "mem");
    FAIL("expected MalformedInput");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedInput);
  }
}

TEST_CASE("column checks") {
  const ProductSpace s = ProductSpace::parse("s1xr1");
  CHECK_THROWS_AS(points_from_table(parse_csv("x1,x2\n1,0\n"), s, CoordinateSystem::Ambient, "m"), Error);
  CHECK_THROWS_AS(points_from_table(parse_csv("x1,x2,r,zzz\n1,0,0,0\n"), s, CoordinateSystem::Ambient, "m"),
                  Error);
  const PointFile pf = points_from_table(parse_csv("x1,x2,r,density,label\n1,0,0,0.5,2\n"), s,
                                         CoordinateSystem::Ambient, "m");
  CHECK(pf.points.rows() == 3);
}

TEST_CASE("angular coordinates in degrees") {
  const ProductSpace s = ProductSpace::parse("s2xr1");
  const PointFile pf =
      points_from_table(parse_csv("lon,lat,r\n90,0,2\n0,90,1\n45,30,0.5\n"), s, CoordinateSystem::Angular, "m");
  CHECK(pf.points(0, 0) == doctest::Approx(0.0).epsilon(1e-15).scale(1.0));
  CHECK(pf.points(1, 0) == doctest::Approx(1.0));
  CHECK(pf.points(2, 1) == doctest::Approx(1.0));
  CHECK(pf.points(3, 0) == 2.0);
  const Vector x = pf.points.col(2).head(3);
  CHECK(x[2] == doctest::Approx(0.5));
  CHECK(x[0] == doctest::Approx(std::cos(std::numbers::pi / 6) * std::cos(std::numbers::pi / 4)));

  const PointFile circ = points_from_table(parse_csv("a,b\n180,7\n"), ProductSpace::parse("s1xr1"),
                                           CoordinateSystem::Angular, "m");
  CHECK(circ.points(0, 0) == doctest::Approx(-1.0));
  CHECK(circ.points(2, 0) == 7.0);
}
