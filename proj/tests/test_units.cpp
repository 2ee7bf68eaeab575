#include <ssmon/errors.hpp>
#include <ssmon/units.hpp>

#include "doctest.h"

using ssmon::Meters;

TEST_CASE("parse reads short decimals exactly") {
  CHECK(Meters::parse("0.26").micrometers() == 260000);
  CHECK(Meters::parse("0.05").micrometers() == 50000);
  CHECK(Meters::parse("3").micrometers() == 3000000);
  CHECK(Meters::parse("-1.5").micrometers() == -1500000);
  CHECK(Meters::parse("0.000001").micrometers() == 1);
  CHECK(Meters::parse("+0.41").micrometers() == 410000);
  CHECK(Meters::parse("0.150000").micrometers() == 150000);
}

TEST_CASE("parse rejects malformed and over-precise input") {
  CHECK_THROWS_AS(Meters::parse(""), ssmon::Error);
  CHECK_THROWS_AS(Meters::parse("."), ssmon::Error);
  CHECK_THROWS_AS(Meters::parse(".5"), ssmon::Error);
  CHECK_THROWS_AS(Meters::parse("1."), ssmon::Error);
  CHECK_THROWS_AS(Meters::parse("1.2.3"), ssmon::Error);
  CHECK_THROWS_AS(Meters::parse("abc"), ssmon::Error);
  CHECK_THROWS_AS(Meters::parse("1e-3"), ssmon::Error);
  CHECK_THROWS_AS(Meters::parse("0.1234567"), ssmon::Error);
}

TEST_CASE("str renders the shortest exact decimal") {
  CHECK(Meters::parse("0.26").str() == "0.26");
  CHECK(Meters::parse("0.150000").str() == "0.15");
  CHECK(Meters::parse("0").str() == "0");
  CHECK(Meters::parse("2").str() == "2");
  CHECK(Meters::parse("-0.005").str() == "-0.005");
  CHECK(Meters::from_micrometers(1).str() == "0.000001");
  CHECK(Meters::from_micrometers(410000).str() == "0.41");
}

TEST_CASE("sums of configured decimals are exact") {
  const Meters sum =
      Meters::parse("0.15") + Meters::parse("0.05") + Meters::parse("0.06");
  CHECK(sum == Meters::parse("0.26"));
  CHECK(sum.str() == "0.26");

  Meters acc = Meters::parse("0.1");
  for (int i = 0; i < 9; ++i) acc += Meters::parse("0.1");
  CHECK(acc == Meters::parse("1"));

  CHECK(Meters::parse("0.41") - Meters::parse("0.26") == Meters::parse("0.15"));
}

TEST_CASE("from_value rounds to the nearest micrometer") {
  CHECK(Meters::from_value(0.1 + 0.2) == Meters::parse("0.3"));
  CHECK(Meters::from_value(0.2599999999) == Meters::parse("0.26"));
  CHECK(Meters::from_value(1e-7) == Meters{});
  CHECK(Meters::from_value(-0.15) == Meters::parse("-0.15"));
}

TEST_CASE("ceil_from_value never lands below the input") {
  for (double v : {0.0, 0.25, 0.26, 0.3, 1e-7, 0.1234564, 2.000001}) {
    const Meters m = Meters::ceil_from_value(v);
    CHECK(m.value() >= v);
    CHECK(m.micrometers() - static_cast<std::int64_t>(v * 1e6) <= 1);
  }
}

TEST_CASE("ordering follows the numeric value") {
  CHECK(Meters::parse("0.26") < Meters::parse("0.41"));
  CHECK(Meters::parse("-0.1") < Meters{});
  CHECK(Meters::parse("0.2") <= Meters::parse("0.20"));
  CHECK(Meters::parse("0.2") == Meters::parse("0.20"));
}
