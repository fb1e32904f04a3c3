#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "nlbound/rational.hpp"

using nlbound::Rational;

TEST_CASE("parse accepts fractions, integers and decimals") {
  CHECK(Rational::parse("3/6") == Rational(1, 2));
  CHECK(Rational::parse("-4/8") == Rational(-1, 2));
  CHECK(Rational::parse("7") == Rational(7));
  CHECK(Rational::parse("0.375") == Rational(3, 8));
  CHECK(Rational::parse("-0.1") == Rational(-1, 10));
  CHECK(Rational::parse("1e-6") == Rational(1, 1000000));
  CHECK(Rational::parse("2.5E2") == Rational(250));
  CHECK(Rational::parse(".5") == Rational(1, 2));
}

TEST_CASE("parse rejects garbage") {
  for (const char* bad : {"", "abc", "1/0", "1/", "/2", "0.3.4", "1e", "3/-"})
    CHECK_THROWS_AS(Rational::parse(bad), std::invalid_argument);
}

TEST_CASE("values are kept in lowest terms") {
  const Rational r(-6, -8);
  CHECK(r.numerator() == 3);
  CHECK(r.denominator() == 4);
  CHECK(Rational(5, -10).str() == "-1/2");
  CHECK(Rational(4, 2).str() == "2");
  CHECK(Rational(4, 2).fraction_str() == "2/1");
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("arithmetic is exact") {
  Rational third(1, 3);
  CHECK(third + third + third == Rational(1));
  CHECK(Rational(1, 10) * 10 == 1);
  CHECK(Rational(3, 4) / Rational(3, 8) == 2);
  CHECK(-Rational(1, 2) == Rational(-1, 2));
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
  CHECK(abs(Rational(-2, 3)) == Rational(2, 3));
  CHECK(min(Rational(1, 3), Rational(1, 4)) == Rational(1, 4));
  CHECK(max(Rational(1, 3), Rational(1, 4)) == Rational(1, 3));
}

TEST_CASE("ordering") {
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(0));
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(0).is_zero());
  CHECK(Rational(-3, 7).sign() == -1);
}

TEST_CASE("printing round-trips through parse") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-1000000, 1000000), den(1, 1000000);
  for (int i = 0; i < 500; ++i) {
    const Rational r(num(rng), den(rng));
    CHECK(Rational::parse(r.str()) == r);
    CHECK(Rational::parse(r.fraction_str()) == r);
    std::ostringstream os;
    os << r;
    CHECK(os.str() == r.str());
  }
}

TEST_CASE("field axioms on random values") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> num(-50, 50), den(1, 50);
  for (int i = 0; i < 300; ++i) {
    const Rational a(num(rng), den(rng)), b(num(rng), den(rng)), c(num(rng), den(rng));
    CHECK(a + b == b + a);
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a - b) + b == a);
    if (!b.is_zero()) CHECK((a / b) * b == a);
  }
}
