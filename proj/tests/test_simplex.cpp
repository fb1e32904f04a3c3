#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "nlbound/simplex.hpp"

using namespace nlbound;

TEST_CASE("textbook LP") {
  // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
  LinearProgram lp{{{1, 0}, {0, 2}, {3, 2}}, {4, 12, 18}, {3, 5}};
  const LpSolution s = solve(lp);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.x[0] == 2);
  CHECK(s.x[1] == 6);
  CHECK(s.objective == 36);
  CHECK(s.y[0] == 0);
  CHECK(s.y[1] == Rational(3, 2));
  CHECK(s.y[2] == 1);
  CHECK(verify_certificate(lp, s));
}

TEST_CASE("unbounded and degenerate problems") {
  LinearProgram unbounded{{{1, -1}}, {1}, {1, 1}};
  CHECK(solve(unbounded).status == LpStatus::unbounded);

  // Degenerate vertex at the origin; Bland's rule must terminate.
  LinearProgram degenerate{{{Rational(1, 2), Rational(-11, 2), Rational(-5, 2), 9},
                            {Rational(1, 2), Rational(-3, 2), Rational(-1, 2), 1},
                            {1, 0, 0, 0}},
                           {0, 0, 1},
                           {10, -57, -9, -24}};
  const LpSolution s = solve(degenerate);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.objective == 1);
  CHECK(verify_certificate(degenerate, s));
}

TEST_CASE("input checks") {
  CHECK_THROWS_AS(solve({{{1}}, {-1}, {1}}), std::invalid_argument);
  CHECK_THROWS_AS(solve({{{1, 2}}, {1}, {1}}), std::invalid_argument);
}

TEST_CASE("random LPs: certificates hold and a tampered certificate fails") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> coef(-3, 6), rhs(0, 9), obj(-2, 5);
  for (int t = 0; t < 100; ++t) {
    const int rows = 2 + t % 4, cols = 2 + (t / 4) % 4;
    LinearProgram lp;
    lp.a.assign(rows, std::vector<Rational>(cols));
    for (auto& row : lp.a)
      for (auto& e : row) e = Rational(coef(rng), 2);
    lp.a.push_back(std::vector<Rational>(cols, Rational(1)));  // keeps it bounded
    for (int r = 0; r <= rows; ++r) lp.b.push_back(rhs(rng));
    for (int c = 0; c < cols; ++c) lp.c.push_back(obj(rng));
    LpSolution s = solve(lp);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(verify_certificate(lp, s));
    s.objective += 1;
    CHECK_FALSE(verify_certificate(lp, s));
  }
}
