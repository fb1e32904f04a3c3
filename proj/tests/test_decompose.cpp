#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "nlbound/decompose.hpp"
#include "support.hpp"

using namespace nlbound;

TEST_CASE("local part of the wedge is 1 - eps") {
  for (int a = 0; a <= 10; ++a)
    for (int b = 0; a + b <= 10; ++b) {
      const Rational eps(a, 10), delta(b, 10);
      const LPResult r = local_part(wedge(eps, delta));
      CHECK(r.local_part == 1 - eps);
      CHECK(r.certified);
    }
  CHECK(local_part(pr_box()).local_part == 0);
  for (int i = 0; i < 16; ++i) CHECK(local_part(local_vertex(i)).local_part == 1);
}

TEST_CASE("column order does not change the optimum") {
  std::mt19937_64 rng(31);
  std::array<int, 16> order{};
  std::iota(order.begin(), order.end(), 0);
  for (int t = 0; t < 30; ++t) {
    const BinarySystem p = testing::random_box(rng);
    const Rational base = local_part(p).local_part;
    std::shuffle(order.begin(), order.end(), rng);
    const LPResult r = local_part(p, order);
    CHECK(r.local_part == base);
    CHECK(r.certified);
    for (const auto& s : r.slack) CHECK(s >= 0);
  }
  const int bad[3] = {0, 1, 2};
  CHECK_THROWS_AS(local_part(pr_box(), bad), std::invalid_argument);
}

TEST_CASE("facet weight") {
  const BinarySystem pf = facet_isotropic({});
  CHECK(facet_weight(pf, pf) == 1);
  CHECK(facet_weight(local_vertex(0), pf) == 0);
  CHECK_THROWS_AS(facet_weight(pf, pr_box()), std::invalid_argument);
  CHECK_THROWS_AS(facet_of(correlated_box()), std::invalid_argument);
  const Facet f = facet_of(wedge(Rational(1, 5), Rational(1, 5)));
  CHECK(f.nonlocal == pr_box());
  CHECK(f.isotropic == pf);
}

TEST_CASE("isotropic systems are their own envelope") {
  for (int a = 1; a <= 10; ++a) {
    const Rational eps(a, 10);
    const Decomposition d = minimal_isotropic(wedge(eps, 0));
    CHECK(d.epsilon == eps);
    CHECK(d.q == 1);
    CHECK_FALSE(d.p_local);
  }
}

TEST_CASE("envelope along the correlated line") {
  // P_q = q·wedge(1/5, 4/5) + (1-q)·wedge(1/5, 0)
  const Rational e(1, 5);
  for (int i = 0; i <= 5; ++i) {
    const Rational q(i, 5);
    const BinarySystem p = mix({{q, wedge(e, 1 - e)}, {1 - q, wedge(e, 0)}});
    CHECK(p == wedge(e, q * (1 - e)));
    const Decomposition d = minimal_isotropic(p);
    CHECK(d.epsilon == e / ((1 - e) * (1 - q) + e));
    CHECK(2 * (1 + d.epsilon) >= nl_value(p).value);
  }
}

TEST_CASE("random nonlocal systems reconstruct") {
  std::mt19937_64 rng(41);
  int nonlocal = 0;
  for (int t = 0; t < 150; ++t) {
    const BinarySystem p = testing::random_box(rng);
    const Decomposition d = minimal_isotropic(p);  // throws on a failed identity
    const Rational nl = nl_value(p).value;
    if (nl <= 2) {
      CHECK(d.epsilon == 0);
      continue;
    }
    ++nonlocal;
    CHECK(d.epsilon > 0);
    CHECK(d.q > 0);
    CHECK(d.q <= 1);
    CHECK(nl_value(d.p_iso).value >= nl);
    CHECK(d.facet == nl_value(p).expression);
    if (d.p_local) CHECK(nl_value(*d.p_local).value <= 2);
  }
  CHECK(nonlocal > 20);
}
