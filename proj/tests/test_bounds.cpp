#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nlbound/bounds.hpp"
#include "support.hpp"

using namespace nlbound;

TEST_CASE("class bound of the uniform profile is the one-copy value") {
  // Balanced classes on every function reduce to NL(P).
  for (int a = 1; a <= 5; ++a) {
    const BinarySystem p = wedge(Rational(a, 5), 0);
    const DeltaTables t = build_tables(p(0, 0, 0, 0), 3);
    for (int n = 1; n <= 3; ++n) {
      const int h = 1 << (n - 1);
      CHECK(class_bound(t, n, {h, h, h, h}) >= nl_value(p).value);
    }
  }
}

TEST_CASE("decoupled scan equals the exhaustive scan") {
  for (const Rational& eps : {Rational(1, 100), Rational(1, 5), Rational(1, 2), Rational(9, 10), Rational(1)}) {
    const DeltaTables t = build_tables(wedge(eps, 0)(0, 0, 0, 0), 4);
    for (int n = 1; n <= 4; ++n) {
      const auto full = max_class_bound_exhaustive(t, n);
      ScanOptions unreduced;
      unreduced.complement_reduction = false;
      const auto a = max_class_bound(t, n);
      const auto b = max_class_bound(t, n, unreduced);
      CHECK(a.first == full.first);
      CHECK(b.first == full.first);
      CHECK(b.second == full.second);
      CHECK(class_bound(t, n, a.second) == a.first);
      CHECK(class_bound(t, n, full.second) == full.first);
      ScanOptions threaded;
      threaded.jobs = 4;
      CHECK(max_class_bound(t, n, threaded) == a);
    }
  }
}

TEST_CASE("complement profile has the same class bound") {
  const DeltaTables t = build_tables(Rational(7, 20), 3);
  const int top = 8;
  for (int k0 = 0; k0 <= top; ++k0)
    for (int k1 = 0; k1 <= top; k1 += 3)
      for (int l0 = 0; l0 <= top; l0 += 2)
        for (int l1 = 0; l1 <= top; ++l1)
          CHECK(class_bound(t, 3, {k0, k1, l0, l1}) == class_bound(t, 3, {top - k0, top - k1, top - l0, top - l1}));
}

TEST_CASE("bound never drops below NL and is tight on small cases") {
  for (int a = 1; a <= 20; ++a) {
    const BinarySystem p = wedge(Rational(a, 20), 0);
    for (int n = 1; n <= 3; ++n) {
      const BoundReport r = iso_bound(p, n);
      CHECK(r.raw_bound >= r.nl);
      CHECK(r.clamped_bound <= 4);
      CHECK(r.nl == 2 * (1 + Rational(a, 20)));
    }
  }
  CHECK(iso_bound(wedge(Rational(1, 5), 0), 3).raw_bound == Rational(12, 5));
  CHECK_THROWS_AS(iso_bound(correlated_box(), 2), std::invalid_argument);
  CHECK_THROWS_AS(iso_bound(pr_box(), 0), std::invalid_argument);
}

TEST_CASE("class grid aggregates the maximum") {
  const BinarySystem p = wedge(Rational(1, 5), 0);
  const DeltaTables t = build_tables(p(0, 0, 0, 0), 3);
  const ClassGrid g = class_grid(t, 3);
  CHECK(g.side() == 17);
  Rational best = g.at(0, 0);
  for (int i = 0; i < g.side(); ++i)
    for (int j = 0; j < g.side(); ++j) best = max(best, g.at(i, j));
  CHECK(best == max_class_bound(t, 3).first);
  // Cell (s_k, s_l) against a direct scan over its profiles.
  for (int sk : {0, 5, 8, 13})
    for (int sl : {1, 8, 16}) {
      std::optional<Rational> cell;
      for (int k0 = 0; k0 <= 8; ++k0)
        for (int l0 = 0; l0 <= 8; ++l0) {
          const int k1 = sk - k0, l1 = sl - l0;
          if (k1 < 0 || k1 > 8 || l1 < 0 || l1 > 8) continue;
          const Rational v = class_bound(t, 3, {k0, k1, l0, l1});
          if (!cell || v > *cell) cell = v;
        }
      CHECK(g.at(sk, sl) == *cell);
    }
  const std::string csv = g.to_csv();
  CHECK(csv.rfind("s_k,s_l,bound_num,bound_den\n", 0) == 0);
  CHECK(g.to_csv(true).rfind("s_k,s_l,bound_num,bound_den,bound_approx\n", 0) == 0);
}

TEST_CASE("general bound") {
  const BoundReport local = general_bound(correlated_box(), 3);
  CHECK(local.raw_bound == 2);
  const Rational e(1, 5);
  const BoundReport r = general_bound(wedge(e, Rational(2, 5)), 3);
  REQUIRE(r.decomposition);
  CHECK(r.raw_bound >= r.nl);
  CHECK(r.raw_bound == iso_bound(r.decomposition->p_iso, 3).raw_bound);
  BinarySystem bad = pr_box();
  bad(0, 0, 0, 0) = 1;
  CHECK_THROWS_AS(general_bound(bad, 2), std::invalid_argument);
}

TEST_CASE("cached tables give identical bounds") {
  const BinarySystem p = wedge(Rational(3, 10), 0);
  const DeltaTables cold = build_tables(p(0, 0, 0, 0), 4);
  std::stringstream ss;
  write_tables(ss, cold);
  const DeltaTables warm = read_tables(ss);
  TableSource cached = [&](const Rational&, int) { return warm; };
  const BoundReport a = iso_bound(p, 4), b = iso_bound(p, 4, cached);
  CHECK(a.raw_bound == b.raw_bound);
  CHECK(a.witness == b.witness);
}
