#include "nlbound/decompose.hpp"

#include <numeric>
#include <stdexcept>

namespace nlbound {

LPResult local_part(const BinarySystem& p, std::span<const int> vertex_order) {
  std::array<int, 16> order{};
  std::iota(order.begin(), order.end(), 0);
  if (!vertex_order.empty()) {
    if (vertex_order.size() != 16) throw std::invalid_argument("local_part: vertex order must list 16 vertices");
    std::array<bool, 16> seen{};
    for (std::size_t c = 0; c < 16; ++c) {
      const int v = vertex_order[c];
      if (v < 0 || v > 15 || seen[v]) throw std::invalid_argument("local_part: vertex order is not a permutation");
      seen[v] = true;
      order[c] = v;
    }
  }

  LinearProgram lp;
  lp.a.assign(16, std::vector<Rational>(16));
  lp.b.assign(p.table().begin(), p.table().end());
  lp.c.assign(16, Rational(1));
  for (int c = 0; c < 16; ++c) {
    const BinarySystem vertex = local_vertex(order[c]);
    for (int r = 0; r < 16; ++r) lp.a[r][c] = vertex.table()[r];
  }

  const LpSolution sol = solve(lp);
  if (sol.status != LpStatus::optimal) throw std::logic_error("local_part: LP reported unbounded");
  LPResult out;
  for (int c = 0; c < 16; ++c) out.weights[order[c]] = sol.x[c];
  out.local_part = sol.objective;
  for (int r = 0; r < 16; ++r) {
    out.slack[r] = sol.slack[r];
    out.duals[r] = sol.y[r];
  }
  out.certified = verify_certificate(lp, sol);
  return out;
}

Facet facet_of(const BinarySystem& p) {
  const NLValue nl = nl_value(p);
  if (nl.value <= Rational(2))
    throw std::invalid_argument("facet_of: system is local (NL = " + nl.value.str() + "), no violated facet");
  const NonlocalVertex v = vertex_of(nl.expression);
  return {nl.expression, nonlocal_vertex(v), facet_isotropic(v)};
}

Rational facet_weight(const BinarySystem& p_star, const BinarySystem& p_f) {
  std::optional<Rational> best;
  for (int i = 0; i < 16; ++i) {
    const Rational& den = p_f.table()[i];
    if (den.sign() <= 0) throw std::invalid_argument("facet_weight: facet system has a non-positive entry");
    Rational ratio = p_star.table()[i] / den;
    if (!best || ratio < *best) best = std::move(ratio);
  }
  return *best;
}

namespace {

BinarySystem scaled_sum(std::span<const Rational> weights, const Rational& scale) {
  BinarySystem out;
  for (int i = 0; i < 16; ++i) {
    if (weights[i].is_zero()) continue;
    const BinarySystem v = local_vertex(i);
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            if (!v(x, y, a, b).is_zero()) out(x, y, a, b) += weights[i] * scale;
  }
  return out;
}

BinarySystem combine(const Rational& wa, const BinarySystem& a, const Rational& wb, const BinarySystem& b) {
  BinarySystem out;
  for (int i = 0; i < 16; ++i) {
    const int x = i >> 3, y = (i >> 2) & 1, aa = (i >> 1) & 1, bb = i & 1;
    out(x, y, aa, bb) = wa * a(x, y, aa, bb) + wb * b(x, y, aa, bb);
  }
  return out;
}

}  // namespace

Decomposition minimal_isotropic(const BinarySystem& p) {
  const LPResult lp = local_part(p);
  const NLValue nl = nl_value(p);
  const Rational one(1);

  Decomposition d;
  d.local_part = lp.local_part;
  d.weights = lp.weights;
  d.facet = nl.expression;

  if (nl.value <= Rational(2)) {
    if (lp.local_part != one)
      throw std::logic_error("minimal_isotropic: NL <= 2 but local part " + lp.local_part.str() + " < 1");
    d.epsilon = 0;
    d.q = 0;
    d.facet_weight = 0;
    d.p_iso = isotropic(Rational(0), vertex_of(d.facet));
    d.p_star = p;
    d.p_local = p;
    return d;
  }

  const Facet facet = facet_of(p);
  const Rational& sum = lp.local_part;
  const Rational nonlocal = one - sum;

  // The LP optimum leaves exactly one nonlocal vertex behind.
  const BinarySystem local_mass = scaled_sum(lp.weights, one);
  if (combine(one, local_mass, nonlocal, facet.nonlocal) != p)
    throw std::logic_error("minimal_isotropic: LP remainder is not a multiple of the facet vertex");

  if (sum.is_zero()) {
    d.facet_weight = 0;
  } else {
    d.p_star = scaled_sum(lp.weights, one / sum);
    d.facet_weight = facet_weight(d.p_star, facet.isotropic);
  }
  d.q = sum * d.facet_weight + nonlocal;
  d.epsilon = nonlocal / d.q;
  d.p_iso = isotropic(d.epsilon, vertex_of(d.facet));

  if (d.q < one) {
    const Rational rest = one - d.q;
    d.p_local = combine(one / rest, p, -d.q / rest, d.p_iso);
    if (!validate(*d.p_local).ok() || nl_value(*d.p_local).value > Rational(2))
      throw std::logic_error("minimal_isotropic: residual system is not local");
    if (combine(d.q, d.p_iso, rest, *d.p_local) != p)
      throw std::logic_error("minimal_isotropic: reconstruction mismatch");
  } else if (d.p_iso != p) {
    throw std::logic_error("minimal_isotropic: reconstruction mismatch (q = 1)");
  }
  return d;
}

}  // namespace nlbound
