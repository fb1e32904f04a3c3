#include "nlbound/box.hpp"

#include <sstream>
#include <stdexcept>

namespace nlbound {

CHSHExpression CHSHExpression::from_index(int index) {
  if (index < 0 || index > 7) throw std::out_of_range("CHSH expression index out of range");
  return {index >> 2, (index >> 1) & 1, (index & 1) ? -1 : 1};
}

std::string CHSHExpression::str() const {
  std::ostringstream os;
  os << (sign < 0 ? '-' : '+') << "CHSH[" << x << y << "]";
  return os.str();
}

// sign * sum_{xy} (-1)^{(x^x0)(y^y0)} E_xy peaks at 4 on the vertex with
// a^b = xy ^ y0·x ^ x0·y ^ x0·y0 ^ [sign<0].
CHSHExpression violated_expression(const NonlocalVertex& v) {
  const int x0 = v.beta;
  const int y0 = v.alpha;
  const int negative = v.gamma ^ (x0 & y0);
  return {x0, y0, negative ? -1 : 1};
}

NonlocalVertex vertex_of(const CHSHExpression& e) {
  return {e.y, e.x, (e.x & e.y) ^ (e.sign < 0 ? 1 : 0)};
}

BinarySystem local_vertex(int alpha, int beta, int gamma, int delta) {
  BinarySystem p;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      const int a = (alpha & x) ^ gamma;
      const int b = (beta & y) ^ delta;
      p(x, y, a, b) = 1;
    }
  return p;
}

BinarySystem local_vertex(int i) {
  if (i < 0 || i > 15) throw std::out_of_range("local vertex index out of range");
  return local_vertex((i >> 3) & 1, (i >> 2) & 1, (i >> 1) & 1, i & 1);
}

BinarySystem nonlocal_vertex(int alpha, int beta, int gamma) {
  BinarySystem p;
  const Rational half(1, 2);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          if ((a ^ b) == ((x & y) ^ (alpha & x) ^ (beta & y) ^ gamma)) p(x, y, a, b) = half;
  return p;
}

BinarySystem nonlocal_vertex(const NonlocalVertex& v) { return nonlocal_vertex(v.alpha, v.beta, v.gamma); }

BinarySystem pr_box() { return nonlocal_vertex(0, 0, 0); }
BinarySystem anti_pr_box() { return nonlocal_vertex(0, 0, 1); }

BinarySystem correlated_box() {
  return mix({{Rational(1, 2), local_vertex(0, 0, 0, 0)}, {Rational(1, 2), local_vertex(0, 0, 1, 1)}});
}

BinarySystem facet_isotropic(const NonlocalVertex& v) {
  return mix({{Rational(3, 4), nonlocal_vertex(v)}, {Rational(1, 4), nonlocal_vertex(v.opposite())}});
}

BinarySystem isotropic(const Rational& eps, const NonlocalVertex& v) {
  return mix({{eps, nonlocal_vertex(v)}, {Rational(1) - eps, facet_isotropic(v)}});
}

BinarySystem mix(std::span<const WeightedSystem> components) {
  Rational total;
  BinarySystem out;
  for (const auto& c : components) {
    if (c.weight.sign() < 0) throw std::invalid_argument("mix: negative weight " + c.weight.str());
    total += c.weight;
    if (c.weight.is_zero()) continue;
    for (int i = 0; i < 16; ++i) {
      const int x = i >> 3, y = (i >> 2) & 1, a = (i >> 1) & 1, b = i & 1;
      out(x, y, a, b) += c.weight * c.system(x, y, a, b);
    }
  }
  if (total != Rational(1)) throw std::invalid_argument("mix: weights sum to " + total.str() + ", expected 1");
  return out;
}

BinarySystem mix(std::initializer_list<WeightedSystem> components) {
  return mix(std::span<const WeightedSystem>(components.begin(), components.size()));
}

BinarySystem wedge(const Rational& eps, const Rational& delta) {
  if (eps.sign() < 0 || delta.sign() < 0 || eps + delta > Rational(1))
    throw std::invalid_argument("wedge parameters (" + eps.str() + ", " + delta.str() + ") outside the simplex");
  return mix({{eps, pr_box()},
              {delta, correlated_box()},
              {Rational(1) - eps - delta, facet_isotropic({})}});
}

Rational correlator(const BinarySystem& p, int x, int y) {
  return p(x, y, 0, 0) + p(x, y, 1, 1) - p(x, y, 0, 1) - p(x, y, 1, 0);
}

Rational chsh_value(const BinarySystem& p, const CHSHExpression& e) {
  Rational sum;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      const Rational c = correlator(p, x, y);
      if ((x ^ e.x) & (y ^ e.y))
        sum -= c;
      else
        sum += c;
    }
  return e.sign < 0 ? -sum : sum;
}

NLValue nl_value(const BinarySystem& p) {
  NLValue best{chsh_value(p, CHSHExpression::from_index(0)), CHSHExpression::from_index(0)};
  for (int i = 1; i < 8; ++i) {
    const auto e = CHSHExpression::from_index(i);
    Rational v = chsh_value(p, e);
    if (v > best.value) best = {std::move(v), e};
  }
  return best;
}

std::string Violation::describe() const {
  std::ostringstream os;
  switch (kind) {
    case ViolationKind::negative_entry:
      os << "negative entry P(" << where[2] << "," << where[3] << "|" << where[0] << "," << where[1] << ")";
      break;
    case ViolationKind::normalization:
      os << "P(.,.|" << where[0] << "," << where[1] << ") does not sum to 1";
      break;
    case ViolationKind::alice_signaling:
      os << "Alice marginal P(a=" << where[1] << "|x=" << where[0] << ") depends on y";
      break;
    case ViolationKind::bob_signaling:
      os << "Bob marginal P(b=" << where[1] << "|y=" << where[0] << ") depends on x";
      break;
  }
  return os.str();
}

ValidationReport validate(const BinarySystem& p) {
  ValidationReport report;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          if (p(x, y, a, b).sign() < 0) report.violations.push_back({ViolationKind::negative_entry, {x, y, a, b}});
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      if (p(x, y, 0, 0) + p(x, y, 0, 1) + p(x, y, 1, 0) + p(x, y, 1, 1) != Rational(1))
        report.violations.push_back({ViolationKind::normalization, {x, y, -1, -1}});
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a)
      if (p(x, 0, a, 0) + p(x, 0, a, 1) != p(x, 1, a, 0) + p(x, 1, a, 1))
        report.violations.push_back({ViolationKind::alice_signaling, {x, a, -1, -1}});
  for (int y = 0; y < 2; ++y)
    for (int b = 0; b < 2; ++b)
      if (p(0, y, 0, b) + p(0, y, 1, b) != p(1, y, 0, b) + p(1, y, 1, b))
        report.violations.push_back({ViolationKind::bob_signaling, {y, b, -1, -1}});
  return report;
}

std::optional<Isotropy> is_isotropic(const BinarySystem& p) {
  const Rational half(1, 2);
  const Rational quarter(1, 4);
  for (int i = 0; i < 8; ++i) {
    const NonlocalVertex v{(i >> 2) & 1, (i >> 1) & 1, i & 1};
    // P(0,gamma|0,0) lies on the support of v.
    const Rational on = p(0, 0, 0, v.gamma);
    if (on < quarter || on > half) continue;
    const Rational off = half - on;
    bool ok = true;
    for (int x = 0; x < 2 && ok; ++x)
      for (int y = 0; y < 2 && ok; ++y)
        for (int a = 0; a < 2 && ok; ++a)
          for (int b = 0; b < 2 && ok; ++b) {
            const bool support = (a ^ b) == ((x & y) ^ (v.alpha & x) ^ (v.beta & y) ^ v.gamma);
            ok = p(x, y, a, b) == (support ? on : off);
          }
    if (!ok) continue;
    const Rational q = Rational(2) * on;
    return Isotropy{Rational(4) * q - Rational(3), q, v, violated_expression(v)};
  }
  return std::nullopt;
}

BinarySystem relabel_outputs(const BinarySystem& p, std::array<bool, 2> flip_alice, std::array<bool, 2> flip_bob) {
  BinarySystem out;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          out(x, y, a ^ int(flip_alice[x]), b ^ int(flip_bob[y])) = p(x, y, a, b);
  return out;
}

bool has_uniform_marginals(const BinarySystem& p) {
  const Rational half(1, 2);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      if (p(x, y, 0, 0) + p(x, y, 0, 1) != half || p(x, y, 0, 0) + p(x, y, 1, 0) != half) return false;
  return true;
}

std::string to_string(const BinarySystem& p) {
  std::ostringstream os;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      os << "xy=" << x << y << ":";
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) os << ' ' << p(x, y, a, b);
      os << '\n';
    }
  return os.str();
}

}  // namespace nlbound
