#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nlbound/rational.hpp"

namespace nlbound {

/// Flat index of P(a,b|x,y): [x][y] major, then [a][b] row-major.
constexpr int box_index(int x, int y, int a, int b) { return ((x * 2 + y) * 2 + a) * 2 + b; }

/// Binary bipartite system P(a,b|x,y) with x,y,a,b in {0,1}.
///
/// The type only stores a 16-entry table; membership in the nonsignaling
/// polytope is checked by validate(). Every constructor in this header
/// returns a valid system.
class BinarySystem {
 public:
  BinarySystem() = default;
  explicit BinarySystem(const std::array<Rational, 16>& table) : table_(table) {}

  const Rational& operator()(int x, int y, int a, int b) const { return table_[box_index(x, y, a, b)]; }
  Rational& operator()(int x, int y, int a, int b) { return table_[box_index(x, y, a, b)]; }

  const std::array<Rational, 16>& table() const { return table_; }

  friend bool operator==(const BinarySystem&, const BinarySystem&) = default;

 private:
  std::array<Rational, 16> table_{};
};

/// One of the eight CHSH expressions:
///   sign * (E_{xy} + E_{x'y} + E_{xy'} - E_{x'y'}),  x' = 1-x, y' = 1-y,
/// with (x,y) the anchor. Ordered lexicographically by (x, y, sign) where
/// the positive branch precedes the negative one.
struct CHSHExpression {
  int x = 0;
  int y = 0;
  int sign = 1;

  /// 0..7 in the lexicographic order above.
  int index() const { return (x * 2 + y) * 2 + (sign < 0 ? 1 : 0); }
  static CHSHExpression from_index(int index);
  std::string str() const;

  friend bool operator==(const CHSHExpression&, const CHSHExpression&) = default;
};

/// Nonlocal vertex label: a xor b = xy xor alpha*x xor beta*y xor gamma.
struct NonlocalVertex {
  int alpha = 0;
  int beta = 0;
  int gamma = 0;

  NonlocalVertex opposite() const { return {alpha, beta, gamma ^ 1}; }
  friend bool operator==(const NonlocalVertex&, const NonlocalVertex&) = default;
};

/// The unique CHSH expression on which `v` reaches 4.
CHSHExpression violated_expression(const NonlocalVertex& v);
/// The nonlocal vertex that reaches 4 on `e`.
NonlocalVertex vertex_of(const CHSHExpression& e);

/// Deterministic local box a = alpha*x xor gamma, b = beta*y xor delta.
BinarySystem local_vertex(int alpha, int beta, int gamma, int delta);
/// Local vertex number i in the (alpha, beta, gamma, delta) lexicographic order.
BinarySystem local_vertex(int i);
BinarySystem nonlocal_vertex(int alpha, int beta, int gamma);
BinarySystem nonlocal_vertex(const NonlocalVertex& v);

BinarySystem pr_box();
BinarySystem anti_pr_box();
/// Perfectly correlated random bits: P(a,b|x,y) = 1/2 iff a = b.
BinarySystem correlated_box();
/// (3/4)·V + (1/4)·opposite(V): the isotropic system on V's CHSH facet.
BinarySystem facet_isotropic(const NonlocalVertex& v);
/// eps·V + (1-eps)·facet_isotropic(V). NL = 2(1+eps) for eps >= 0.
BinarySystem isotropic(const Rational& eps, const NonlocalVertex& v = {});

struct WeightedSystem {
  Rational weight;
  BinarySystem system;
};

/// Convex combination. Throws std::invalid_argument on a negative weight or
/// if the weights do not sum to 1.
BinarySystem mix(std::span<const WeightedSystem> components);
BinarySystem mix(std::initializer_list<WeightedSystem> components);

/// eps·PR + delta·P_C + (1-eps-delta)·P_F. Throws std::invalid_argument
/// outside the simplex eps, delta >= 0, eps + delta <= 1.
BinarySystem wedge(const Rational& eps, const Rational& delta);

/// E_{xy} = sum_{ab} P(a,b|x,y) (-1)^{a xor b}.
Rational correlator(const BinarySystem& p, int x, int y);
Rational chsh_value(const BinarySystem& p, const CHSHExpression& e);

struct NLValue {
  Rational value;
  CHSHExpression expression;
};

/// Max over the eight CHSH expressions; ties go to the smallest expression index.
NLValue nl_value(const BinarySystem& p);

enum class ViolationKind { negative_entry, normalization, alice_signaling, bob_signaling };

struct Violation {
  ViolationKind kind;
  // negative_entry: (x,y,a,b). normalization: (x,y). alice_signaling: (x,a).
  // bob_signaling: (y,b). Unused slots are -1.
  std::array<int, 4> where{-1, -1, -1, -1};
  std::string describe() const;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const BinarySystem& p);

struct Isotropy {
  /// Wedge convention: NL(P) = 2(1+epsilon). Negative for local isotropic systems.
  Rational epsilon;
  /// Weight of `vertex` in P = q·V + (1-q)·opposite(V), q >= 1/2.
  Rational weight;
  NonlocalVertex vertex;
  CHSHExpression facet;
};

/// Recognizes mixtures of a nonlocal vertex and its opposite.
std::optional<Isotropy> is_isotropic(const BinarySystem& p);

/// Flips Alice's output when her input is x and flip_alice[x] is set, likewise for Bob.
BinarySystem relabel_outputs(const BinarySystem& p, std::array<bool, 2> flip_alice, std::array<bool, 2> flip_bob);

/// True when every one-sided marginal is uniform.
bool has_uniform_marginals(const BinarySystem& p);

std::string to_string(const BinarySystem& p);

}  // namespace nlbound
