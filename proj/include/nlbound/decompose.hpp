#pragma once

#include <array>
#include <optional>
#include <span>

#include "nlbound/box.hpp"
#include "nlbound/rational.hpp"
#include "nlbound/simplex.hpp"

namespace nlbound {

/// Largest total weight of local vertices fitting entry-wise under P.
struct LPResult {
  /// Weight per local vertex, in local_vertex(i) order.
  std::array<Rational, 16> weights;
  Rational local_part;
  /// P(a,b|x,y) - sum_i w_i P_{L,i}(a,b|x,y), per box_index.
  std::array<Rational, 16> slack;
  /// Dual prices; together with `weights` an exact optimality certificate.
  std::array<Rational, 16> duals;
  bool certified = false;
};

struct Facet {
  CHSHExpression expression;
  BinarySystem nonlocal;   // P_NL
  BinarySystem isotropic;  // P_F
};

/// P = q·P_iso(epsilon) + (1-q)·P_L with NL(P_iso) = 2(1+epsilon) minimal.
struct Decomposition {
  Rational epsilon;
  Rational q;
  Rational facet_weight;  // p_f
  Rational local_part;
  std::array<Rational, 16> weights;
  CHSHExpression facet;
  BinarySystem p_iso;
  BinarySystem p_star;  // normalized local mixture; zero table when local_part = 0
  std::optional<BinarySystem> p_local;  // present when q < 1
};

/// The 16-variable LP over local vertices. `vertex_order` permutes the
/// columns (identity when empty); results are reported in canonical order.
LPResult local_part(const BinarySystem& p, std::span<const int> vertex_order = {});

/// Violated facet of a nonlocal system. Throws std::invalid_argument when NL(P) <= 2.
Facet facet_of(const BinarySystem& p);

/// min over entries of p_star / p_f. Throws std::invalid_argument if p_f has a zero entry.
Rational facet_weight(const BinarySystem& p_star, const BinarySystem& p_f);

/// Throws std::logic_error when the reconstruction identity fails.
Decomposition minimal_isotropic(const BinarySystem& p);

}  // namespace nlbound
