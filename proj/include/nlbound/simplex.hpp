#pragma once

#include <vector>

#include "nlbound/rational.hpp"

namespace nlbound {

/// maximize c·x  subject to  A x <= b,  x >= 0, with b >= 0 so the origin is
/// feasible. Dense, exact, Bland's rule throughout.
struct LinearProgram {
  std::vector<std::vector<Rational>> a;  // rows = constraints
  std::vector<Rational> b;
  std::vector<Rational> c;
};

enum class LpStatus { optimal, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::optimal;
  std::vector<Rational> x;
  /// Dual prices, one per constraint.
  std::vector<Rational> y;
  /// b - A x.
  std::vector<Rational> slack;
  Rational objective;
  /// Basic variable per row; indices >= x.size() denote slack variables.
  std::vector<int> basis;
  int pivots = 0;
};

/// Throws std::invalid_argument for inconsistent dimensions or negative b.
LpSolution solve(const LinearProgram& lp);

/// Primal and dual feasibility plus equal objectives, all exact.
bool verify_certificate(const LinearProgram& lp, const LpSolution& solution);

}  // namespace nlbound
