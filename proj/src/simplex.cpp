#include "nlbound/simplex.hpp"

#include <stdexcept>

namespace nlbound {

LpSolution solve(const LinearProgram& lp) {
  const std::size_t rows = lp.a.size();
  const std::size_t cols = lp.c.size();
  if (lp.b.size() != rows) throw std::invalid_argument("simplex: b has wrong length");
  for (const auto& row : lp.a)
    if (row.size() != cols) throw std::invalid_argument("simplex: ragged constraint matrix");
  for (const auto& bi : lp.b)
    if (bi.sign() < 0) throw std::invalid_argument("simplex: origin infeasible (negative right-hand side)");

  // Tableau columns: structural 0..cols-1, slack cols..cols+rows-1, rhs last.
  const std::size_t width = cols + rows + 1;
  std::vector<std::vector<Rational>> t(rows, std::vector<Rational>(width));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < cols; ++j) t[r][j] = lp.a[r][j];
    t[r][cols + r] = 1;
    t[r][width - 1] = lp.b[r];
  }
  // Reduced costs z_j - c_j; optimal once all are >= 0.
  std::vector<Rational> cost(width);
  for (std::size_t j = 0; j < cols; ++j) cost[j] = -lp.c[j];

  LpSolution sol;
  sol.basis.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) sol.basis[r] = static_cast<int>(cols + r);

  for (;;) {
    std::size_t enter = width;
    for (std::size_t j = 0; j + 1 < width; ++j)
      if (cost[j].sign() < 0) {
        enter = j;
        break;
      }
    if (enter == width) break;

    std::size_t leave = rows;
    Rational best_ratio;
    for (std::size_t r = 0; r < rows; ++r) {
      if (t[r][enter].sign() <= 0) continue;
      Rational ratio = t[r][width - 1] / t[r][enter];
      if (leave == rows || ratio < best_ratio || (ratio == best_ratio && sol.basis[r] < sol.basis[leave])) {
        leave = r;
        best_ratio = std::move(ratio);
      }
    }
    if (leave == rows) {
      sol.status = LpStatus::unbounded;
      return sol;
    }

    const Rational pivot = t[leave][enter];
    for (auto& v : t[leave]) v /= pivot;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == leave || t[r][enter].is_zero()) continue;
      const Rational factor = t[r][enter];
      for (std::size_t j = 0; j < width; ++j)
        if (!t[leave][j].is_zero()) t[r][j] -= factor * t[leave][j];
    }
    if (!cost[enter].is_zero()) {
      const Rational factor = cost[enter];
      for (std::size_t j = 0; j < width; ++j)
        if (!t[leave][j].is_zero()) cost[j] -= factor * t[leave][j];
    }
    sol.basis[leave] = static_cast<int>(enter);
    ++sol.pivots;
  }

  sol.x.assign(cols, Rational());
  for (std::size_t r = 0; r < rows; ++r)
    if (sol.basis[r] < static_cast<int>(cols)) sol.x[sol.basis[r]] = t[r][width - 1];
  sol.y.assign(rows, Rational());
  for (std::size_t r = 0; r < rows; ++r) sol.y[r] = cost[cols + r];
  sol.objective = cost[width - 1];
  sol.slack.assign(rows, Rational());
  for (std::size_t r = 0; r < rows; ++r) {
    Rational used;
    for (std::size_t j = 0; j < cols; ++j) used += lp.a[r][j] * sol.x[j];
    sol.slack[r] = lp.b[r] - used;
  }
  return sol;
}

bool verify_certificate(const LinearProgram& lp, const LpSolution& s) {
  if (s.status != LpStatus::optimal) return false;
  const std::size_t rows = lp.a.size();
  const std::size_t cols = lp.c.size();
  if (s.x.size() != cols || s.y.size() != rows) return false;
  Rational primal, dual;
  for (std::size_t j = 0; j < cols; ++j) {
    if (s.x[j].sign() < 0) return false;
    primal += lp.c[j] * s.x[j];
  }
  for (std::size_t r = 0; r < rows; ++r) {
    Rational used;
    for (std::size_t j = 0; j < cols; ++j) used += lp.a[r][j] * s.x[j];
    if (used > lp.b[r] || s.y[r].sign() < 0) return false;
    dual += lp.b[r] * s.y[r];
  }
  for (std::size_t j = 0; j < cols; ++j) {
    Rational reduced;
    for (std::size_t r = 0; r < rows; ++r) reduced += lp.a[r][j] * s.y[r];
    if (reduced < lp.c[j]) return false;
  }
  return primal == dual && primal == s.objective;
}

}  // namespace nlbound
