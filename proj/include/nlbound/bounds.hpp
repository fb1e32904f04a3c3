#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nlbound/box.hpp"
#include "nlbound/decompose.hpp"
#include "nlbound/delta_tables.hpp"
#include "nlbound/rational.hpp"

namespace nlbound {

/// Preimage sizes |f_0^{-1}(1)|, |f_1^{-1}(1)|, |g_0^{-1}(1)|, |g_1^{-1}(1)|.
struct ClassProfile {
  int k0 = 0;
  int k1 = 0;
  int l0 = 0;
  int l1 = 0;

  friend bool operator==(const ClassProfile&, const ClassProfile&) = default;
  friend auto operator<=>(const ClassProfile&, const ClassProfile&) = default;
};

struct BoundReport {
  Rational raw_bound;
  /// min(raw_bound, 4); presentation only.
  Rational clamped_bound;
  ClassProfile witness;
  int n = 0;
  std::string system;
  /// NL of the bounded system (the trivial-protocol lower bound).
  Rational nl;
  std::optional<Decomposition> decomposition;
};

/// Supplies delta tables for (p, n); lets callers plug in a cache.
using TableSource = std::function<DeltaTables(const Rational& p, int n)>;

struct ScanOptions {
  int jobs = 1;
  /// Scan only k0 <= 2^(n-1); complementing all four functions maps every
  /// profile onto one with that property without changing its value.
  bool complement_reduction = true;
};

/// 2 - (k0+l0)/2^(n-2) + 4[d+(k0,l0) + d+(k0,l1) + d+(k1,l0) - d-(k1,l1)].
/// Throws std::out_of_range for a profile outside [0, 2^n]^4 or n beyond the tables.
Rational class_bound(const DeltaTables& tables, int n, const ClassProfile& profile);

/// Maximum of class_bound over every profile at level n, with the
/// lexicographically smallest maximizing profile.
std::pair<Rational, ClassProfile> max_class_bound(const DeltaTables& tables, int n, const ScanOptions& options = {});

/// Exhaustive (2^n+1)^4 scan; reference for the decoupled scan.
std::pair<Rational, ClassProfile> max_class_bound_exhaustive(const DeltaTables& tables, int n);

/// p = P(0,0|0,0) for an isotropic system. Throws std::invalid_argument otherwise.
Rational isotropic_parameter(const BinarySystem& p_iso);

TableSource default_table_source(const BuildOptions& options = {});

/// Upper bound on D(n, P_iso) for an isotropic system.
BoundReport iso_bound(const BinarySystem& p_iso, int n, const TableSource& tables = default_table_source(),
                      const ScanOptions& options = {});

/// Per aggregated cell (k0+k1, l0+l1), the largest class_bound.
class ClassGrid {
 public:
  ClassGrid(int n, std::vector<Rational> cells) : n_(n), cells_(std::move(cells)) {}

  int n() const { return n_; }
  int side() const { return (2 << n_) + 1; }
  const Rational& at(int sk, int sl) const { return cells_.at(static_cast<std::size_t>(sk) * side() + sl); }

  /// Header "s_k,s_l,bound_num,bound_den"; with `approximate` a trailing
  /// "bound_approx" column holds a decimal rendering.
  std::string to_csv(bool approximate = false) const;

 private:
  int n_;
  std::vector<Rational> cells_;
};

ClassGrid class_grid(const DeltaTables& tables, int n);
ClassGrid class_grid(const BinarySystem& p_iso, int n, const TableSource& tables = default_table_source());

/// Bound for any nonsignaling system through its least nonlocal isotropic envelope.
BoundReport general_bound(const BinarySystem& p, int n, const TableSource& tables = default_table_source(),
                          const ScanOptions& options = {});

}  // namespace nlbound
