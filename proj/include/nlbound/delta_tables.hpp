#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "nlbound/rational.hpp"

namespace nlbound {

/// Which side of the recursive relaxation: the max-table or the min-table.
enum class Extremum { upper, lower };

struct LevelStats {
  int level = 0;
  /// Number of (i, j) split candidates evaluated while filling the level.
  std::uint64_t split_evaluations = 0;
  /// Grid entries obtained by direct optimization (the rest come from symmetries).
  std::uint64_t entries_optimized = 0;
  double seconds = 0;
};

struct BuildOptions {
  /// Worker threads per level; entries within a level are independent.
  int jobs = 1;
  /// Optimize only the k <= l, k + l <= 2^m triangle of the upper table and
  /// derive the rest; when false every entry of both tables is optimized.
  bool reduced = true;
  std::uint64_t memory_budget_bytes = std::uint64_t{4} << 30;
  std::function<void(const LevelStats&)> on_level;
};

class TableBudgetError : public std::runtime_error {
 public:
  TableBudgetError(std::uint64_t required, std::uint64_t budget);
  std::uint64_t required_bytes() const { return required_; }

 private:
  std::uint64_t required_;
};

/// Exact delta^+_m(k,l) and delta^-_m(k,l) grids for every level m = 0..n at a
/// fixed parameter p = P(0,0|0,0).
///
/// With p = u/v in lowest terms every level-m value is an integer over the
/// common denominator (2v)^m; the grids store those integer numerators.
class DeltaTables {
 public:
  DeltaTables() = default;

  int copies() const { return static_cast<int>(levels_.size()) - 1; }
  const Rational& p() const { return p_; }
  static int side(int m) { return (1 << m) + 1; }

  /// Throws std::out_of_range unless 0 <= m <= copies() and 0 <= k,l <= 2^m.
  Rational delta(Extremum which, int m, int k, int l) const;

  /// Numerator of delta over common_denominator(m).
  const mpz_class& scaled(Extremum which, int m, int k, int l) const {
    const Level& lv = levels_[m];
    return (which == Extremum::upper ? lv.upper : lv.lower)[k * side(m) + l];
  }
  const mpz_class& common_denominator(int m) const { return levels_[m].denominator; }

  const std::vector<LevelStats>& stats() const { return stats_; }

  friend bool operator==(const DeltaTables& a, const DeltaTables& b);

 private:
  struct Level {
    mpz_class denominator;
    std::vector<mpz_class> upper;
    std::vector<mpz_class> lower;
  };

  friend DeltaTables build_tables(const Rational& p, int n, const BuildOptions& options);
  friend DeltaTables read_tables(std::istream& in, const std::string& origin);
  void check_range(int m, int k, int l) const;

  Rational p_;
  std::vector<Level> levels_;
  std::vector<LevelStats> stats_;
};

/// Builds all levels 0..n by dynamic programming over the split recursion.
/// Throws std::invalid_argument for p outside [0, 1/2] or n < 0, and
/// TableBudgetError when the estimated footprint exceeds the budget.
DeltaTables build_tables(const Rational& p, int n, const BuildOptions& options = {});

/// Rough resident size of the tables for (p, n), in bytes.
std::uint64_t estimate_table_bytes(const Rational& p, int n);

// Persistence ---------------------------------------------------------------

class TableFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class TableVersionError : public TableFileError {
 public:
  using TableFileError::TableFileError;
};
class TableChecksumError : public TableFileError {
 public:
  using TableFileError::TableFileError;
};
class TableHeaderError : public TableFileError {
 public:
  using TableFileError::TableFileError;
};
class TableFormatError : public TableFileError {
 public:
  using TableFileError::TableFileError;
};

inline constexpr int kTableFormatVersion = 1;

void write_tables(std::ostream& out, const DeltaTables& tables);
DeltaTables read_tables(std::istream& in, const std::string& origin = "<stream>");

void save_tables(const DeltaTables& tables, const std::filesystem::path& path);
/// Throws TableFileError subclasses: version, checksum, header, or format.
DeltaTables load_tables(const std::filesystem::path& path);
/// As above, and additionally requires the header to declare (p, n).
DeltaTables load_tables(const std::filesystem::path& path, const Rational& p, int n);

/// File name used for (p, n) inside a cache directory.
std::filesystem::path table_cache_path(const std::filesystem::path& dir, const Rational& p, int n);

}  // namespace nlbound
