#include "nlbound/delta_tables.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>
#include <utility>

namespace nlbound {

TableBudgetError::TableBudgetError(std::uint64_t required, std::uint64_t budget)
    : std::runtime_error("delta tables need about " + std::to_string(required) + " bytes, budget is " +
                         std::to_string(budget)),
      required_(required) {}

void DeltaTables::check_range(int m, int k, int l) const {
  if (m < 0 || m > copies()) throw std::out_of_range("delta: level " + std::to_string(m) + " not in table");
  const int top = 1 << m;
  if (k < 0 || k > top || l < 0 || l > top)
    throw std::out_of_range("delta: class sizes (" + std::to_string(k) + "," + std::to_string(l) +
                            ") outside [0," + std::to_string(top) + "]");
}

Rational DeltaTables::delta(Extremum which, int m, int k, int l) const {
  check_range(m, k, l);
  return Rational(scaled(which, m, k, l), levels_[m].denominator);
}

bool operator==(const DeltaTables& a, const DeltaTables& b) {
  if (a.p_ != b.p_ || a.levels_.size() != b.levels_.size()) return false;
  for (std::size_t m = 0; m < a.levels_.size(); ++m) {
    const auto& x = a.levels_[m];
    const auto& y = b.levels_[m];
    if (x.denominator != y.denominator || x.upper != y.upper || x.lower != y.lower) return false;
  }
  return true;
}

std::uint64_t estimate_table_bytes(const Rational& p, int n) {
  const double den_bits = std::log2(std::max(1.0, (mpz_class(2 * p.denominator())).get_d())) + 1;
  std::uint64_t total = 0;
  for (int m = 0; m <= n; ++m) {
    const auto entries = static_cast<std::uint64_t>(DeltaTables::side(m)) * DeltaTables::side(m);
    const auto limbs = static_cast<std::uint64_t>(den_bits * m / 64.0) + 1;
    total += 2 * entries * (sizeof(mpz_class) + 8 * limbs);
  }
  return total;
}

namespace {

using Grid = std::vector<mpz_class>;

// Split recursion at one level. `prev` holds the level-(m-1) grid scaled by
// D_{m-1}; results are scaled by D_m = 2v·D_{m-1}:
//   value(i,j) = 2u·[prev(i,j) + prev(k-i,l-j)] + (v-2u)·[prev(i,l-j) + prev(k-i,j)].
class LevelKernel {
 public:
  LevelKernel(const Grid& prev, int half, const mpz_class& same_weight, const mpz_class& cross_weight)
      : prev_(prev), half_(half), stride_(half + 1), same_(same_weight), cross_(cross_weight) {}

  // Optimum over the admissible splits. With `halve` the mirrored split
  // (k-i, l-j) of (i, j) is skipped: it yields the same value.
  std::uint64_t optimize(int k, int l, bool maximize, bool halve, mpz_class& out) {
    const int i_lo = k - std::min(k, half_), i_hi = std::min(k, half_);
    const int j_lo = l - std::min(l, half_), j_hi = std::min(l, half_);
    std::uint64_t evaluations = 0;
    bool first = true;
    for (int i = i_lo; i <= i_hi; ++i) {
      if (halve && 2 * i > k) break;
      const int j_end = (halve && 2 * i == k) ? l / 2 : j_hi;
      for (int j = j_lo; j <= j_end; ++j) {
        mpz_add(a_.get_mpz_t(), at(i, j), at(k - i, l - j));
        mpz_add(b_.get_mpz_t(), at(i, l - j), at(k - i, j));
        mpz_mul(value_.get_mpz_t(), a_.get_mpz_t(), same_.get_mpz_t());
        mpz_addmul(value_.get_mpz_t(), b_.get_mpz_t(), cross_.get_mpz_t());
        ++evaluations;
        const int c = first ? 0 : mpz_cmp(value_.get_mpz_t(), out.get_mpz_t());
        if (first || (maximize ? c > 0 : c < 0)) {
          mpz_swap(out.get_mpz_t(), value_.get_mpz_t());
          first = false;
        }
      }
    }
    return evaluations;
  }

 private:
  mpz_srcptr at(int i, int j) const { return prev_[i * stride_ + j].get_mpz_t(); }

  const Grid& prev_;
  int half_;
  int stride_;
  const mpz_class& same_;
  const mpz_class& cross_;
  mpz_class a_, b_, value_;
};

template <class Task>
std::uint64_t run_parallel(std::size_t count, int jobs, Task&& task) {
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(std::max<std::size_t>(count, 1))));
  if (workers == 1) return task(0, 1);
  std::vector<std::uint64_t> work(workers, 0);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) threads.emplace_back([&, w] { work[w] = task(w, workers); });
  for (auto& t : threads) t.join();
  std::uint64_t total = 0;
  for (auto v : work) total += v;
  return total;
}

}  // namespace

DeltaTables build_tables(const Rational& p, int n, const BuildOptions& options) {
  if (p.sign() < 0 || p > Rational(1, 2))
    throw std::invalid_argument("build_tables: p = " + p.str() + " outside [0, 1/2]");
  if (n < 0) throw std::invalid_argument("build_tables: negative copy count");
  if (n > 20) throw TableBudgetError(std::numeric_limits<std::uint64_t>::max(), options.memory_budget_bytes);
  if (const auto need = estimate_table_bytes(p, n); need > options.memory_budget_bytes)
    throw TableBudgetError(need, options.memory_budget_bytes);

  const mpz_class u = p.numerator();
  const mpz_class v = p.denominator();
  const mpz_class same_weight = 2 * u;
  const mpz_class cross_weight = v - 2 * u;
  const mpz_class level_factor = 2 * v;

  DeltaTables t;
  t.p_ = p;
  t.levels_.resize(n + 1);

  auto& base = t.levels_[0];
  base.denominator = 1;
  base.upper = {0, 0, 0, 1};
  base.lower = base.upper;

  for (int m = 1; m <= n; ++m) {
    const auto start = std::chrono::steady_clock::now();
    const int half = 1 << (m - 1);
    const int top = 1 << m;
    const int side = top + 1;
    auto& prev = t.levels_[m - 1];
    auto& cur = t.levels_[m];
    cur.denominator = prev.denominator * level_factor;
    cur.upper.assign(static_cast<std::size_t>(side) * side, mpz_class(0));
    cur.lower.assign(static_cast<std::size_t>(side) * side, mpz_class(0));
    auto idx = [side](int k, int l) { return static_cast<std::size_t>(k) * side + l; };

    LevelStats stats;
    stats.level = m;
    if (options.reduced) {
      // Directly optimized: k <= l and k + l <= 2^m.
      std::vector<std::pair<int, int>> cells;
      for (int k = 0; k <= half; ++k)
        for (int l = k; k + l <= top; ++l) cells.emplace_back(k, l);
      stats.entries_optimized = cells.size();
      stats.split_evaluations = run_parallel(cells.size(), options.jobs, [&](int worker, int workers) {
        LevelKernel kernel(prev.upper, half, same_weight, cross_weight);
        std::uint64_t evaluations = 0;
        for (std::size_t c = worker; c < cells.size(); c += workers) {
          const auto [k, l] = cells[c];
          evaluations += kernel.optimize(k, l, true, true, cur.upper[idx(k, l)]);
        }
        return evaluations;
      });

      // delta^+(l,k) = delta^+(k,l);
      // delta^+(2^m-k, 2^m-l) = delta^+(k,l) + 1 - (k+l)/2^m;
      // delta^-(k,l) = k/2^m - delta^+(k, 2^m-l).
      const mpz_class unit = cur.denominator / top;
      for (const auto& [k, l] : cells) {
        const mpz_class& value = cur.upper[idx(k, l)];
        cur.upper[idx(l, k)] = value;
        mpz_class complement = value + cur.denominator - (k + l) * unit;
        cur.upper[idx(top - l, top - k)] = complement;
        cur.upper[idx(top - k, top - l)] = std::move(complement);
      }
      for (int k = 0; k <= top; ++k)
        for (int l = 0; l <= top; ++l) cur.lower[idx(k, l)] = k * unit - cur.upper[idx(k, top - l)];
    } else {
      stats.entries_optimized = 2 * static_cast<std::uint64_t>(side) * side;
      stats.split_evaluations = run_parallel(static_cast<std::size_t>(side), options.jobs, [&](int worker, int workers) {
        LevelKernel upper(prev.upper, half, same_weight, cross_weight);
        LevelKernel lower(prev.lower, half, same_weight, cross_weight);
        std::uint64_t evaluations = 0;
        for (int k = worker; k <= top; k += workers)
          for (int l = 0; l <= top; ++l) {
            evaluations += upper.optimize(k, l, true, false, cur.upper[idx(k, l)]);
            evaluations += lower.optimize(k, l, false, false, cur.lower[idx(k, l)]);
          }
        return evaluations;
      });
    }
    stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    t.stats_.push_back(stats);
    if (options.on_level) options.on_level(stats);
  }
  return t;
}

}  // namespace nlbound
