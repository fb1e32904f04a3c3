#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <tuple>
#include <vector>

#include "nlbound/box.hpp"
#include "nlbound/protocol.hpp"

namespace testing {

using nlbound::BinarySystem;
using nlbound::Rational;

// Random convex combination of one to four distinct vertices (16 local,
// 8 nonlocal) with small integer weights.
inline BinarySystem random_box(std::mt19937_64& rng, int max_weight = 9) {
  std::vector<int> ids(24);
  for (int i = 0; i < 24; ++i) ids[i] = i;
  std::shuffle(ids.begin(), ids.end(), rng);
  const int count = std::uniform_int_distribution<int>(1, 4)(rng);
  std::uniform_int_distribution<int> weight(1, max_weight);
  std::vector<int> w(count);
  long total = 0;
  for (auto& x : w) total += (x = weight(rng));
  std::vector<nlbound::WeightedSystem> parts;
  for (int c = 0; c < count; ++c) {
    const int i = ids[c];
    BinarySystem v = i < 16 ? nlbound::local_vertex(i)
                            : nlbound::nonlocal_vertex((i - 16) >> 2, ((i - 16) >> 1) & 1, (i - 16) & 1);
    parts.push_back({Rational(w[c], total), v});
  }
  return nlbound::mix(parts);
}

// Textbook recursion, top-down over rationals with no symmetry shortcuts:
//   d_m(k,l) = opt_{i,j} p[d(i,j) + d(k-i,l-j)] + (1/2-p)[d(i,l-j) + d(k-i,j)]
// with i, k-i, j, l-j in [0, 2^(m-1)] and d_0 the 2x2 table {0,0;0,1}.
class RecursiveDelta {
 public:
  explicit RecursiveDelta(Rational p) : p_(std::move(p)), q_(Rational(1, 2) - p_) {}

  Rational operator()(bool upper, int m, int k, int l) {
    if (m == 0) return Rational(k * l);
    const auto key = std::make_tuple(upper, m, k, l);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const int half = 1 << (m - 1);
    bool first = true;
    Rational best;
    for (int i = 0; i <= half; ++i)
      for (int j = 0; j <= half; ++j) {
        if (k - i < 0 || k - i > half || l - j < 0 || l - j > half) continue;
        Rational v = p_ * ((*this)(upper, m - 1, i, j) + (*this)(upper, m - 1, k - i, l - j)) +
                     q_ * ((*this)(upper, m - 1, i, l - j) + (*this)(upper, m - 1, k - i, j));
        if (first || (upper ? v > best : v < best)) best = v;
        first = false;
      }
    memo_[key] = best;
    return best;
  }

 private:
  Rational p_, q_;
  std::map<std::tuple<bool, int, int, int>, Rational> memo_;
};

}  // namespace testing
