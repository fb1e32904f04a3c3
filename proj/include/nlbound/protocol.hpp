#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "nlbound/box.hpp"
#include "nlbound/delta_tables.hpp"
#include "nlbound/rational.hpp"

namespace nlbound {

/// Boolean function on {0,1}^n as a truth table of length 2^n. Bit i of the
/// index is the output of box i.
using TruthTable = std::vector<std::uint8_t>;

/// How one party drives the n boxes for one value of its protocol input.
struct InputPlan {
  /// order[t] is the box visited at step t.
  std::vector<int> order;
  /// inputs[t] has length 2^t: the input fed at step t as a function of the
  /// outputs seen at steps 0..t-1 (bit s of the index = output at step s).
  std::vector<TruthTable> inputs;

  friend bool operator==(const InputPlan&, const InputPlan&) = default;
};

/// Deterministic local wiring, one plan per protocol input bit.
struct SideStrategy {
  std::array<InputPlan, 2> plans;
  friend bool operator==(const SideStrategy&, const SideStrategy&) = default;
};

struct Protocol {
  int n = 1;
  SideStrategy alice;
  SideStrategy bob;
  std::array<TruthTable, 2> f;  // Alice's decision per x
  std::array<TruthTable, 2> g;  // Bob's decision per y

  friend bool operator==(const Protocol&, const Protocol&) = default;
};

/// Throws std::invalid_argument when sizes or orders are inconsistent.
void check_protocol(const Protocol& protocol);

/// Box inputs chosen by `plan` when the party's boxes return `outputs`.
std::vector<int> plan_inputs(const InputPlan& plan, std::uint32_t outputs);

/// Joint distribution W(a,b) of the two output strings, 2^n x 2^n, row-major in a.
struct WiringGrid {
  int n = 0;
  std::vector<Rational> w;
  const Rational& operator()(std::uint32_t a, std::uint32_t b) const { return w[(std::size_t{a} << n) + b]; }
};

WiringGrid wiring_distribution(const BinarySystem& p, const InputPlan& alice, const InputPlan& bob, int n);
WiringGrid wiring_distribution(const BinarySystem& p, const Protocol& protocol, int x, int y);

/// (1-2f)^T W (1-2g). Throws std::invalid_argument on a size mismatch.
Rational inner_product(const TruthTable& f, const TruthTable& g, const WiringGrid& w);
/// f^T W g.
Rational preimage_mass(const TruthTable& f, const TruthTable& g, const WiringGrid& w);
/// 1 - k/2^(n-1) - l/2^(n-1) + 4 f^T W g with k, l the preimage sizes; equals
/// inner_product whenever both parties' output strings are uniformly distributed.
Rational expanded_inner_product(const TruthTable& f, const TruthTable& g, const WiringGrid& w);

int preimage_size(const TruthTable& f);
TruthTable complement(const TruthTable& f);

/// max over anchors |<f_x,g_y> + <f_x',g_y> + <f_x,g_y'> - <f_x',g_y'>|.
Rational nl_protocol(const BinarySystem& p, const Protocol& protocol);

/// Imitates one copy: feed the inputs to box 0, output its result.
Protocol trivial_protocol(int n);

/// Every deterministic plan on n boxes: orders x adaptive input tables.
std::vector<InputPlan> enumerate_plans(int n);

Protocol random_protocol(int n, std::mt19937_64& rng);

struct SearchOptions {
  int jobs = 1;
  /// Pairs whose floating-point estimate trails the incumbent by more than
  /// this are skipped; everything else is evaluated exactly.
  double margin = 1e-6;
  std::function<void(std::uint64_t done, std::uint64_t total, const Rational& incumbent)> on_progress;
};

struct SearchReport {
  int n = 0;
  Rational value;  // D(n, P)
  Protocol witness;
  Rational nl;  // NL(P)
  bool distills = false;
  std::uint64_t protocols = 0;           // size of the searched space after the complement reduction
  std::uint64_t pairs_total = 0;         // Alice (x=0, x=1) behaviour pairs
  std::uint64_t pairs_exact = 0;         // of which survived the pre-filter
  double seconds = 0;
};

/// Exhaustive D(n, P) for n in {1, 2}. Throws std::invalid_argument otherwise.
SearchReport brute_force_D(const BinarySystem& p, int n, const SearchOptions& options = {});

struct SandwichViolation {
  InputPlan alice;
  InputPlan bob;
  TruthTable f;
  TruthTable g;
  Rational value;
  Rational lower;
  Rational upper;
};

struct SandwichReport {
  int n = 0;
  bool exhaustive = false;
  std::uint64_t seed = 0;
  std::uint64_t checks = 0;
  std::vector<SandwichViolation> violations;
};

/// delta^-_n(k,l) <= f^T W g <= delta^+_n(k,l) over wirings W on n copies of an
/// isotropic system. samples == 0 enumerates every plan pair and every (f, g);
/// otherwise `samples` random protocols are drawn and all four (x, y) checked.
SandwichReport sandwich_check(const BinarySystem& p_iso, int n, std::uint64_t samples, std::uint64_t seed = 0);

}  // namespace nlbound
