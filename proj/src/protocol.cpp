#include "nlbound/protocol.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace nlbound {

namespace {

void check_plan(const InputPlan& plan, int n, const char* who) {
  if (static_cast<int>(plan.order.size()) != n || static_cast<int>(plan.inputs.size()) != n)
    throw std::invalid_argument(std::string(who) + ": plan must cover all " + std::to_string(n) + " boxes");
  std::vector<int> sorted = plan.order;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < n; ++i)
    if (sorted[i] != i) throw std::invalid_argument(std::string(who) + ": visiting order is not a permutation");
  for (int t = 0; t < n; ++t) {
    if (plan.inputs[t].size() != (std::size_t{1} << t))
      throw std::invalid_argument(std::string(who) + ": input table at step " + std::to_string(t) +
                                  " must have length 2^" + std::to_string(t));
    for (auto bit : plan.inputs[t])
      if (bit > 1) throw std::invalid_argument(std::string(who) + ": input tables must be 0/1");
  }
}

void check_table(const TruthTable& t, int n, const char* who) {
  if (t.size() != (std::size_t{1} << n))
    throw std::invalid_argument(std::string(who) + ": truth table must have length 2^" + std::to_string(n));
  for (auto bit : t)
    if (bit > 1) throw std::invalid_argument(std::string(who) + ": truth tables must be 0/1");
}

}  // namespace

void check_protocol(const Protocol& protocol) {
  const int n = protocol.n;
  if (n < 1 || n > 16) throw std::invalid_argument("protocol: n must be in [1, 16]");
  for (int x = 0; x < 2; ++x) {
    check_plan(protocol.alice.plans[x], n, "alice");
    check_plan(protocol.bob.plans[x], n, "bob");
    check_table(protocol.f[x], n, "f");
    check_table(protocol.g[x], n, "g");
  }
}

std::vector<int> plan_inputs(const InputPlan& plan, std::uint32_t outputs) {
  const int n = static_cast<int>(plan.order.size());
  std::vector<int> in(n, 0);
  std::uint32_t seen = 0;
  for (int t = 0; t < n; ++t) {
    const int box = plan.order[t];
    in[box] = plan.inputs[t][seen];
    seen |= ((outputs >> box) & 1u) << t;
  }
  return in;
}

WiringGrid wiring_distribution(const BinarySystem& p, const InputPlan& alice, const InputPlan& bob, int n) {
  check_plan(alice, n, "alice");
  check_plan(bob, n, "bob");
  const std::uint32_t size = 1u << n;
  std::vector<std::vector<int>> u(size), v(size);
  for (std::uint32_t s = 0; s < size; ++s) {
    u[s] = plan_inputs(alice, s);
    v[s] = plan_inputs(bob, s);
  }
  WiringGrid grid;
  grid.n = n;
  grid.w.resize(std::size_t{size} * size);
  for (std::uint32_t a = 0; a < size; ++a)
    for (std::uint32_t b = 0; b < size; ++b) {
      Rational prob(1);
      for (int i = 0; i < n && !prob.is_zero(); ++i)
        prob *= p(u[a][i], v[b][i], (a >> i) & 1, (b >> i) & 1);
      grid.w[(std::size_t{a} << n) + b] = std::move(prob);
    }
  return grid;
}

WiringGrid wiring_distribution(const BinarySystem& p, const Protocol& protocol, int x, int y) {
  return wiring_distribution(p, protocol.alice.plans[x], protocol.bob.plans[y], protocol.n);
}

Rational inner_product(const TruthTable& f, const TruthTable& g, const WiringGrid& w) {
  const std::size_t size = std::size_t{1} << w.n;
  if (f.size() != size || g.size() != size) throw std::invalid_argument("inner_product: dimension mismatch");
  Rational sum;
  for (std::size_t a = 0; a < size; ++a)
    for (std::size_t b = 0; b < size; ++b) {
      const Rational& entry = w.w[(a << w.n) + b];
      if (entry.is_zero()) continue;
      if (f[a] == g[b])
        sum += entry;
      else
        sum -= entry;
    }
  return sum;
}

Rational preimage_mass(const TruthTable& f, const TruthTable& g, const WiringGrid& w) {
  const std::size_t size = std::size_t{1} << w.n;
  if (f.size() != size || g.size() != size) throw std::invalid_argument("preimage_mass: dimension mismatch");
  Rational sum;
  for (std::size_t a = 0; a < size; ++a) {
    if (!f[a]) continue;
    for (std::size_t b = 0; b < size; ++b)
      if (g[b]) sum += w.w[(a << w.n) + b];
  }
  return sum;
}

Rational expanded_inner_product(const TruthTable& f, const TruthTable& g, const WiringGrid& w) {
  const long size = long{1} << w.n;
  return Rational(1) - Rational(2L * preimage_size(f), size) - Rational(2L * preimage_size(g), size) +
         Rational(4) * preimage_mass(f, g, w);
}

int preimage_size(const TruthTable& f) { return static_cast<int>(std::count(f.begin(), f.end(), 1)); }

TruthTable complement(const TruthTable& f) {
  TruthTable out(f.size());
  std::transform(f.begin(), f.end(), out.begin(), [](std::uint8_t b) { return static_cast<std::uint8_t>(b ^ 1); });
  return out;
}

Rational nl_protocol(const BinarySystem& p, const Protocol& protocol) {
  check_protocol(protocol);
  std::array<std::array<Rational, 2>, 2> corr;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      corr[x][y] = inner_product(protocol.f[x], protocol.g[y], wiring_distribution(p, protocol, x, y));
  Rational best;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      const Rational v = abs(corr[x][y] + corr[x ^ 1][y] + corr[x][y ^ 1] - corr[x ^ 1][y ^ 1]);
      if (v > best) best = v;
    }
  return best;
}

Protocol trivial_protocol(int n) {
  if (n < 1) throw std::invalid_argument("trivial_protocol: n must be at least 1");
  Protocol pr;
  pr.n = n;
  for (int x = 0; x < 2; ++x) {
    for (auto* side : {&pr.alice, &pr.bob}) {
      InputPlan& plan = side->plans[x];
      plan.order.resize(n);
      std::iota(plan.order.begin(), plan.order.end(), 0);
      for (int t = 0; t < n; ++t) plan.inputs.emplace_back(std::size_t{1} << t, static_cast<std::uint8_t>(x));
    }
    TruthTable out(std::size_t{1} << n);
    for (std::size_t s = 0; s < out.size(); ++s) out[s] = s & 1;
    pr.f[x] = out;
    pr.g[x] = out;
  }
  return pr;
}

std::vector<InputPlan> enumerate_plans(int n) {
  if (n < 1 || n > 3) throw std::invalid_argument("enumerate_plans: n must be in [1, 3]");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<InputPlan> plans;
  do {
    // Mixed-radix counter over the step tables (step t has 2^(2^t) tables).
    std::vector<std::uint64_t> choice(n, 0);
    for (;;) {
      InputPlan plan;
      plan.order = order;
      for (int t = 0; t < n; ++t) {
        TruthTable table(std::size_t{1} << t);
        for (std::size_t s = 0; s < table.size(); ++s) table[s] = (choice[t] >> s) & 1;
        plan.inputs.push_back(std::move(table));
      }
      plans.push_back(std::move(plan));
      int t = 0;
      for (; t < n; ++t) {
        if (++choice[t] < (std::uint64_t{1} << (std::uint64_t{1} << t))) break;
        choice[t] = 0;
      }
      if (t == n) break;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return plans;
}

Protocol random_protocol(int n, std::mt19937_64& rng) {
  if (n < 1 || n > 16) throw std::invalid_argument("random_protocol: n must be in [1, 16]");
  std::bernoulli_distribution coin(0.5);
  auto random_table = [&](std::size_t size) {
    TruthTable t(size);
    for (auto& b : t) b = coin(rng) ? 1 : 0;
    return t;
  };
  auto random_plan = [&] {
    InputPlan plan;
    plan.order.resize(n);
    std::iota(plan.order.begin(), plan.order.end(), 0);
    std::shuffle(plan.order.begin(), plan.order.end(), rng);
    for (int t = 0; t < n; ++t) plan.inputs.push_back(random_table(std::size_t{1} << t));
    return plan;
  };
  Protocol pr;
  pr.n = n;
  for (int x = 0; x < 2; ++x) {
    pr.alice.plans[x] = random_plan();
    pr.bob.plans[x] = random_plan();
    pr.f[x] = random_table(std::size_t{1} << n);
    pr.g[x] = random_table(std::size_t{1} << n);
  }
  return pr;
}

SandwichReport sandwich_check(const BinarySystem& p_iso, int n, std::uint64_t samples, std::uint64_t seed) {
  if (!is_isotropic(p_iso)) throw std::invalid_argument("sandwich_check: system is not isotropic");
  if (n < 1 || n > 2) throw std::invalid_argument("sandwich_check: n must be 1 or 2");
  const DeltaTables tables = build_tables(p_iso(0, 0, 0, 0), n);

  SandwichReport report;
  report.n = n;
  report.seed = seed;
  report.exhaustive = samples == 0;

  auto check = [&](const InputPlan& alice, const InputPlan& bob, const WiringGrid& w, const TruthTable& f,
                   const TruthTable& g) {
    ++report.checks;
    const int k = preimage_size(f), l = preimage_size(g);
    Rational value = preimage_mass(f, g, w);
    Rational lo = tables.delta(Extremum::lower, n, k, l);
    Rational hi = tables.delta(Extremum::upper, n, k, l);
    if (value < lo || value > hi)
      report.violations.push_back({alice, bob, f, g, std::move(value), std::move(lo), std::move(hi)});
  };

  if (report.exhaustive) {
    const auto plans = enumerate_plans(n);
    const std::size_t size = std::size_t{1} << n;
    std::vector<TruthTable> tables_all;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << size); ++bits) {
      TruthTable t(size);
      for (std::size_t s = 0; s < size; ++s) t[s] = (bits >> s) & 1;
      tables_all.push_back(std::move(t));
    }
    for (const auto& alice : plans)
      for (const auto& bob : plans) {
        const WiringGrid w = wiring_distribution(p_iso, alice, bob, n);
        for (const auto& f : tables_all)
          for (const auto& g : tables_all) check(alice, bob, w, f, g);
      }
  } else {
    std::mt19937_64 rng(seed);
    for (std::uint64_t s = 0; s < samples; ++s) {
      const Protocol pr = random_protocol(n, rng);
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          check(pr.alice.plans[x], pr.bob.plans[y], wiring_distribution(p_iso, pr, x, y), pr.f[x], pr.g[y]);
    }
  }
  return report;
}

}  // namespace nlbound
