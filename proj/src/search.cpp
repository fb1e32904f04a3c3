#include <atomic>
#include <chrono>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "nlbound/protocol.hpp"

namespace nlbound {

namespace {

// A party's behaviour for one protocol input: a plan plus a decision table.
struct Behaviour {
  int plan = 0;
  int table = 0;
};

struct Best {
  mpz_class value;
  std::array<int, 4> tuple{};  // a0, a1, b0, b1
  bool valid = false;

  void offer(const mpz_class& v, const std::array<int, 4>& t) {
    const int c = valid ? cmp(v, value) : 1;
    if (c > 0 || (c == 0 && t < tuple)) {
      value = v;
      tuple = t;
      valid = true;
    }
  }
};

}  // namespace

SearchReport brute_force_D(const BinarySystem& p, int n, const SearchOptions& options) {
  if (n < 1 || n > 2) throw std::invalid_argument("brute_force_D: only n = 1 or 2 is searchable");
  if (!validate(p).ok()) throw std::invalid_argument("brute_force_D: system is not nonsignaling");
  const auto start = std::chrono::steady_clock::now();

  // Work over integers: scale every entry by the lcm of the denominators.
  mpz_class den = 1;
  for (const auto& e : p.table()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), e.denominator().get_mpz_t());
  std::array<mpz_class, 16> scaled;
  for (int i = 0; i < 16; ++i) scaled[i] = p.table()[i].numerator() * (den / p.table()[i].denominator());
  mpz_class scale = 1;
  for (int i = 0; i < n; ++i) scale *= den;
  const double scale_d = scale.get_d();

  const auto plans = enumerate_plans(n);
  const int size = 1 << n;
  const int tables = 1 << size;
  std::vector<Behaviour> behaviours;
  for (int pl = 0; pl < static_cast<int>(plans.size()); ++pl)
    for (int t = 0; t < tables; ++t) behaviours.push_back({pl, t});
  const int count = static_cast<int>(behaviours.size());

  // corr[a * count + b]: scaled <f, g> for Alice behaviour a against Bob behaviour b.
  std::vector<mpz_class> corr(static_cast<std::size_t>(count) * count);
  std::vector<double> corr_d(corr.size());
  {
    std::vector<std::vector<int>> inputs(plans.size() * size);
    for (std::size_t pl = 0; pl < plans.size(); ++pl)
      for (int s = 0; s < size; ++s) inputs[pl * size + s] = plan_inputs(plans[pl], static_cast<std::uint32_t>(s));
    std::vector<mpz_class> w(static_cast<std::size_t>(size) * size);
    std::vector<mpz_class> row(size);
    for (std::size_t pa = 0; pa < plans.size(); ++pa)
      for (std::size_t pb = 0; pb < plans.size(); ++pb) {
        for (int a = 0; a < size; ++a)
          for (int b = 0; b < size; ++b) {
            mpz_class prob = 1;
            const auto& u = inputs[pa * size + a];
            const auto& v = inputs[pb * size + b];
            for (int i = 0; i < n; ++i) prob *= scaled[box_index(u[i], v[i], (a >> i) & 1, (b >> i) & 1)];
            w[a * size + b] = prob;
          }
        for (int f = 0; f < tables; ++f) {
          for (int b = 0; b < size; ++b) {
            row[b] = 0;
            for (int a = 0; a < size; ++a) {
              if ((f >> a) & 1)
                row[b] -= w[a * size + b];
              else
                row[b] += w[a * size + b];
            }
          }
          const std::size_t ai = pa * tables + f;
          for (int g = 0; g < tables; ++g) {
            mpz_class c = 0;
            for (int b = 0; b < size; ++b) {
              if ((g >> b) & 1)
                c -= row[b];
              else
                c += row[b];
            }
            const std::size_t idx = ai * count + pb * tables + g;
            corr_d[idx] = c.get_d() / scale_d;
            corr[idx] = std::move(c);
          }
        }
      }
  }

  // Anchor-00 value for behaviours (a0, a1, b0, b1):
  //   V = [C(a0,b0) + C(a1,b0)] + [C(a0,b1) - C(a1,b1)],
  // so for fixed (a0, a1) the best b0 and b1 are found independently. The
  // other anchors only permute roles within the same behaviour set, and
  // complementing f_0 and f_1 together negates V, so a0 is restricted to
  // decision tables whose top entry is 0 and |V| is maximized.
  const int top_bit = size - 1;
  std::vector<int> first;
  for (int a = 0; a < count; ++a)
    if (((behaviours[a].table >> top_bit) & 1) == 0) first.push_back(a);

  const std::uint64_t pairs_total = static_cast<std::uint64_t>(first.size()) * count;
  std::atomic<double> incumbent_d{-1.0};
  std::atomic<std::uint64_t> pairs_exact{0}, done{0};
  std::mutex progress_mutex;

  const auto work = [&](int worker, int workers) {
    Best best;
    mpz_class s_hi, s_lo, t_hi, t_lo, sum, diff;
    for (std::size_t fi = worker; fi < first.size(); fi += workers) {
      const int a0 = first[fi];
      const double* r0 = &corr_d[static_cast<std::size_t>(a0) * count];
      for (int a1 = 0; a1 < count; ++a1) {
        const double* r1 = &corr_d[static_cast<std::size_t>(a1) * count];
        double sh = -4, sl = 4, th = -4, tl = 4;
        for (int b = 0; b < count; ++b) {
          const double s = r0[b] + r1[b];
          const double t = r0[b] - r1[b];
          sh = std::max(sh, s);
          sl = std::min(sl, s);
          th = std::max(th, t);
          tl = std::min(tl, t);
        }
        const double estimate = std::max(sh + th, -(sl + tl));
        if (estimate < incumbent_d.load(std::memory_order_relaxed) - options.margin) continue;
        pairs_exact.fetch_add(1, std::memory_order_relaxed);

        const mpz_class* e0 = &corr[static_cast<std::size_t>(a0) * count];
        const mpz_class* e1 = &corr[static_cast<std::size_t>(a1) * count];
        int b_sh = 0, b_sl = 0, b_th = 0, b_tl = 0;
        for (int b = 0; b < count; ++b) {
          sum = e0[b] + e1[b];
          diff = e0[b] - e1[b];
          if (b == 0 || sum > s_hi) { s_hi = sum; b_sh = b; }
          if (b == 0 || sum < s_lo) { s_lo = sum; b_sl = b; }
          if (b == 0 || diff > t_hi) { t_hi = diff; b_th = b; }
          if (b == 0 || diff < t_lo) { t_lo = diff; b_tl = b; }
        }
        mpz_class pos = s_hi + t_hi;
        mpz_class neg = -(s_lo + t_lo);
        if (pos >= neg)
          best.offer(pos, {a0, a1, b_sh, b_th});
        else
          best.offer(neg, {a0, a1, b_sl, b_tl});

        const double v = best.value.get_d() / scale_d;
        double cur = incumbent_d.load(std::memory_order_relaxed);
        while (v > cur && !incumbent_d.compare_exchange_weak(cur, v, std::memory_order_relaxed)) {
        }
      }
      const auto finished = done.fetch_add(count, std::memory_order_relaxed) + count;
      if (options.on_progress && worker == 0) {
        std::lock_guard lock(progress_mutex);
        options.on_progress(finished, pairs_total, Rational(best.value, scale));
      }
    }
    return best;
  };

  const int workers = std::max(1, std::min<int>(options.jobs, static_cast<int>(first.size())));
  Best best;
  if (workers == 1) {
    best = work(0, 1);
  } else {
    std::vector<Best> partial(workers);
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back([&, w] { partial[w] = work(w, workers); });
    for (auto& t : threads) t.join();
    for (const auto& b : partial)
      if (b.valid) best.offer(b.value, b.tuple);
  }

  SearchReport report;
  report.n = n;
  report.value = Rational(best.value, scale);
  report.protocols = static_cast<std::uint64_t>(first.size()) * count * count * count;
  report.pairs_total = pairs_total;
  report.pairs_exact = pairs_exact.load();

  const auto decode = [&](int index, InputPlan& plan, TruthTable& table) {
    const Behaviour& bh = behaviours[index];
    plan = plans[bh.plan];
    table.assign(size, 0);
    for (int s = 0; s < size; ++s) table[s] = (bh.table >> s) & 1;
  };
  Protocol& w = report.witness;
  w.n = n;
  decode(best.tuple[0], w.alice.plans[0], w.f[0]);
  decode(best.tuple[1], w.alice.plans[1], w.f[1]);
  decode(best.tuple[2], w.bob.plans[0], w.g[0]);
  decode(best.tuple[3], w.bob.plans[1], w.g[1]);

  // Independent exact re-evaluation of the witness.
  if (nl_protocol(p, w) != report.value)
    throw std::logic_error("brute_force_D: witness does not reproduce the maximum " + report.value.str());

  report.nl = nl_value(p).value;
  report.distills = report.value > report.nl;
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace nlbound
