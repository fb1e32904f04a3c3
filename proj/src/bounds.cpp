#include "nlbound/bounds.hpp"

#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace nlbound {

namespace {

void check_level(const DeltaTables& tables, int n) {
  if (n < 1) throw std::invalid_argument("bound: n must be at least 1");
  if (n > tables.copies())
    throw std::out_of_range("bound: tables only reach level " + std::to_string(tables.copies()));
}

// Scaled scan: with D the level-n common denominator, unit = D/2^n and
// N+/N- the scaled table numerators, a profile's class bound times D is
//   2D + 4·[A(k0) + B(k1) - l0·unit]
// where A(k0) = N+(k0,l0) + N+(k0,l1) - k0·unit and B(k1) = N+(k1,l0) - N-(k1,l1).
struct Candidate {
  mpz_class score;
  ClassProfile profile;
  bool valid = false;

  void offer(const mpz_class& s, const ClassProfile& p) {
    const int c = valid ? cmp(s, score) : 1;
    if (c > 0 || (c == 0 && p < profile)) {
      score = s;
      profile = p;
      valid = true;
    }
  }
};

class ProfileScanner {
 public:
  ProfileScanner(const DeltaTables& tables, int n)
      : tables_(tables), n_(n), top_(1 << n), unit_(tables.common_denominator(n) / (1 << n)) {}

  int top() const { return top_; }
  const mpz_class& unit() const { return unit_; }

  // A(k0) for fixed (l0, l1).
  void first_part(int k0, int l0, int l1, mpz_class& out) const {
    mpz_add(out.get_mpz_t(), up(l0, k0), up(l1, k0));
    mpz_submul_ui(out.get_mpz_t(), unit_.get_mpz_t(), static_cast<unsigned long>(k0));
  }
  // B(k1) for fixed (l0, l1).
  void second_part(int k1, int l0, int l1, mpz_class& out) const {
    mpz_sub(out.get_mpz_t(), up(l0, k1), tables_.scaled(Extremum::lower, n_, l1, k1).get_mpz_t());
  }

  Rational to_bound(const mpz_class& score) const {
    const mpz_class& d = tables_.common_denominator(n_);
    return Rational(mpz_class(2 * d + 4 * score), d);
  }

 private:
  // Tables are symmetric, so row l holds delta(., l) contiguously.
  mpz_srcptr up(int l, int k) const { return tables_.scaled(Extremum::upper, n_, l, k).get_mpz_t(); }

  const DeltaTables& tables_;
  int n_;
  int top_;
  mpz_class unit_;
};

}  // namespace

Rational class_bound(const DeltaTables& tables, int n, const ClassProfile& pr) {
  check_level(tables, n);
  const int top = 1 << n;
  for (int v : {pr.k0, pr.k1, pr.l0, pr.l1})
    if (v < 0 || v > top) throw std::out_of_range("class_bound: profile entry outside [0, 2^n]");
  const auto up = [&](int k, int l) { return tables.delta(Extremum::upper, n, k, l); };
  return Rational(2) - Rational(4 * (pr.k0 + pr.l0), top) +
         Rational(4) * (up(pr.k0, pr.l0) + up(pr.k0, pr.l1) + up(pr.k1, pr.l0) -
                        tables.delta(Extremum::lower, n, pr.k1, pr.l1));
}

std::pair<Rational, ClassProfile> max_class_bound(const DeltaTables& tables, int n, const ScanOptions& options) {
  check_level(tables, n);
  const ProfileScanner scan(tables, n);
  const int top = scan.top();
  const int k0_end = options.complement_reduction ? top / 2 : top;

  const auto work = [&](int worker, int workers) {
    Candidate best;
    mpz_class a, best_a, b, best_b, score;
    for (int l0 = worker; l0 <= top; l0 += workers)
      for (int l1 = 0; l1 <= top; ++l1) {
        int arg_a = 0, arg_b = 0;
        for (int k0 = 0; k0 <= k0_end; ++k0) {
          scan.first_part(k0, l0, l1, a);
          if (k0 == 0 || a > best_a) {
            mpz_swap(best_a.get_mpz_t(), a.get_mpz_t());
            arg_a = k0;
          }
        }
        for (int k1 = 0; k1 <= top; ++k1) {
          scan.second_part(k1, l0, l1, b);
          if (k1 == 0 || b > best_b) {
            mpz_swap(best_b.get_mpz_t(), b.get_mpz_t());
            arg_b = k1;
          }
        }
        score = best_a + best_b;
        mpz_submul_ui(score.get_mpz_t(), scan.unit().get_mpz_t(), static_cast<unsigned long>(l0));
        best.offer(score, {arg_a, arg_b, l0, l1});
      }
    return best;
  };

  const int workers = std::max(1, std::min(options.jobs, top + 1));
  Candidate best;
  if (workers == 1) {
    best = work(0, 1);
  } else {
    std::vector<Candidate> partial(workers);
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back([&, w] { partial[w] = work(w, workers); });
    for (auto& t : threads) t.join();
    for (const auto& c : partial)
      if (c.valid) best.offer(c.score, c.profile);
  }
  return {scan.to_bound(best.score), best.profile};
}

std::pair<Rational, ClassProfile> max_class_bound_exhaustive(const DeltaTables& tables, int n) {
  check_level(tables, n);
  const ProfileScanner scan(tables, n);
  const int top = scan.top();
  Candidate best;
  mpz_class a, b, score;
  for (int k0 = 0; k0 <= top; ++k0)
    for (int k1 = 0; k1 <= top; ++k1)
      for (int l0 = 0; l0 <= top; ++l0)
        for (int l1 = 0; l1 <= top; ++l1) {
          scan.first_part(k0, l0, l1, a);
          scan.second_part(k1, l0, l1, b);
          score = a + b;
          mpz_submul_ui(score.get_mpz_t(), scan.unit().get_mpz_t(), static_cast<unsigned long>(l0));
          best.offer(score, {k0, k1, l0, l1});
        }
  return {scan.to_bound(best.score), best.profile};
}

Rational isotropic_parameter(const BinarySystem& p_iso) {
  if (!is_isotropic(p_iso)) throw std::invalid_argument("system is not isotropic");
  return p_iso(0, 0, 0, 0);
}

TableSource default_table_source(const BuildOptions& options) {
  return [options](const Rational& p, int n) { return build_tables(p, n, options); };
}

BoundReport iso_bound(const BinarySystem& p_iso, int n, const TableSource& tables, const ScanOptions& options) {
  const auto iso = is_isotropic(p_iso);
  if (!iso) throw std::invalid_argument("iso_bound: system is not isotropic");
  if (n < 1) throw std::invalid_argument("iso_bound: n must be at least 1");
  const DeltaTables t = tables(p_iso(0, 0, 0, 0), n);
  auto [value, witness] = max_class_bound(t, n, options);
  BoundReport r;
  r.clamped_bound = min(value, Rational(4));
  r.raw_bound = std::move(value);
  r.witness = witness;
  r.n = n;
  r.system = "isotropic(epsilon=" + iso->epsilon.str() + ", facet=" + iso->facet.str() + ")";
  r.nl = nl_value(p_iso).value;
  return r;
}

std::string ClassGrid::to_csv(bool approximate) const {
  std::ostringstream os;
  os << "s_k,s_l,bound_num,bound_den";
  if (approximate) os << ",bound_approx";
  os << '\n';
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (int sk = 0; sk < side(); ++sk)
    for (int sl = 0; sl < side(); ++sl) {
      const Rational& v = at(sk, sl);
      os << sk << ',' << sl << ',' << v.numerator().get_str() << ',' << v.denominator().get_str();
      if (approximate) os << ',' << v.to_double();
      os << '\n';
    }
  return os.str();
}

ClassGrid class_grid(const DeltaTables& tables, int n) {
  check_level(tables, n);
  const ProfileScanner scan(tables, n);
  const int top = scan.top();
  const int side = 2 * top + 1;
  std::vector<mpz_class> best(static_cast<std::size_t>(side) * side);
  std::vector<char> seen(best.size(), 0);
  std::vector<mpz_class> first(top + 1), second(top + 1);
  mpz_class score;
  for (int l0 = 0; l0 <= top; ++l0)
    for (int l1 = 0; l1 <= top; ++l1) {
      for (int k = 0; k <= top; ++k) {
        scan.first_part(k, l0, l1, first[k]);
        mpz_submul_ui(first[k].get_mpz_t(), scan.unit().get_mpz_t(), static_cast<unsigned long>(l0));
        scan.second_part(k, l0, l1, second[k]);
      }
      for (int k0 = 0; k0 <= top; ++k0)
        for (int k1 = 0; k1 <= top; ++k1) {
          mpz_add(score.get_mpz_t(), first[k0].get_mpz_t(), second[k1].get_mpz_t());
          const std::size_t cell = static_cast<std::size_t>(k0 + k1) * side + (l0 + l1);
          if (!seen[cell] || score > best[cell]) {
            best[cell] = score;
            seen[cell] = 1;
          }
        }
    }
  std::vector<Rational> cells;
  cells.reserve(best.size());
  for (const auto& s : best) cells.push_back(scan.to_bound(s));
  return ClassGrid(n, std::move(cells));
}

ClassGrid class_grid(const BinarySystem& p_iso, int n, const TableSource& tables) {
  if (!is_isotropic(p_iso)) throw std::invalid_argument("class_grid: system is not isotropic");
  if (n < 1) throw std::invalid_argument("class_grid: n must be at least 1");
  return class_grid(tables(p_iso(0, 0, 0, 0), n), n);
}

BoundReport general_bound(const BinarySystem& p, int n, const TableSource& tables, const ScanOptions& options) {
  if (!validate(p).ok()) throw std::invalid_argument("general_bound: system is not nonsignaling");
  if (n < 1) throw std::invalid_argument("general_bound: n must be at least 1");
  Decomposition d = minimal_isotropic(p);
  BoundReport r;
  if (d.epsilon.is_zero()) {
    r.raw_bound = 2;
    r.clamped_bound = 2;
    r.witness = {};
    r.n = n;
    r.system = "local";
  } else {
    r = iso_bound(d.p_iso, n, tables, options);
    r.system = "envelope " + r.system;
  }
  r.nl = nl_value(p).value;
  r.decomposition = std::move(d);
  return r;
}

}  // namespace nlbound
