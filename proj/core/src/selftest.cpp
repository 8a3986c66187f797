#include "qfree/selftest.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "qfree/scenario.hpp"

namespace qfree {

GaussianRational random_small(std::mt19937& rng, bool complex) {
  std::uniform_int_distribution<int> num(-3, 3), den(1, 3);
  GaussianRational z(make_rational(num(rng), den(rng)));
  if (complex) z += GaussianRational(BigRational(0), make_rational(num(rng), den(rng)));
  return z;
}

BMatrix<DenseAlgebra> random_dense_bmatrix(const DenseAlgebra& alg, int N, std::mt19937& rng, bool complex) {
  BMatrix<DenseAlgebra> m(N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      auto e = alg.zero();
      for (int r = 0; r < alg.dim(); ++r)
        for (int c = 0; c < alg.dim(); ++c) e(r, c) = random_small(rng, complex);
      m(i, j) = e;
    }
  return m;
}

SignPattern random_balanced(std::mt19937& rng, int m, bool alternating) {
  if (alternating) return SignPattern::alternating(m);
  std::vector<bool> s(2 * m, false);
  std::fill(s.begin() + m, s.end(), true);
  std::shuffle(s.begin(), s.end(), rng);
  return SignPattern(s);
}

MixedWord<DenseAlgebra> random_dense_word(const DenseAlgebra& alg, std::mt19937& rng, Flavor flavor, int m, int N,
                                          int labels, bool alternating) {
  MixedWord<DenseAlgebra> w;
  w.flavor = flavor;
  w.eps = random_balanced(rng, m, alternating);
  std::uniform_int_distribution<int> lab(1, std::max(1, labels));
  for (int k = 0; k < 2 * m; ++k) {
    w.labels.push_back(lab(rng));
    w.factors.push_back(random_dense_bmatrix(alg, N, rng, k % 2 == 1));
  }
  return w;
}

namespace {

// counts checks and keeps the first failure
struct Tally {
  long checks = 0;
  long failures = 0;
  std::string first;

  void expect(bool ok, const std::function<std::string()>& what) {
    ++checks;
    if (ok) return;
    if (failures++ == 0) first = what();
  }
  bool ok() const { return failures == 0 && checks > 0; }
  std::string summary(const std::string& extra = {}) const {
    std::ostringstream os;
    if (failures == 0) {
      os << checks << " checks";
    } else {
      os << failures << "/" << checks << " failed; first: " << first;
    }
    if (!extra.empty()) os << "; " << extra;
    return os.str();
  }
};

std::vector<SignPattern> all_patterns(int len) {
  std::vector<SignPattern> out;
  for (int code = 0; code < (1 << len); ++code) {
    std::vector<bool> s(len);
    for (int b = 0; b < len; ++b) s[b] = (code >> b) & 1;
    out.emplace_back(s);
  }
  return out;
}

std::vector<std::vector<int>> tuples(int len, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> t(len, 1);
  while (true) {
    out.push_back(t);
    int p = len - 1;
    while (p >= 0 && t[p] == k) t[p--] = 1;
    if (p < 0) break;
    ++t[p];
  }
  return out;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

using Outcome = std::pair<bool, std::string>;

// ---- 1 ----
Outcome combinatorics() {
  Tally t;
  for (int m = 1; m <= 6; ++m) {
    const auto& nc = cached_members(FamilyKind::NC, m);
    std::set<Partition> images;
    for (const auto& p : nc) {
      Partition f = fatten(p);
      t.expect(f.is_pairing() && f.is_noncrossing() && unfatten(f) == p,
               [&] { return "fattening of " + p.to_string(); });
      images.insert(f);
      t.expect(fatten(kreweras(p)) == rotate_left(f), [&] { return "kreweras lemma at " + p.to_string(); });
    }
    t.expect(static_cast<std::int64_t>(images.size()) == catalan(m) &&
                 images.size() == cached_members(FamilyKind::NC2, 2 * m).size(),
             [&] { return "fattening image count at m = " + std::to_string(m); });
    for (const auto& p : nc)
      for (const auto& s : nc) {
        Partition j = join_full(fatten(p), fatten(s));
        int expected = m + 2 * join_full(p, s).num_blocks() - p.num_blocks() - s.num_blocks();
        t.expect(j.num_blocks() == expected, [&] { return "linearization at " + p.to_string() + ", " + s.to_string(); });
        if (s.refines(p)) {
          t.expect(j.num_blocks() == m + p.num_blocks() - s.num_blocks(),
                   [&] { return "linearization (nested) at " + p.to_string() + ", " + s.to_string(); });
          if (m <= 5)
            t.expect(j.is_noncrossing() && kreweras(j) == interleave(s, kreweras(p)),
                     [&] { return "intertwine lemma at " + p.to_string() + ", " + s.to_string(); });
        }
      }
  }
  for (int m = 1; m <= 4; ++m)
    for (const auto& eps : all_patterns(2 * m)) {
      const auto& fam = cached_members(FamilyKind::NC_EPS, m, &eps);
      const auto& nch = cached_members(FamilyKind::NCH_EPS, 2 * m, &eps);
      std::set<Partition> nch_set(nch.begin(), nch.end());
      std::map<Partition, int> hits;
      for (const auto& p : fam)
        for (const auto& s : fam) {
          if (!s.refines(p)) continue;
          Partition j = join_full(fatten(s), fatten(p));
          ++hits[j];
          t.expect(nch_set.count(j) == 1, [&] { return "join outside NC_h for " + eps.to_string(); });
        }
      for (const auto& tau : nch)
        t.expect(hits[tau] == 1, [&] { return "NC_h factorization of " + tau.to_string() + " for " + eps.to_string(); });
      const auto& all = cached_members(FamilyKind::NC, m);
      std::set<Partition> fam_set(fam.begin(), fam.end());
      for (const auto& s : fam)
        for (const auto& p : fam) {
          if (!s.refines(p) || s == p) continue;
          for (const auto& mid : all)
            if (s.refines(mid) && mid.refines(p))
              t.expect(fam_set.count(mid) == 1, [&] { return "interval closure for " + eps.to_string(); });
        }
    }
  for (int m = 1; m <= 5; ++m) {
    const auto& nc = cached_members(FamilyKind::NC, m);
    for (const auto& p : nc)
      for (const auto& s : nc) {
        if (!s.refines(p)) continue;
        std::int64_t sum = 0;
        for (const auto& mid : nc)
          if (s.refines(mid) && mid.refines(p)) sum += mobius(mid, p);
        t.expect(sum == (s == p ? 1 : 0), [&] { return "mobius convolution at " + s.to_string() + " <= " + p.to_string(); });
        std::int64_t prod = 1;
        for (const auto& blk : p.blocks())
          prod *= mobius(restrict(s, blk), Partition::one(static_cast<int>(blk.size())));
        t.expect(prod == mobius(s, p) && mobius(s, p) == mobius_recursive(s, p),
                 [&] { return "mobius multiplicativity at " + s.to_string() + " <= " + p.to_string(); });
      }
  }
  return {t.ok(), t.summary()};
}

// ---- 2 ----
Outcome weingarten_exactness() {
  Tally t;
  int tables = 0;
  for (int len = 2; len <= 8; len += 2)
    for (const auto& eps : all_patterns(len)) {
      if (!eps.balanced()) continue;
      const auto& q = weingarten_table(Flavor::quantum, eps);
      t.expect((q.gram * q.wg).is_identity(), [&] { return "quantum gram*wg at " + eps.to_string(); });
      ++tables;
      if (len <= 6) {
        const auto& c = weingarten_table(Flavor::classical, eps);
        t.expect((c.gram * c.wg).is_identity(), [&] { return "classical gram*wg at " + eps.to_string(); });
        ++tables;
      }
    }
  const auto& t2 = weingarten_table(Flavor::quantum, SignPattern::parse("1*1*"));
  auto diag = RationalFunction::parse("1/(n^2 - 1)"), off = RationalFunction::parse("-1/(n^3 - n)");
  t.expect(t2.family.size() == 2 && t2.wg(0, 0) == diag && t2.wg(1, 1) == diag && t2.wg(0, 1) == off &&
               t2.wg(1, 0) == off,
           [] { return std::string("m = 2 closed form"); });
  return {t.ok(), t.summary(std::to_string(tables) + " tables")};
}

// ---- 3 ----
Outcome west() {
  Tally t;
  for (int m = 1; m <= 3; ++m)
    for (const auto& eps : all_patterns(2 * m)) {
      if (!eps.balanced()) continue;
      const auto& fam = cached_members(FamilyKind::NC_EPS, m, &eps);
      if (fam.empty()) continue;
      const auto& table = weingarten_table(Flavor::quantum, eps);
      for (const auto& p : fam)
        for (const auto& s : fam) {
          auto r = west_expansion(table, p, s);
          t.expect(r.ok(), [&] {
            return eps.to_string() + " p=" + p.to_string() + " s=" + s.to_string() + " c0=" + to_string(r.c0) +
                   " c1=" + to_string(r.c1);
          });
        }
    }
  return {t.ok(), t.summary()};
}

// ---- 4 ----
Outcome adjoint() {
  Tally t;
  for (int len : {2, 4})
    for (const auto& eps : all_patterns(len))
      for (const auto& idx : tuples(2 * len, 2)) {
        EntryWord w;
        for (int k = 0; k < len; ++k) w.push_back({1, eps.star(k + 1), true, idx[2 * k], idx[2 * k + 1]});
        t.expect(word_moment(Flavor::quantum, w) == word_moment(Flavor::quantum, adjoint_reduce(w)),
                 [&] { return "adjoint reduction at " + eps.to_string(); });
      }
  for (const auto& eps : all_patterns(4))
    for (const auto& labels : tuples(4, 2))
      for (const auto& idx : tuples(8, 2)) {
        std::vector<int> li, lj, ri, rj;
        for (int k = 0; k < 4; ++k) {
          int a = idx[2 * k], b = idx[2 * k + 1];
          li.push_back(eps.star(k + 1) ? b : a);
          lj.push_back(eps.star(k + 1) ? a : b);
          ri.push_back(k % 2 ? b : a);
          rj.push_back(k % 2 ? a : b);
        }
        t.expect(free_product_moment(Flavor::quantum, eps, labels, li, lj) ==
                     free_product_moment(Flavor::quantum, eps, labels, ri, rj),
                 [&] { return "free product reduction at " + eps.to_string(); });
      }
  return {t.ok(), t.summary()};
}

// ---- 5 ----
Outcome expfunct(unsigned seed) {
  Tally t;
  std::mt19937 rng(seed);
  DenseAlgebra alg(2);
  using DM = BMatrix<DenseAlgebra>;
  const auto& nc = cached_members(FamilyKind::NC, 3);
  for (int N : {2, 3, 4})
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<DM> a;
      for (int k = 0; k < 6; ++k) a.push_back(random_dense_bmatrix(alg, N, rng, trial % 2 == 1));
      for (const auto& p : nc)
        for (const auto& s : nc) {
          if (!s.refines(p)) continue;
          Partition kp = kreweras(p);
          Partition w = interleave(s, kp);
          BigInteger scale = 1;
          for (int b = 0; b < s.num_blocks() + kp.num_blocks(); ++b) scale *= N;
          auto rhs = functional_e(alg, w, std::span<const DM>(a)) * GaussianRational(BigRational(scale));
          t.expect(alg.equal(constrained_sum(alg, fatten(w), std::span<const DM>(a)), rhs),
                   [&] { return "N=" + std::to_string(N) + " s=" + s.to_string() + " p=" + p.to_string(); });
        }
    }
  long identities = t.checks;
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int m = 1 + trial % 3, N = 2 + trial % 2;
    std::vector<DM> a;
    for (int k = 0; k < m; ++k) a.push_back(random_dense_bmatrix(alg, N, rng, true));
    const auto& all = cached_members(FamilyKind::ALL, 2 * m);
    Partition theta = all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
    auto r = norm_check(alg, theta, std::span<const DM>(a), 1e-6);
    if (r.bound > 0) worst = std::max(worst, r.lhs_norm / r.bound);
    t.expect(r.ok, [&] { return "norm bound at " + theta.to_string() + ": " + fmt(r.lhs_norm) + " > " + fmt(r.bound); });
  }
  return {t.ok(), t.summary(std::to_string(identities) + " identities, 200 norm bounds, worst ratio " + fmt(worst))};
}

// ---- 6 / 9 ----
Outcome convergence(const std::filesystem::path& dir, const std::vector<std::string>& files, Flavor flavor) {
  Tally t;
  std::string info;
  for (const auto& f : files) {
    Scenario s = load_scenario(dir / f);
    t.expect(s.flavor == flavor, [&] { return f + " has the wrong flavor"; });
    t.expect(s.ns.front() == 2 && s.ns.back() == 10, [&] { return f + " does not cover N = 2..10"; });
    auto r = run_convergence(s);
    double first = 0, last = 0;
    for (std::size_t k = 0; k < 3; ++k) first = std::max(first, r.rows[k].scaled);
    for (std::size_t k = r.rows.size() - 3; k < r.rows.size(); ++k) last = std::max(last, r.rows[k].scaled);
    t.expect(r.strict(), [&] {
      return s.name + ": slope " + fmt(r.slope) + ", tail N^2 delta " + fmt(last) + " vs head " + fmt(first);
    });
    if (!info.empty()) info += ", ";
    info += s.name + " slope " + fmt(r.slope) + " N^2d " + fmt(first) + "->" + fmt(last);
  }
  return {t.ok(), t.summary(info)};
}

// ---- 7 ----
Outcome counterexample_trends() {
  Tally t;
  MatrixUnitAlgebra ref(4);
  double prev = 1e9;
  bool monotone = true;
  std::string info;
  for (long N = 4; N <= 12; ++N) {
    MatrixUnitAlgebra alg(static_cast<int>(N));
    auto c = counterexample(N, Flavor::classical);
    auto q = counterexample(N, Flavor::quantum);
    double dc = alg.norm(c - alg.one()), dq = alg.norm(q);
    t.expect(dc <= 2.0 / N, [&] { return "classical N=" + std::to_string(N) + " |v-1| = " + fmt(dc); });
    t.expect(dq <= 2.0 / N, [&] { return "quantum N=" + std::to_string(N) + " |v| = " + fmt(dq); });
    if (dc > prev + 1e-12) monotone = false;
    prev = dc;
    if (N == 12) info = "N=12 classical " + alg.to_string(c) + ", quantum " + alg.to_string(q);
  }
  auto tau = Partition::parse("{{1,4},{2,5},{3,6}}");
  auto eps = SignPattern::parse("1*1*1*");
  t.expect(weingarten_table(Flavor::classical, eps).index_of(tau) >= 0, [] { return std::string("tau absent from classical table"); });
  t.expect(weingarten_table(Flavor::quantum, eps).index_of(tau) < 0, [] { return std::string("tau present in quantum table"); });
  return {t.ok(), t.summary(info + (monotone ? ", classical distance non-increasing" : ", classical distance not monotone"))};
}

// ---- 8 ----
Outcome infinitesimal(const std::filesystem::path& dir) {
  Tally t;
  Scenario s = load_scenario(dir / "quantum_matrix_units.json");
  t.expect(s.flavor == Flavor::quantum && s.max_letters >= 3, [] { return std::string("scenario shape"); });
  auto r = run_infinitesimal(s);
  t.expect(r.samples_reproduced, [] { return std::string("rational functions do not reproduce the samples"); });
  for (const auto& w : r.words)
    t.expect(w.ok, [&] {
      std::string n;
      for (const auto& x : w.word) n += x + " ";
      return "identity fails on " + n;
    });
  t.expect(r.control_failed, [] { return std::string("corrupted E' was not detected"); });
  return {t.ok(), t.summary(std::to_string(r.words.size()) + " words, negative control rejected")};
}

// ---- 10 ----
Outcome oracles(unsigned seed) {
  Tally t;
  std::mt19937 rng(seed);
  DenseAlgebra alg(2);
  for (int trial = 0; trial < 10; ++trial) {
    Flavor flavor = trial % 3 == 2 ? Flavor::classical : Flavor::quantum;
    int m = 1 + trial % 2, N = 2 + (trial / 2) % 2;
    int labels = trial % 4 == 1 ? 2 : 1;
    auto w = random_dense_word(alg, rng, flavor, m, N, labels, trial % 5 != 4);
    t.expect(alg.equal(lhs_exact(alg, w), lhs_bruteforce(alg, w)), [&] {
      return "lhs_exact vs brute force, trial " + std::to_string(trial) + " eps " + w.eps.to_string();
    });
  }
  for (int trial = 0; trial < 10; ++trial) {
    int m = 1 + trial % 3, N = 2 + trial % 2;
    int labels = trial % 4 == 3 ? 2 : 1;
    auto w = random_dense_word(alg, rng, Flavor::quantum, m, N, labels, trial % 2 == 0);
    t.expect(alg.equal(limit_formula(alg, w), limit_oracle(alg, w)), [&] {
      return "limit_formula vs oracle, trial " + std::to_string(trial) + " eps " + w.eps.to_string();
    });
  }
  return {t.ok(), t.summary()};
}

}  // namespace

std::string criterion_title(int id) {
  switch (id) {
    case 1: return "combinatorics suite";
    case 2: return "Weingarten exactness";
    case 3: return "Weingarten asymptotics";
    case 4: return "adjoint entry reduction";
    case 5: return "expectation functional and norm bound";
    case 6: return "quantum convergence O(N^-2)";
    case 7: return "classical counterexample";
    case 8: return "infinitesimal freeness";
    case 9: return "classical convergence, finite-dimensional B";
    case 10: return "oracle equivalence";
    default: return "unknown";
  }
}

CriterionResult run_criterion(int id, const SelftestOptions& opt) {
  CriterionResult r;
  r.id = id;
  r.title = criterion_title(id);
  auto t0 = std::chrono::steady_clock::now();
  try {
    Outcome o;
    switch (id) {
      case 1: o = combinatorics(); break;
      case 2: o = weingarten_exactness(); break;
      case 3: o = west(); break;
      case 4: o = adjoint(); break;
      case 5: o = expfunct(opt.seed); break;
      case 6:
        o = convergence(opt.scenario_dir, {"quantum_dense_d2.json", "quantum_diagonal.json", "quantum_matrix_units.json"},
                        Flavor::quantum);
        break;
      case 7: o = counterexample_trends(); break;
      case 8: o = infinitesimal(opt.scenario_dir); break;
      case 9: o = convergence(opt.scenario_dir, {"classical_dense_d2.json"}, Flavor::classical); break;
      case 10: o = oracles(opt.seed + 10); break;
      default: throw std::invalid_argument("criterion id must be 1.." + std::to_string(kCriterionCount));
    }
    r.pass = o.first;
    r.detail = o.second;
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace qfree
