#include "qfree/freeness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <tuple>

namespace qfree {

namespace {
std::atomic<int> g_threads{1};
}

void set_thread_count(int n) { g_threads = std::max(1, n); }
int thread_count() { return g_threads.load(); }

// ---- Haar coefficients ----

namespace {

std::vector<PairCoefficient> single_label_coefficients(Flavor flavor, const SignPattern& eps, long N) {
  const auto& t = weingarten_table(flavor, eps);
  const auto& w = numeric_weingarten(flavor, eps, N);
  std::vector<PairCoefficient> out;
  for (std::size_t a = 0; a < t.family.size(); ++a)
    for (std::size_t b = 0; b < t.family.size(); ++b)
      if (sgn(w(a, b)) != 0) out.push_back({t.family[a], t.family[b], w(a, b)});
  return out;
}

// W_{eps|V}(N)(pi|V, sigma|V)
BigRational restricted_weight(Flavor flavor, const SignPattern& eps, const Partition& pi, const Partition& sigma,
                              const std::vector<int>& block, long N) {
  SignPattern sub = eps.restrict(block);
  const auto& t = weingarten_table(flavor, sub);
  int a = t.index_of(restrict(pi, block)), b = t.index_of(restrict(sigma, block));
  if (a < 0 || b < 0) return 0;
  return numeric_weingarten(flavor, sub, N)(a, b);
}

std::vector<PairCoefficient> free_product_coefficients(const SignPattern& eps, const Partition& kl, long N) {
  const int len = eps.size();
  const auto& fam = weingarten_table(Flavor::quantum, eps).family;
  const auto& nc = cached_members(FamilyKind::NC, len);
  // nu(omega) = sum over noncrossing tau in [omega, ker l] of mu(omega, tau)
  std::vector<std::pair<const Partition*, std::int64_t>> omegas;
  for (const auto& om : nc) {
    if (!om.refines(kl)) continue;
    bool even = true;
    for (int s : om.block_sizes()) even = even && s % 2 == 0;
    if (!even) continue;
    std::int64_t nu = 0;
    for (const auto& tau : nc)
      if (om.refines(tau) && tau.refines(kl)) nu += mobius(om, tau);
    if (nu != 0) omegas.emplace_back(&om, nu);
  }
  std::vector<PairCoefficient> out;
  for (const auto& p : fam) {
    if (!p.refines(kl)) continue;
    for (const auto& s : fam) {
      if (!s.refines(kl)) continue;
      Partition j = join_full(p, s);
      BigRational c = 0;
      for (const auto& [om, nu] : omegas) {
        if (!j.refines(*om)) continue;
        BigRational prod = nu;
        for (const auto& block : om->blocks()) {
          prod *= restricted_weight(Flavor::quantum, eps, p, s, block, N);
          if (sgn(prod) == 0) break;
        }
        c += prod;
      }
      if (sgn(c) != 0) out.push_back({p, s, c});
    }
  }
  return out;
}

std::vector<PairCoefficient> independent_coefficients(const SignPattern& eps, const Partition& kl, long N) {
  const auto& fam = weingarten_table(Flavor::classical, eps).family;
  auto blocks = kl.blocks();
  std::vector<PairCoefficient> out;
  for (const auto& p : fam) {
    if (!p.refines(kl)) continue;
    for (const auto& s : fam) {
      if (!s.refines(kl)) continue;
      BigRational c = 1;
      for (const auto& block : blocks) {
        c *= restricted_weight(Flavor::classical, eps, p, s, block, N);
        if (sgn(c) == 0) break;
      }
      if (sgn(c) != 0) out.push_back({p, s, c});
    }
  }
  return out;
}

}  // namespace

const std::vector<PairCoefficient>& pair_coefficients(Flavor flavor, const SignPattern& eps,
                                                      std::span<const int> labels, long N) {
  if (static_cast<int>(labels.size()) != eps.size())
    throw std::invalid_argument("pair_coefficients: labels and signs differ in length");
  Partition kl = kernel(labels);
  using Key = std::tuple<int, std::string, std::vector<int>, long>;
  static std::mutex mu;
  static std::map<Key, std::unique_ptr<std::vector<PairCoefficient>>> cache;
  Key key{static_cast<int>(flavor), eps.to_string(), kl.labels(), N};
  {
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
  }
  std::vector<PairCoefficient> v;
  if (eps.size() % 2 == 0 && eps.balanced()) {
    if (kl.num_blocks() <= 1) {
      v = single_label_coefficients(flavor, eps, N);
    } else {
      if (eps.size() > kMaxFreeProductWordLength)
        throw std::length_error("several unitary labels are capped at " + std::to_string(kMaxFreeProductWordLength) +
                                " letters");
      v = flavor == Flavor::quantum ? free_product_coefficients(eps, kl, N) : independent_coefficients(eps, kl, N);
    }
  }
  std::lock_guard lock(mu);
  auto [it, inserted] = cache.emplace(key, std::make_unique<std::vector<PairCoefficient>>(std::move(v)));
  return *it->second;
}

SlotLayout word_slots(Flavor flavor, const SignPattern& eps, const Partition& pi, const Partition& sigma,
                      bool has_lead) {
  const int len = eps.size();
  const int total = 2 * len + (has_lead ? 1 : 0);
  std::vector<int> parent(total);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
  std::vector<int> islot(len), jslot(len);
  for (int k = 0; k < len; ++k) {
    bool swap = flavor == Flavor::quantum ? k % 2 == 1 : eps.star(k + 1);
    islot[k] = swap ? 2 * k + 1 : 2 * k;
    jslot[k] = swap ? 2 * k : 2 * k + 1;
  }
  for (const auto& b : pi.blocks())
    for (std::size_t t = 1; t < b.size(); ++t) unite(islot[b[0] - 1], islot[b[t] - 1]);
  for (const auto& b : sigma.blocks())
    for (std::size_t t = 1; t < b.size(); ++t) unite(jslot[b[0] - 1], jslot[b[t] - 1]);
  std::vector<int> id(total, -1);
  SlotLayout out;
  auto block = [&](int s) {
    int r = find(s);
    if (id[r] < 0) id[r] = out.nblocks++;
    return id[r];
  };
  if (has_lead) out.slots.push_back({block(2 * len), block(0)});
  for (int k = 0; k < len; ++k) {
    int col = k + 1 < len ? 2 * k + 2 : (has_lead ? 2 * len : 0);
    out.slots.push_back({block(2 * k + 1), block(col)});
  }
  return out;
}

// ---- convergence ----

void finalize(ConvergenceReport& r) {
  const int n = static_cast<int>(r.rows.size());
  const int tail = std::min(n, std::max(3, n / 2));
  std::vector<double> xs, ys;
  bool all_zero = true;
  for (int k = n - tail; k < n; ++k) {
    const auto& row = r.rows[k];
    if (row.delta > 0) {
      all_zero = false;
      xs.push_back(std::log(static_cast<double>(row.N)));
      ys.push_back(std::log(row.delta));
    }
  }
  r.tail_points = static_cast<int>(xs.size());
  if (all_zero) {
    r.slope = -std::numeric_limits<double>::infinity();
    r.slope_ok = true;
  } else if (xs.size() < 2) {
    r.slope = std::numeric_limits<double>::quiet_NaN();
    r.slope_ok = false;
  } else {
    double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      sxy += (xs[k] - mx) * (ys[k] - my);
      sxx += (xs[k] - mx) * (xs[k] - mx);
    }
    r.slope = sxy / sxx;
    r.slope_ok = r.slope <= -1.7;
  }
  const int w = std::min(3, n);
  double first = 0, last = 0;
  for (int k = 0; k < w; ++k) first = std::max(first, r.rows[k].scaled);
  for (int k = n - w; k < n; ++k) last = std::max(last, r.rows[k].scaled);
  r.bounded = last <= 1.5 * first;
}

// ---- Laurent data ----

LaurentMoments laurent_from_samples(const std::vector<std::pair<long, std::vector<GaussianRational>>>& samples,
                                    std::vector<std::string> labels, DegreeBounds bounds) {
  if (samples.empty()) throw InterpolationError("laurent_from_samples: no samples");
  const std::size_t dim = samples.front().second.size();
  LaurentMoments out;
  out.labels = std::move(labels);
  for (std::size_t c = 0; c < dim; ++c) {
    std::vector<std::pair<long, BigRational>> re, im;
    for (const auto& [N, v] : samples) {
      if (v.size() != dim) throw InterpolationError("laurent_from_samples: coordinate counts differ");
      re.emplace_back(N, v[c].re());
      im.emplace_back(N, v[c].im());
    }
    CoordinateFunction f{interpolate_rational(re, bounds), interpolate_rational(im, bounds)};
    auto lre = laurent_at_infinity(f.re, 2), lim = laurent_at_infinity(f.im, 2);
    if ((!lre.zero && lre.exponent > 0) || (!lim.zero && lim.exponent > 0))
      throw InterpolationError("coordinate " + std::to_string(c) + " grows with N");
    auto coeff = [](const RationalFunction& g, int k) {
      auto l = laurent_at_infinity(g, std::max(0, -k + 2));
      return l.coeff_of_power(k);
    };
    out.e.emplace_back(coeff(f.re, 0), coeff(f.im, 0));
    out.e_prime.emplace_back(coeff(f.re, -1), coeff(f.im, -1));
    out.functions.push_back(std::move(f));
  }
  return out;
}

// ---- word templates ----

std::vector<WordToken> parse_word(std::string_view text) {
  std::vector<WordToken> out;
  std::size_t p = 0;
  while (p < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[p]))) {
      ++p;
      continue;
    }
    std::size_t q = p;
    while (q < text.size() && !std::isspace(static_cast<unsigned char>(text[q]))) ++q;
    std::string tok(text.substr(p, q - p));
    p = q;
    if (tok[0] == 'U' && (tok.size() == 1 || std::isdigit(static_cast<unsigned char>(tok[1])) || tok[1] == '*')) {
      std::size_t k = 1;
      int label = 0;
      while (k < tok.size() && std::isdigit(static_cast<unsigned char>(tok[k]))) label = label * 10 + (tok[k++] - '0');
      if (k == 1) label = 1;
      bool star = false;
      if (k < tok.size() && tok[k] == '*') {
        star = true;
        ++k;
      }
      if (k != tok.size() || label < 1) throw std::invalid_argument("bad unitary letter '" + tok + "'");
      out.push_back(WordToken::unitary(label, star));
    } else {
      for (char ch : tok)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_')
          throw std::invalid_argument("bad family name '" + tok + "'");
      out.push_back(WordToken::family(tok));
    }
  }
  return out;
}

std::string to_string(const std::vector<WordToken>& w) {
  std::ostringstream os;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k) os << ' ';
    switch (w[k].kind) {
      case WordToken::Kind::unitary:
        os << 'U' << w[k].label << (w[k].star ? "*" : "");
        break;
      case WordToken::Kind::family:
        os << w[k].name;
        break;
      case WordToken::Kind::constant:
        os << "c" << w[k].constant;
        break;
    }
  }
  return os.str();
}

std::vector<std::vector<std::string>> alternating_words(const std::map<std::string, int>& group_of, int max_len) {
  std::vector<std::vector<std::string>> out, frontier{{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::vector<std::string>> next;
    for (const auto& w : frontier)
      for (const auto& [name, g] : group_of) {
        if (!w.empty() && group_of.at(w.back()) == g) continue;
        auto v = w;
        v.push_back(name);
        next.push_back(v);
      }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

// ---- matrix unit example ----

BMatrix<MatrixUnitAlgebra> flip_matrix(const MatrixUnitAlgebra& alg, int system) {
  BMatrix<MatrixUnitAlgebra> m(alg.n());
  for (int i = 0; i < alg.n(); ++i)
    for (int j = 0; j < alg.n(); ++j) m(i, j) = alg.unit(system, j + 1, i + 1);
  return m;
}

MixedWord<MatrixUnitAlgebra> counterexample_word(const MatrixUnitAlgebra& alg, Flavor flavor) {
  MixedWord<MatrixUnitAlgebra> w;
  w.flavor = flavor;
  w.eps = SignPattern::alternating(3);
  w.labels.assign(6, 1);
  auto a = flip_matrix(alg, 1), b = flip_matrix(alg, 2);
  for (int k = 0; k < 3; ++k) {
    w.factors.push_back(a);
    w.factors.push_back(b);
  }
  return w;
}

MatrixUnitElement counterexample(long N, Flavor flavor) {
  MatrixUnitAlgebra alg(static_cast<int>(N));
  return lhs_exact(alg, counterexample_word(alg, flavor));
}

TauTerm counterexample_tau_term(long N) {
  MatrixUnitAlgebra alg(static_cast<int>(N));
  auto w = counterexample_word(alg, Flavor::classical);
  auto tau = Partition::parse("{{1,4},{2,5},{3,6}}");
  const auto& t = weingarten_table(Flavor::classical, w.eps);
  int idx = t.index_of(tau);
  TauTerm r;
  r.n3_weight = numeric_weingarten(Flavor::classical, w.eps, N)(idx, idx) * BigRational(N * N * N);
  auto layout = word_slots(Flavor::classical, w.eps, tau, tau, false);
  std::vector<const BMatrix<MatrixUnitAlgebra>*> f;
  for (const auto& x : w.factors) f.push_back(&x);
  r.constrained = chain_sum(alg, static_cast<int>(N), f, layout.slots, layout.nblocks);
  return r;
}

}  // namespace qfree
