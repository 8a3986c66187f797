#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qfree/opvalued.hpp"
#include "qfree/parallel.hpp"
#include "qfree/rational_function.hpp"
#include "qfree/weingarten.hpp"

namespace qfree {

// ---------------------------------------------------------------------------
// Haar side: the weight attached to a pair of pairings (pi, sigma) in
// psi(U^{e1}_{i1 j1} ... ) = sum delta_pi(i) delta_sigma(j) c(pi, sigma).

struct PairCoefficient {
  Partition pi, sigma;
  BigRational c;
};

// All nonzero c_N(pi, sigma) for the word's sign pattern and labels at n = N.
// One label: the Weingarten matrix.  Several labels, quantum: free product
// of copies, c = sum over omega in NC with pi v sigma <= omega <= ker l of
// nu(omega) prod_{V in omega} W_{eps|V}(pi|V, sigma|V), where nu(omega) is
// the sum of mu(omega, tau) over noncrossing tau in [omega, ker l].
// Several labels, classical: independent copies, a product over labels.
// Cached; thread-safe.
const std::vector<PairCoefficient>& pair_coefficients(Flavor flavor, const SignPattern& eps,
                                                      std::span<const int> labels, long N);

// Blocks of the index slots for one (pi, sigma) term.  Letter k (0-based)
// reads slots (2k, 2k+1) as the row and column of (U^{e_k}); factor k sits
// on (2k+1, 2k+2 mod 4m).  With a leading factor an extra slot 4m closes the
// trace.  Star letters are rewritten as plain entries by swapping indices on
// odd 0-based positions (quantum) or on star letters (classical).
struct SlotLayout {
  std::vector<std::array<int, 2>> slots;  // per factor, lead first when present
  int nblocks = 0;
};
SlotLayout word_slots(Flavor flavor, const SignPattern& eps, const Partition& pi, const Partition& sigma,
                      bool has_lead);

// ---------------------------------------------------------------------------

// lead U^{e_1} A(1) U^{e_2} A(2) ... U^{e_2m} A(2m), all A's N x N over B.
template <CoefficientAlgebra Alg>
struct MixedWord {
  Flavor flavor = Flavor::quantum;
  std::vector<int> labels;
  SignPattern eps;
  std::optional<BMatrix<Alg>> lead;
  std::vector<BMatrix<Alg>> factors;

  int matrix_size() const { return lead ? lead->size() : factors.empty() ? 0 : factors[0].size(); }
  bool single_label() const {
    for (int l : labels)
      if (l != labels.front()) return false;
    return true;
  }
};

template <CoefficientAlgebra Alg>
void validate(const MixedWord<Alg>& w) {
  if (w.labels.size() != static_cast<std::size_t>(w.eps.size()) || w.factors.size() != w.labels.size())
    throw std::invalid_argument("mixed word: labels, signs and factors must have equal length");
  const int n = w.matrix_size();
  if (w.lead && w.lead->size() != n) throw std::invalid_argument("mixed word: factor sizes differ");
  for (const auto& f : w.factors)
    if (f.size() != n) throw std::invalid_argument("mixed word: factor sizes differ");
  if (w.eps.size() > 0 && n < 1) throw std::invalid_argument("mixed word: empty factors");
}

// (psi_N^{*inf} (x) E_N) of the word, exactly.
template <CoefficientAlgebra Alg>
typename Alg::Element lhs_exact(const Alg& alg, const MixedWord<Alg>& w) {
  validate(w);
  const int len = w.eps.size();
  if (len == 0) return w.lead ? expectation(alg, *w.lead) : alg.one();
  if (len % 2 || !w.eps.balanced()) return alg.zero();
  const bool single = w.single_label();
  if (single ? len > (w.flavor == Flavor::quantum ? kMaxQuantumWordLength : kMaxClassicalWordLength)
             : len > kMaxFreeProductWordLength)
    throw std::length_error("lhs_exact: word has " + std::to_string(len) + " unitary letters, above the cap");
  const int N = w.matrix_size();
  const auto& coef = pair_coefficients(w.flavor, w.eps, w.labels, N);
  std::vector<const BMatrix<Alg>*> f;
  if (w.lead) f.push_back(&*w.lead);
  for (const auto& x : w.factors) f.push_back(&x);
  std::vector<typename Alg::Element> part(coef.size());
  parallel_for(coef.size(), [&](std::size_t t) {
    auto layout = word_slots(w.flavor, w.eps, coef[t].pi, coef[t].sigma, w.lead.has_value());
    auto s = chain_sum(alg, N, f, layout.slots, layout.nblocks);
    if (!s.is_zero()) part[t] = s * GaussianRational(coef[t].c);
  });
  auto total = alg.zero();
  for (auto& p : part) total += p;
  return total * GaussianRational(make_rational(1, N));
}

// The same value from the definition: (1/N) times the sum over every index
// tuple of the Haar value of the literal entry word times the entries of the
// factors.  Exponential; for cross-checks at tiny sizes only.
template <CoefficientAlgebra Alg>
typename Alg::Element lhs_bruteforce(const Alg& alg, const MixedWord<Alg>& w) {
  validate(w);
  const int len = w.eps.size();
  if (len == 0) return w.lead ? expectation(alg, *w.lead) : alg.one();
  const int N = w.matrix_size();
  const int slots = 2 * len + (w.lead ? 1 : 0);
  double count = std::pow(static_cast<double>(N), slots);
  if (count > 2e6) throw std::length_error("lhs_bruteforce: too many index tuples");
  std::vector<int> x(slots, 0);
  auto total = alg.zero();
  std::vector<int> i(len), j(len);
  while (true) {
    for (int k = 0; k < len; ++k) {
      int a = x[2 * k] + 1, b = x[2 * k + 1] + 1;
      // (U*)_{ab} = (U_{ba})^*
      i[k] = w.eps.star(k + 1) ? b : a;
      j[k] = w.eps.star(k + 1) ? a : b;
    }
    BigRational h = w.single_label() ? haar_moment_at(w.flavor, w.eps, i, j, N)
                                     : free_product_moment(w.flavor, w.eps, w.labels, i, j).eval(N);
    if (sgn(h) != 0) {
      auto prod = alg.one();
      bool zero = false;
      if (w.lead) {
        const auto& e = (*w.lead)(x[2 * len], x[0]);
        zero = e.is_zero();
        if (!zero) prod = prod * e;
      }
      for (int k = 0; k < len && !zero; ++k) {
        int col = k + 1 < len ? x[2 * k + 2] : (w.lead ? x[2 * len] : x[0]);
        const auto& e = w.factors[k](x[2 * k + 1], col);
        zero = e.is_zero();
        if (!zero) prod = prod * e;
      }
      if (!zero) total += prod * GaussianRational(h);
    }
    int p = slots - 1;
    while (p >= 0 && x[p] == N - 1) x[p--] = 0;
    if (p < 0) break;
    ++x[p];
  }
  return total * GaussianRational(make_rational(1, N));
}

// sum over sigma <= pi in NC^eps(m) with fatten(pi) v fatten(sigma) <= ker l
// of mu(sigma, pi) E^{(sigma wr K(pi))}[A(1), ..., A(2m)], using E_N.
template <CoefficientAlgebra Alg>
typename Alg::Element limit_formula(const Alg& alg, const MixedWord<Alg>& w) {
  validate(w);
  if (w.lead) throw std::invalid_argument("limit_formula: the word must start with a unitary letter");
  const int len = w.eps.size();
  if (len == 0) return alg.one();
  if (len % 2) return alg.zero();
  const int m = len / 2;
  Partition kl = kernel(w.labels);
  const auto& fam = cached_members(FamilyKind::NC_EPS, m, &w.eps);
  std::span<const BMatrix<Alg>> args(w.factors);
  auto total = alg.zero();
  for (const auto& p : fam) {
    Partition kp = kreweras(p), fp = fatten(p);
    for (const auto& s : fam) {
      if (!s.refines(p)) continue;
      if (!join_full(fp, fatten(s)).refines(kl)) continue;
      std::int64_t mu = mobius(s, p);
      if (mu == 0) continue;
      total += functional_e(alg, interleave(s, kp), args) * GaussianRational(mu);
    }
  }
  return total;
}

// Independent evaluation of the same limit: the sum over tau in NC(2m),
// tau <= ker l, of the free cumulant of the Haar letters along tau times
// E^{(K(tau))}[A(1), ..., A(2m)].  Haar unitary cumulants vanish unless
// every block alternates and has even size; then they are products of
// (-1)^{k-1} C_{k-1} for blocks of size 2k.
template <CoefficientAlgebra Alg>
typename Alg::Element limit_oracle(const Alg& alg, const MixedWord<Alg>& w) {
  validate(w);
  if (w.lead) throw std::invalid_argument("limit_oracle: the word must start with a unitary letter");
  const int len = w.eps.size();
  if (len == 0) return alg.one();
  Partition kl = kernel(w.labels);
  std::span<const BMatrix<Alg>> args(w.factors);
  auto total = alg.zero();
  for (const auto& tau : cached_members(FamilyKind::NC, len)) {
    if (!tau.refines(kl)) continue;
    std::int64_t kappa = 1;
    for (const auto& b : tau.blocks()) {
      const int size = static_cast<int>(b.size());
      bool alternating = size % 2 == 0;
      for (int t = 0; t + 1 < size && alternating; ++t)
        alternating = w.eps.star(b[t]) != w.eps.star(b[t + 1]);
      if (!alternating) {
        kappa = 0;
        break;
      }
      int k = size / 2;
      kappa *= (k % 2 ? 1 : -1) * catalan(k - 1);
    }
    if (kappa == 0) continue;
    total += functional_e(alg, kreweras(tau), args) * GaussianRational(kappa);
  }
  return total;
}

// Limit of E[U A(1) U* B(1) ... U A(m) U* B(m)]: only the E_N-moments of the
// A-family and of the B-family enter.
template <CoefficientAlgebra Alg>
typename Alg::Element rotated_limit(const Alg& alg, std::span<const BMatrix<Alg>> as,
                                    std::span<const BMatrix<Alg>> bs) {
  if (as.size() != bs.size() || as.empty()) throw std::invalid_argument("rotated_limit: need m >= 1 pairs (A, B)");
  MixedWord<Alg> w;
  w.eps = SignPattern::alternating(static_cast<int>(as.size()));
  w.labels.assign(2 * as.size(), 1);
  for (std::size_t k = 0; k < as.size(); ++k) {
    w.factors.push_back(as[k]);
    w.factors.push_back(bs[k]);
  }
  return limit_formula(alg, w);
}

// ---------------------------------------------------------------------------
// Convergence

struct ConvergenceRow {
  long N = 0;
  std::string value, limit;
  double delta = 0;
  double scaled = 0;  // N^2 delta
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  double slope = 0;        // least squares, log delta against log N, over the tail
  int tail_points = 0;
  bool slope_ok = false;   // slope <= -1.7
  bool bounded = false;    // max of the last three N^2 delta <= 1.5 * max of the first three
  bool verdict() const { return slope_ok || bounded; }
  bool strict() const { return slope_ok && bounded; }
};

// fills slope and the two diagnostics from rows
void finalize(ConvergenceReport& r);

template <class Eval>
ConvergenceReport convergence_report(const std::vector<long>& ns, Eval&& eval) {
  if (ns.empty()) throw std::invalid_argument("convergence_report: empty N range");
  ConvergenceReport r;
  for (long N : ns) {
    ConvergenceRow row = eval(N);
    row.N = N;
    row.scaled = static_cast<double>(N) * N * row.delta;
    r.rows.push_back(std::move(row));
  }
  finalize(r);
  return r;
}

// Row for one N: exact value against the limit formula (or a fixed limit).
template <CoefficientAlgebra Alg>
ConvergenceRow compare_to_limit(const Alg& alg, const MixedWord<Alg>& w,
                                const std::optional<typename Alg::Element>& fixed_limit = std::nullopt) {
  ConvergenceRow row;
  auto value = lhs_exact(alg, w);
  auto limit = fixed_limit ? *fixed_limit : limit_formula(alg, w);
  row.value = alg.to_string(value);
  row.limit = alg.to_string(limit);
  row.delta = alg.norm(value - limit);
  return row;
}

// ---------------------------------------------------------------------------
// Laurent data of N -> value

struct CoordinateFunction {
  RationalFunction re, im;
};

struct LaurentMoments {
  std::vector<std::string> labels;
  std::vector<CoordinateFunction> functions;
  std::vector<GaussianRational> e;        // value at infinity
  std::vector<GaussianRational> e_prime;  // coefficient of 1/N
};

// Interpolates every coordinate (real and imaginary parts separately) and
// re-checks each sample; throws InterpolationError on a misfit or when a
// coordinate grows with N.
LaurentMoments laurent_from_samples(const std::vector<std::pair<long, std::vector<GaussianRational>>>& samples,
                                    std::vector<std::string> labels, DegreeBounds bounds);

// ---------------------------------------------------------------------------
// Word templates: unitary letters, named matrix families and constants.

struct WordToken {
  enum class Kind { unitary, family, constant };
  Kind kind = Kind::family;
  int label = 1;
  bool star = false;
  std::string name;     // family name
  int constant = -1;    // index into the constant list

  static WordToken unitary(int label, bool star) { return {Kind::unitary, label, star, {}, -1}; }
  static WordToken family(std::string n) { return {Kind::family, 1, false, std::move(n), -1}; }
  static WordToken constant_at(int k) { return {Kind::constant, 1, false, {}, k}; }
};

// "U1 A U1* B" -> tokens; "U" and "U*" mean label 1
std::vector<WordToken> parse_word(std::string_view text);
std::string to_string(const std::vector<WordToken>& w);

// Builds the mixed word at size N: consecutive matrices multiply, a missing
// factor between letters is the identity, matrices before the first letter
// form the lead.
template <CoefficientAlgebra Alg>
MixedWord<Alg> instantiate(const Alg& alg, Flavor flavor, const std::vector<WordToken>& tokens,
                           const std::map<std::string, BMatrix<Alg>>& families,
                           const std::vector<typename Alg::Element>& constants, int N) {
  MixedWord<Alg> w;
  w.flavor = flavor;
  std::optional<BMatrix<Alg>> pending;
  std::vector<bool> stars;
  auto take = [&](const BMatrix<Alg>& m) { pending = pending ? multiply(*pending, m) : m; };
  auto flush = [&] {
    if (stars.empty()) {
      w.lead = pending;
    } else {
      w.factors.push_back(pending ? *pending : BMatrix<Alg>::identity(alg, N));
    }
    pending.reset();
  };
  for (const auto& t : tokens) {
    switch (t.kind) {
      case WordToken::Kind::unitary:
        flush();
        stars.push_back(t.star);
        w.labels.push_back(t.label);
        break;
      case WordToken::Kind::family: {
        auto it = families.find(t.name);
        if (it == families.end()) throw std::invalid_argument("word refers to unknown family '" + t.name + "'");
        take(it->second);
        break;
      }
      case WordToken::Kind::constant:
        take(BMatrix<Alg>::diagonal(N, constants.at(t.constant)));
        break;
    }
  }
  if (!stars.empty()) {
    flush();
  } else if (pending) {
    w.lead = pending;
  }
  w.eps = SignPattern(stars);
  return w;
}

// ---------------------------------------------------------------------------
// Infinitesimal pair (E, E') read off from the N-dependence of exact values

template <CoefficientAlgebra Alg>
class InfinitesimalPair {
 public:
  using Coords = std::vector<GaussianRational>;
  using AlgebraAt = std::function<Alg(long N)>;
  using FamiliesAt = std::function<std::map<std::string, BMatrix<Alg>>(const Alg&, long N)>;

  // Items of a word: a named letter (a token sequence) or a constant given by
  // its coordinates.
  struct Item {
    std::string letter;
    Coords constant;
    static Item of_letter(std::string n) { return {std::move(n), {}}; }
    static Item of_constant(Coords c) { return {{}, std::move(c)}; }
  };

  InfinitesimalPair(Flavor flavor, AlgebraAt algebra_at, FamiliesAt families_at,
                    std::map<std::string, std::vector<WordToken>> letters, std::vector<long> ns, DegreeBounds bounds)
      : flavor_(flavor),
        algebra_at_(std::move(algebra_at)),
        families_at_(std::move(families_at)),
        letters_(std::move(letters)),
        ns_(std::move(ns)),
        bounds_(bounds) {
    for (long N : ns_) {
      Alg a = algebra_at_(N);
      fam_.emplace(N, families_at_(a, N));
    }
    Alg a = algebra_at_(ns_.front());
    labels_ = a.coordinate_labels();
    one_ = a.coordinates(a.one());
  }

  const std::vector<std::string>& coordinate_labels() const { return labels_; }
  const Coords& one() const { return one_; }

  // exact per-N values and their Laurent data, memoized by word
  const LaurentMoments& moments(const std::vector<Item>& word) {
    std::string key = key_of(word);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::vector<std::pair<long, Coords>> samples;
    for (long N : ns_) samples.emplace_back(N, value_at(word, N));
    return cache_.emplace(key, laurent_from_samples(samples, labels_, bounds_)).first->second;
  }

  Coords value_at(const std::vector<Item>& word, long N) {
    Alg a = algebra_at_(N);
    std::vector<WordToken> tokens;
    std::vector<typename Alg::Element> constants;
    for (const auto& item : word) {
      if (item.letter.empty()) {
        constants.push_back(a.from_coordinates(item.constant));
        tokens.push_back(WordToken::constant_at(static_cast<int>(constants.size()) - 1));
      } else {
        auto lt = letters_.find(item.letter);
        if (lt == letters_.end()) throw std::invalid_argument("unknown letter '" + item.letter + "'");
        tokens.insert(tokens.end(), lt->second.begin(), lt->second.end());
      }
    }
    auto w = instantiate(a, flavor_, tokens, fam_.at(N), constants, static_cast<int>(N));
    return a.coordinates(lhs_exact(a, w));
  }

  Coords e(const std::vector<Item>& word) { return moments(word).e; }
  Coords e_prime(const std::vector<Item>& word) {
    Coords c = moments(word).e_prime;
    if (corrupt_)
      for (std::size_t k = 0; k < c.size(); ++k) c[k] += one_[k];
    return c;
  }

  // negative control: every E' value gets the unit added
  void corrupt(bool on) { corrupt_ = on; }

 private:
  static std::string key_of(const std::vector<Item>& word) {
    std::string k;
    for (const auto& item : word) {
      if (!item.letter.empty()) {
        k += "L:" + item.letter + ";";
      } else {
        k += "C:";
        for (const auto& c : item.constant) k += c.to_string() + ",";
        k += ";";
      }
    }
    return k;
  }

  Flavor flavor_;
  AlgebraAt algebra_at_;
  FamiliesAt families_at_;
  std::map<std::string, std::vector<WordToken>> letters_;
  std::vector<long> ns_;
  DegreeBounds bounds_;
  std::map<long, std::map<std::string, BMatrix<Alg>>> fam_;
  std::vector<std::string> labels_;
  Coords one_;
  std::map<std::string, LaurentMoments> cache_;
  bool corrupt_ = false;
};

struct InfinitesimalResult {
  std::vector<std::string> word;
  std::vector<GaussianRational> lhs, rhs;
  bool ok = false;
};

// E'[(a1 - E a1) ... (ak - E ak)] against
// sum_j E[(a1 - E a1) ... E'[a_j] ... (ak - E ak)], with every centering
// multiplied out into words carrying constants.
template <CoefficientAlgebra Alg>
InfinitesimalResult infinitesimal_check(InfinitesimalPair<Alg>& pair, const std::vector<std::string>& word) {
  using Item = typename InfinitesimalPair<Alg>::Item;
  using Coords = std::vector<GaussianRational>;
  const int k = static_cast<int>(word.size());
  if (k == 0 || k > 4) throw std::invalid_argument("infinitesimal_check: need 1 to 4 letters");
  std::vector<Coords> e(k), ep(k);
  for (int t = 0; t < k; ++t) {
    e[t] = pair.e({Item::of_letter(word[t])});
    ep[t] = pair.e_prime({Item::of_letter(word[t])});
  }
  const std::size_t dim = pair.one().size();
  auto accumulate = [&](Coords& acc, const Coords& v, bool negate) {
    for (std::size_t c = 0; c < dim; ++c) acc[c] += negate ? -v[c] : v[c];
  };
  InfinitesimalResult r;
  r.word = word;
  r.lhs.assign(dim, GaussianRational(0));
  r.rhs.assign(dim, GaussianRational(0));
  for (int mask = 0; mask < (1 << k); ++mask) {
    std::vector<Item> items;
    int flips = 0;
    for (int t = 0; t < k; ++t) {
      if (mask >> t & 1) {
        items.push_back(Item::of_constant(e[t]));
        ++flips;
      } else {
        items.push_back(Item::of_letter(word[t]));
      }
    }
    accumulate(r.lhs, pair.e_prime(items), flips % 2 == 1);
  }
  for (int j = 0; j < k; ++j)
    for (int mask = 0; mask < (1 << k); ++mask) {
      if (mask >> j & 1) continue;
      std::vector<Item> items;
      int flips = 0;
      for (int t = 0; t < k; ++t) {
        if (t == j) {
          items.push_back(Item::of_constant(ep[t]));
        } else if (mask >> t & 1) {
          items.push_back(Item::of_constant(e[t]));
          ++flips;
        } else {
          items.push_back(Item::of_letter(word[t]));
        }
      }
      accumulate(r.rhs, pair.e(items), flips % 2 == 1);
    }
  r.ok = r.lhs == r.rhs;
  return r;
}

// all words of length 1..max_len whose neighbours come from different groups
std::vector<std::vector<std::string>> alternating_words(const std::map<std::string, int>& group_of, int max_len);

// ---------------------------------------------------------------------------
// The commuting matrix-unit example

// (A_N)_{ij} = E_ji(1), (B_N)_{ij} = E_ji(2)
BMatrix<MatrixUnitAlgebra> flip_matrix(const MatrixUnitAlgebra& alg, int system);
MixedWord<MatrixUnitAlgebra> counterexample_word(const MatrixUnitAlgebra& alg, Flavor flavor);
// exact (tr (x) psi (x) id)[(U A U* B)^3]
MatrixUnitElement counterexample(long N, Flavor flavor);

struct TauTerm {
  BigRational n3_weight;        // N^3 W^c(tau, tau)
  MatrixUnitElement constrained;  // sum over indices tied by (tau, tau), before W and 1/N
};
TauTerm counterexample_tau_term(long N);

}  // namespace qfree
