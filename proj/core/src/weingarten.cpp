#include "qfree/weingarten.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <tuple>

namespace qfree {

std::string to_string(Flavor f) { return f == Flavor::quantum ? "quantum" : "classical"; }

Flavor flavor_from_string(std::string_view s) {
  if (s == "quantum") return Flavor::quantum;
  if (s == "classical") return Flavor::classical;
  throw std::invalid_argument("unknown flavor '" + std::string(s) + "' (expected quantum or classical)");
}

int WeingartenTable::index_of(const Partition& p) const {
  for (std::size_t k = 0; k < family.size(); ++k)
    if (family[k] == p) return static_cast<int>(k);
  return -1;
}

const RationalFunction& WeingartenTable::entry(const Partition& p, const Partition& s) const {
  int a = index_of(p), b = index_of(s);
  if (a < 0 || b < 0)
    throw PartitionError("Weingarten entry requested outside the " + to_string(flavor) + " family for " +
                         eps.to_string());
  return wg(a, b);
}

WeingartenTable build_table(Flavor flavor, const SignPattern& eps) {
  int len = eps.size();
  int cap = flavor == Flavor::quantum ? kMaxQuantumWordLength : kMaxClassicalWordLength;
  if (len % 2) throw PartitionError("build_table: sign pattern must have even length");
  if (len > cap)
    throw PartitionError("build_table: " + to_string(flavor) + " tables are capped at word length " +
                         std::to_string(cap) + ", got " + std::to_string(len));
  WeingartenTable t;
  t.flavor = flavor;
  t.eps = eps;
  t.family = enumerate(flavor == Flavor::quantum ? FamilyKind::NC2_EPS : FamilyKind::P2_EPS, len, &eps).members;
  std::size_t k = t.family.size();
  t.gram = FieldMatrix<RationalFunction>(k, k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a; b < k; ++b)
      t.gram(a, b) = t.gram(b, a) = RationalFunction::n_pow(join_full(t.family[a], t.family[b]).num_blocks());
  t.wg = k ? t.gram.inverse() : t.gram;
  return t;
}

const WeingartenTable& weingarten_table(Flavor flavor, const SignPattern& eps) {
  using Key = std::pair<int, std::string>;
  static std::mutex mu;
  static std::map<Key, std::unique_ptr<WeingartenTable>> cache;
  Key key{static_cast<int>(flavor), eps.to_string()};
  {
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
  }
  auto t = std::make_unique<WeingartenTable>(build_table(flavor, eps));
  std::lock_guard lock(mu);
  auto [it, inserted] = cache.emplace(key, std::move(t));
  return *it->second;
}

FieldMatrix<BigRational> pseudo_inverse(const FieldMatrix<BigRational>& a) {
  // Full-rank factorization a = C R with C the pivot columns of a and R the
  // nonzero rows of rref(a); then a^+ = R^T (R R^T)^{-1} (C^T C)^{-1} C^T.
  FieldMatrix<BigRational> r = a;
  auto pivots = r.rref();
  std::size_t rank = pivots.size();
  if (rank == 0) return FieldMatrix<BigRational>(a.cols(), a.rows());
  FieldMatrix<BigRational> R(rank, a.cols()), C(a.rows(), rank);
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) R(i, j) = r(i, j);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < rank; ++j) C(i, j) = a(i, pivots[j]);
  auto Rt = R.transpose(), Ct = C.transpose();
  return Rt * (R * Rt).inverse() * (Ct * C).inverse() * Ct;
}

const FieldMatrix<BigRational>& numeric_weingarten(Flavor flavor, const SignPattern& eps, long N) {
  using Key = std::tuple<int, std::string, long>;
  static std::mutex mu;
  static std::map<Key, std::unique_ptr<FieldMatrix<BigRational>>> cache;
  Key key{static_cast<int>(flavor), eps.to_string(), N};
  {
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
  }
  const auto& t = weingarten_table(flavor, eps);
  std::size_t k = t.family.size();
  BigRational x = N;
  bool pole = false;
  for (std::size_t a = 0; a < k && !pole; ++a)
    for (std::size_t b = 0; b < k && !pole; ++b) pole = t.wg(a, b).has_pole(x);
  auto w = std::make_unique<FieldMatrix<BigRational>>(k, k);
  if (!pole) {
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) (*w)(a, b) = t.wg(a, b).eval(x);
  } else {
    FieldMatrix<BigRational> g(k, k);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) g(a, b) = t.gram(a, b).eval(x);
    *w = pseudo_inverse(g);
  }
  std::lock_guard lock(mu);
  auto [it, inserted] = cache.emplace(key, std::move(w));
  return *it->second;
}

namespace {

void check_lengths(std::size_t a, std::size_t b, std::size_t c, const char* op) {
  if (a != b || a != c)
    throw std::invalid_argument(std::string(op) + ": index tuples and sign pattern differ in length");
}

}  // namespace

RationalFunction haar_moment(const WeingartenTable& table, std::span<const int> i, std::span<const int> j) {
  check_lengths(i.size(), j.size(), table.eps.size(), "haar_moment");
  Partition ki = kernel(i), kj = kernel(j);
  std::vector<int> rows, cols;
  for (std::size_t a = 0; a < table.family.size(); ++a) {
    if (table.family[a].refines(ki)) rows.push_back(static_cast<int>(a));
    if (table.family[a].refines(kj)) cols.push_back(static_cast<int>(a));
  }
  RationalFunction sum;
  for (int a : rows)
    for (int b : cols) sum += table.wg(a, b);
  return sum;
}

RationalFunction haar_moment(Flavor flavor, const SignPattern& eps, std::span<const int> i, std::span<const int> j) {
  check_lengths(i.size(), j.size(), eps.size(), "haar_moment");
  if (eps.size() % 2 || !eps.balanced()) return {};
  return haar_moment(weingarten_table(flavor, eps), i, j);
}

BigRational haar_moment_at(Flavor flavor, const SignPattern& eps, std::span<const int> i, std::span<const int> j,
                           long N) {
  check_lengths(i.size(), j.size(), eps.size(), "haar_moment_at");
  if (eps.size() % 2 || !eps.balanced()) return 0;
  const auto& t = weingarten_table(flavor, eps);
  const auto& w = numeric_weingarten(flavor, eps, N);
  Partition ki = kernel(i), kj = kernel(j);
  BigRational sum = 0;
  for (std::size_t a = 0; a < t.family.size(); ++a) {
    if (!t.family[a].refines(ki)) continue;
    for (std::size_t b = 0; b < t.family.size(); ++b)
      if (t.family[b].refines(kj)) sum += w(a, b);
  }
  return sum;
}

EntryWord adjoint_reduce(const EntryWord& w) {
  if (w.size() % 2) throw std::invalid_argument("adjoint_reduce: word must have even length");
  EntryWord out;
  out.reserve(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    EntryLetter l = w[k];
    // express as an entry of U^star
    if (!l.of_adjoint && l.star) std::swap(l.i, l.j);
    l.of_adjoint = false;
    if (k % 2 == 1) std::swap(l.i, l.j);
    out.push_back(l);
  }
  return out;
}

RationalFunction word_moment(Flavor flavor, const EntryWord& w) {
  std::vector<bool> stars;
  std::vector<int> i, j;
  for (auto& l : w) {
    stars.push_back(l.star);
    bool swap = l.of_adjoint && l.star;
    i.push_back(swap ? l.j : l.i);
    j.push_back(swap ? l.i : l.j);
  }
  if (w.empty()) return 1;
  return haar_moment(flavor, SignPattern(stars), i, j);
}

namespace {

struct SubWord {
  SignPattern eps;
  std::vector<int> i, j;
};

SubWord sub_word(const SignPattern& eps, std::span<const int> i, std::span<const int> j, const std::vector<int>& block) {
  SubWord s;
  s.eps = eps.restrict(block);
  for (int x : block) {
    s.i.push_back(i[x - 1]);
    s.j.push_back(j[x - 1]);
  }
  return s;
}

}  // namespace

RationalFunction moment_function(Flavor flavor, const SignPattern& eps, const Partition& omega, std::span<const int> i,
                                 std::span<const int> j) {
  check_lengths(i.size(), j.size(), eps.size(), "moment_function");
  if (omega.size() != eps.size()) throw PartitionError("moment_function: partition size does not match the word");
  if (!omega.is_noncrossing()) throw PartitionError("moment_function: " + omega.to_string() + " is not noncrossing");
  RationalFunction prod = 1;
  for (auto& b : omega.blocks()) {
    if (b.size() % 2) return {};
    auto s = sub_word(eps, i, j, b);
    prod *= haar_moment(flavor, s.eps, s.i, s.j);
    if (prod.is_zero()) return prod;
  }
  return prod;
}

RationalFunction entry_cumulant(Flavor flavor, const SignPattern& eps, const Partition& tau, std::span<const int> i,
                                std::span<const int> j) {
  check_lengths(i.size(), j.size(), eps.size(), "entry_cumulant");
  if (!tau.is_noncrossing()) throw PartitionError("entry_cumulant: " + tau.to_string() + " is not noncrossing");
  for (int s : tau.block_sizes())
    if (s % 2) return {};
  RationalFunction sum;
  for (const auto& w : cached_members(FamilyKind::NC, tau.size())) {
    if (!w.refines(tau)) continue;
    auto mu = mobius(w, tau);
    if (mu == 0) continue;
    auto f = moment_function(flavor, eps, w, i, j);
    if (!f.is_zero()) sum += RationalFunction(BigRational(mu)) * f;
  }
  return sum;
}

RationalFunction free_product_moment(Flavor flavor, const SignPattern& eps, std::span<const int> labels,
                                     std::span<const int> i, std::span<const int> j) {
  check_lengths(i.size(), j.size(), eps.size(), "free_product_moment");
  if (labels.size() != i.size()) throw std::invalid_argument("free_product_moment: label tuple has the wrong length");
  int len = static_cast<int>(i.size());
  if (len > kMaxFreeProductWordLength)
    throw PartitionError("free_product_moment: capped at word length " + std::to_string(kMaxFreeProductWordLength));
  if (len % 2) return {};
  Partition kl = kernel(labels);
  // cumulants are multiplicative over blocks; memoize the full-block ones
  std::map<std::vector<int>, RationalFunction> block_cumulant;
  auto kappa_block = [&](const std::vector<int>& b) -> const RationalFunction& {
    auto it = block_cumulant.find(b);
    if (it != block_cumulant.end()) return it->second;
    RationalFunction v;
    if (b.size() % 2 == 0) {
      auto s = sub_word(eps, i, j, b);
      v = entry_cumulant(flavor, s.eps, Partition::one(static_cast<int>(b.size())), s.i, s.j);
    }
    return block_cumulant.emplace(b, std::move(v)).first->second;
  };
  RationalFunction sum;
  for (const auto& tau : cached_members(FamilyKind::NC, len)) {
    if (!tau.refines(kl)) continue;
    RationalFunction prod = 1;
    for (auto& b : tau.blocks()) {
      prod *= kappa_block(b);
      if (prod.is_zero()) break;
    }
    sum += prod;
  }
  return sum;
}

bool WestReport::ok() const {
  bool exp_ok = zero || exponent <= exponent_bound;
  return exp_ok && c0 == mobius && sgn(c1) == 0;
}

WestReport west_expansion(const WeingartenTable& table, const Partition& p, const Partition& s) {
  int m = table.eps.size() / 2;
  if (p.size() != m || s.size() != m) throw PartitionError("west_expansion: partitions must have size m");
  const RationalFunction& w = table.entry(fatten(p), fatten(s));
  WestReport r;
  r.exponent_bound = 2 * join_full(p, s).num_blocks() - p.num_blocks() - s.num_blocks() - m;
  r.mobius = mobius(s, p);
  int shift = m + s.num_blocks() - p.num_blocks();
  auto l = laurent_at_infinity(w, 0);
  r.zero = l.zero;
  r.exponent = l.exponent;
  // coefficient of n^{-k} in n^shift * W is the coefficient of n^{-k-shift} in W
  auto coeff = [&](int k) {
    if (l.zero) return BigRational(0);
    int idx = l.exponent + k + shift;
    if (idx < 0) return BigRational(0);
    auto full = laurent_at_infinity(w, idx);
    return full.coeffs[idx];
  };
  r.c0 = coeff(0);
  r.c1 = coeff(1);
  r.c2 = coeff(2);
  return r;
}

}  // namespace qfree
