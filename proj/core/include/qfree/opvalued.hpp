#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "qfree/algebra.hpp"
#include "qfree/partitions.hpp"

namespace qfree {

// N x N matrix over a coefficient algebra, i.e. an element of M_N(B).
// Indices are 0-based; default entries are zero.
template <CoefficientAlgebra Alg>
class BMatrix {
 public:
  using Element = typename Alg::Element;

  BMatrix() = default;
  explicit BMatrix(int n) : n_(n), e_(static_cast<std::size_t>(n) * n) {}

  static BMatrix identity(const Alg& alg, int n) { return diagonal(n, alg.one()); }
  static BMatrix diagonal(int n, const Element& b) {
    BMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = b;
    return m;
  }

  int size() const { return n_; }
  Element& operator()(int i, int j) { return e_[static_cast<std::size_t>(i) * n_ + j]; }
  const Element& operator()(int i, int j) const { return e_[static_cast<std::size_t>(i) * n_ + j]; }

 private:
  int n_ = 0;
  std::vector<Element> e_;
};

template <CoefficientAlgebra Alg>
BMatrix<Alg> multiply(const BMatrix<Alg>& x, const BMatrix<Alg>& y) {
  const int n = x.size();
  if (y.size() != n) throw std::invalid_argument("matrix sizes differ");
  BMatrix<Alg> r(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const auto& a = x(i, k);
      if (a.is_zero()) continue;
      for (int j = 0; j < n; ++j)
        if (!y(k, j).is_zero()) r(i, j) += a * y(k, j);
    }
  return r;
}

template <CoefficientAlgebra Alg>
BMatrix<Alg> add(BMatrix<Alg> x, const BMatrix<Alg>& y) {
  for (int i = 0; i < x.size(); ++i)
    for (int j = 0; j < x.size(); ++j) x(i, j) += y(i, j);
  return x;
}

template <CoefficientAlgebra Alg>
BMatrix<Alg> scale(BMatrix<Alg> x, const GaussianRational& c) {
  for (int i = 0; i < x.size(); ++i)
    for (int j = 0; j < x.size(); ++j) x(i, j) = x(i, j) * c;
  return x;
}

// x * diag(b) and diag(b) * x
template <CoefficientAlgebra Alg>
BMatrix<Alg> right_multiply(BMatrix<Alg> x, const typename Alg::Element& b) {
  for (int i = 0; i < x.size(); ++i)
    for (int j = 0; j < x.size(); ++j)
      if (!x(i, j).is_zero()) x(i, j) = x(i, j) * b;
  return x;
}

template <CoefficientAlgebra Alg>
BMatrix<Alg> left_multiply(const typename Alg::Element& b, BMatrix<Alg> x) {
  for (int i = 0; i < x.size(); ++i)
    for (int j = 0; j < x.size(); ++j)
      if (!x(i, j).is_zero()) x(i, j) = b * x(i, j);
  return x;
}

template <CoefficientAlgebra Alg>
BMatrix<Alg> adjoint(const Alg& alg, const BMatrix<Alg>& x) {
  BMatrix<Alg> r(x.size());
  for (int i = 0; i < x.size(); ++i)
    for (int j = 0; j < x.size(); ++j)
      if (!x(j, i).is_zero()) r(i, j) = alg.adjoint(x(j, i));
  return r;
}

template <CoefficientAlgebra Alg>
bool equal(const Alg& alg, const BMatrix<Alg>& x, const BMatrix<Alg>& y) {
  if (x.size() != y.size()) return false;
  for (int i = 0; i < x.size(); ++i)
    for (int j = 0; j < x.size(); ++j)
      if (!alg.equal(x(i, j), y(i, j))) return false;
  return true;
}

// tr_N (x) id: (1/N) sum_i x_ii
template <CoefficientAlgebra Alg>
typename Alg::Element expectation(const Alg& alg, const BMatrix<Alg>& x) {
  auto s = alg.zero();
  for (int i = 0; i < x.size(); ++i) s += x(i, i);
  return s * GaussianRational(make_rational(1, x.size()));
}

template <CoefficientAlgebra Alg>
SparseComplex to_sparse(const Alg& alg, const BMatrix<Alg>& x) {
  SparseComplex s;
  const std::size_t fd = alg.float_dim();
  s.dim = fd * x.size();
  for (int i = 0; i < x.size(); ++i)
    for (int j = 0; j < x.size(); ++j) {
      if (x(i, j).is_zero()) continue;
      SparseComplex e = alg.to_sparse(x(i, j));
      for (std::size_t k = 0; k < e.val.size(); ++k) s.push(i * fd + e.row[k], j * fd + e.col[k], e.val[k]);
    }
  return s;
}

template <CoefficientAlgebra Alg>
double norm(const Alg& alg, const BMatrix<Alg>& x) {
  return operator_norm(to_sparse(alg, x));
}

// Nested expectation E^{(s)}[a_1, ..., a_m] for noncrossing s.  An interval
// block not containing 1 is evaluated, multiplied onto the factor on its
// left, and removed.
template <CoefficientAlgebra Alg>
typename Alg::Element functional_e(const Alg& alg, const Partition& s, std::span<const BMatrix<Alg>> a) {
  if (static_cast<int>(a.size()) != s.size()) throw std::invalid_argument("functional_e: arity mismatch");
  if (a.empty()) throw std::invalid_argument("functional_e: no arguments");
  if (!s.is_noncrossing()) throw std::invalid_argument("functional_e: partition must be noncrossing");
  std::vector<BMatrix<Alg>> args(a.begin(), a.end());
  std::vector<int> lab = s.labels();
  while (true) {
    const int m = static_cast<int>(args.size());
    int nb = 0;
    for (int l : lab) nb = std::max(nb, l + 1);
    if (nb == 1) {
      BMatrix<Alg> p = args[0];
      for (int k = 1; k < m; ++k) p = multiply(p, args[k]);
      return expectation(alg, p);
    }
    // an interval block with minimum > 1
    int start = -1, stop = -1;
    for (int b = 0; b < nb && start < 0; ++b) {
      int lo = m, hi = -1, cnt = 0;
      for (int k = 0; k < m; ++k)
        if (lab[k] == b) {
          lo = std::min(lo, k);
          hi = std::max(hi, k);
          ++cnt;
        }
      if (lo > 0 && hi - lo + 1 == cnt) {
        start = lo;
        stop = hi;
      }
    }
    BMatrix<Alg> p = args[start];
    for (int k = start + 1; k <= stop; ++k) p = multiply(p, args[k]);
    args[start - 1] = right_multiply(std::move(args[start - 1]), expectation(alg, p));
    args.erase(args.begin() + start, args.begin() + stop + 1);
    lab.erase(lab.begin() + start, lab.begin() + stop + 1);
    lab = Partition::from_labels(lab).labels();
  }
}

// kappa^{(p)} = sum over noncrossing s <= p of mu(s, p) E^{(s)}
template <CoefficientAlgebra Alg>
typename Alg::Element cumulant_k(const Alg& alg, const Partition& p, std::span<const BMatrix<Alg>> a) {
  auto acc = alg.zero();
  for (const auto& s : cached_members(FamilyKind::NC, p.size())) {
    if (!s.refines(p)) continue;
    std::int64_t mu = mobius(s, p);
    if (mu == 0) continue;
    acc += functional_e(alg, s, a) * GaussianRational(mu);
  }
  return acc;
}

// Sum over all assignments v: blocks -> {0..N-1} of the ordered product
// F_1[v(r_1), v(c_1)] ... F_K[v(r_K), v(c_K)], where (r_k, c_k) are block
// labels.  Blocks no factor uses contribute a factor N each.  The sum is a
// left-to-right transfer over the blocks still open after each factor, and
// zero entries are never visited.
template <CoefficientAlgebra Alg>
typename Alg::Element chain_sum(const Alg& alg, int N, const std::vector<const BMatrix<Alg>*>& f,
                                const std::vector<std::array<int, 2>>& slots, int nblocks) {
  using Element = typename Alg::Element;
  const int K = static_cast<int>(f.size());
  if (static_cast<int>(slots.size()) != K) throw std::invalid_argument("chain_sum: slot count mismatch");
  std::vector<int> first(nblocks, -1), last(nblocks, -1);
  for (int k = 0; k < K; ++k) {
    if (f[k]->size() != N) throw std::invalid_argument("chain_sum: matrix size mismatch");
    for (int b : slots[k]) {
      if (first[b] < 0) first[b] = k;
      last[b] = k;
    }
  }
  int unused = 0;
  for (int b = 0; b < nblocks; ++b) unused += first[b] < 0;
  BigInteger free_factor = 1;
  for (int u = 0; u < unused; ++u) free_factor *= N;
  const GaussianRational scale_unused{BigRational(free_factor)};
  if (K == 0) return alg.one() * scale_unused;

  // positions of the open blocks after each step
  std::vector<std::vector<int>> pos(K, std::vector<int>(nblocks, -1));
  std::vector<std::vector<int>> open(K);
  std::size_t max_open = 0;
  for (int k = 0; k < K; ++k) {
    for (int b = 0; b < nblocks; ++b)
      if (first[b] >= 0 && first[b] <= k && last[b] > k) {
        pos[k][b] = static_cast<int>(open[k].size());
        open[k].push_back(b);
      }
    max_open = std::max(max_open, open[k].size());
  }
  if (max_open * std::log2(static_cast<double>(N)) >= 63.0)
    throw std::length_error("chain_sum: too many simultaneously open indices");
  std::vector<std::uint64_t> power(max_open + 1, 1);
  for (std::size_t p = 1; p <= max_open; ++p) power[p] = power[p - 1] * static_cast<std::uint64_t>(N);

  // nonzero structure of each factor
  struct Sparsity {
    std::vector<std::vector<int>> by_row, by_col;
    std::vector<int> diag;
    std::vector<std::pair<int, int>> all;
  };
  std::vector<Sparsity> sp(K);
  for (int k = 0; k < K; ++k) {
    auto& s = sp[k];
    s.by_row.assign(N, {});
    s.by_col.assign(N, {});
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        if (!(*f[k])(i, j).is_zero()) {
          s.by_row[i].push_back(j);
          s.by_col[j].push_back(i);
          s.all.emplace_back(i, j);
          if (i == j) s.diag.push_back(i);
        }
  }

  std::unordered_map<std::uint64_t, Element> cur, next;
  cur.emplace(0, alg.one());
  for (int k = 0; k < K; ++k) {
    next.clear();
    const int r = slots[k][0], c = slots[k][1];
    const bool r_known = first[r] < k, c_known = first[c] < k;
    const auto& F = *f[k];
    for (const auto& [key, val] : cur) {
      auto value_of = [&](int b) { return static_cast<int>((key / power[pos[k - 1][b]]) % N); };
      auto emit = [&](int vr, int vc) {
        const Element& entry = F(vr, vc);
        Element prod = k == 0 ? entry : val * entry;
        if (prod.is_zero()) return;
        std::uint64_t nk = 0;
        for (std::size_t p = 0; p < open[k].size(); ++p) {
          int b = open[k][p];
          int v = b == r ? vr : b == c ? vc : value_of(b);
          nk += static_cast<std::uint64_t>(v) * power[p];
        }
        auto [it, inserted] = next.try_emplace(nk, std::move(prod));
        if (!inserted) it->second += prod;
      };
      if (r_known && c_known) {
        int vr = value_of(r), vc = value_of(c);
        if (!F(vr, vc).is_zero()) emit(vr, vc);
      } else if (r_known) {
        int vr = value_of(r);
        for (int vc : sp[k].by_row[vr]) emit(vr, vc);
      } else if (c_known) {
        int vc = value_of(c);
        for (int vr : sp[k].by_col[vc]) emit(vr, vc);
      } else if (r == c) {
        for (int v : sp[k].diag) emit(v, v);
      } else {
        for (auto [vr, vc] : sp[k].all) emit(vr, vc);
      }
    }
    cur.swap(next);
    if (cur.empty()) return alg.zero();
  }
  auto it = cur.find(0);
  if (it == cur.end()) return alg.zero();
  return unused ? it->second * scale_unused : it->second;
}

// Sum over index tuples (i_1..i_{2m}) with theta <= ker i of
// A(1)_{i_1 i_2} A(2)_{i_3 i_4} ... A(m)_{i_{2m-1} i_{2m}}; theta is any
// partition of the 2m slots.  For theta = fatten(s) with s noncrossing this
// equals N^{|s|} E^{(s)}[A(1), ..., A(m)].
template <CoefficientAlgebra Alg>
typename Alg::Element constrained_sum(const Alg& alg, const Partition& theta, std::span<const BMatrix<Alg>> a) {
  const int m = static_cast<int>(a.size());
  if (theta.size() != 2 * m) throw std::invalid_argument("constrained_sum: constraint must live on 2m slots");
  if (m == 0) throw std::invalid_argument("constrained_sum: no factors");
  std::vector<const BMatrix<Alg>*> f;
  std::vector<std::array<int, 2>> slots;
  for (int k = 0; k < m; ++k) {
    f.push_back(&a[k]);
    slots.push_back({theta.block_of(2 * k + 1), theta.block_of(2 * k + 2)});
  }
  return chain_sum(alg, a[0].size(), f, slots, theta.num_blocks());
}

struct NormCheck {
  double lhs_norm = 0;
  double bound = 0;
  bool ok = false;
};

// ||constrained_sum(theta)|| <= N^{|theta|} prod_k ||A(k)||, up to a relative
// tolerance covering the float norm estimates.
template <CoefficientAlgebra Alg>
NormCheck norm_check(const Alg& alg, const Partition& theta, std::span<const BMatrix<Alg>> a,
                     double rel_tol = 1e-6) {
  NormCheck r;
  r.lhs_norm = alg.norm(constrained_sum(alg, theta, a));
  const int N = a.empty() ? 0 : a[0].size();
  r.bound = std::pow(static_cast<double>(N), theta.num_blocks());
  for (const auto& x : a) r.bound *= norm(alg, x);
  r.ok = r.lhs_norm <= r.bound * (1 + rel_tol) + rel_tol;
  return r;
}

}  // namespace qfree
