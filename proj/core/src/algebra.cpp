#include "qfree/algebra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <random>
#include <sstream>
#include <stdexcept>

#include "qfree/partitions.hpp"

namespace qfree {

std::complex<double> to_complex(const GaussianRational& z) { return {z.re().get_d(), z.im().get_d()}; }

double operator_norm(const SparseComplex& x) {
  const std::size_t n = x.dim;
  if (n == 0 || x.val.empty()) return 0.0;
  std::mt19937_64 rng(0x5eedULL);
  std::normal_distribution<double> g;
  std::vector<std::complex<double>> v(n), w(n), u(n);
  for (auto& z : v) z = {g(rng), g(rng)};
  auto normalize = [](std::vector<std::complex<double>>& z) {
    double s = 0;
    for (auto& c : z) s += std::norm(c);
    s = std::sqrt(s);
    if (s > 0)
      for (auto& c : z) c /= s;
    return s;
  };
  normalize(v);
  double lambda = 0;
  for (int it = 0; it < 500; ++it) {
    std::fill(w.begin(), w.end(), 0.0);
    std::fill(u.begin(), u.end(), 0.0);
    for (std::size_t k = 0; k < x.val.size(); ++k) w[x.row[k]] += x.val[k] * v[x.col[k]];
    for (std::size_t k = 0; k < x.val.size(); ++k) u[x.col[k]] += std::conj(x.val[k]) * w[x.row[k]];
    double next = normalize(u);
    if (next == 0) return 0.0;
    v.swap(u);
    bool done = it > 0 && std::abs(next - lambda) <= 1e-12 * next;
    lambda = next;
    if (done) break;
  }
  return std::sqrt(lambda);
}

// ---- dense ----

bool DenseElement::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const GaussianRational& z) { return z.is_zero(); });
}

DenseElement& DenseElement::operator+=(const DenseElement& o) {
  if (o.d_ == 0) return *this;
  if (d_ == 0) return *this = o;
  if (d_ != o.d_) throw std::invalid_argument("dense elements of different size");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
  return *this;
}

DenseElement& DenseElement::operator-=(const DenseElement& o) {
  if (o.d_ == 0) return *this;
  if (d_ == 0) *this = DenseElement(o.d_);
  if (d_ != o.d_) throw std::invalid_argument("dense elements of different size");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
  return *this;
}

DenseElement operator*(const DenseElement& a, const DenseElement& b) {
  if (a.d_ == 0 || b.d_ == 0) return {};
  if (a.d_ != b.d_) throw std::invalid_argument("dense elements of different size");
  const int d = a.d_;
  DenseElement r(d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      const auto& x = a(i, k);
      if (x.is_zero()) continue;
      for (int j = 0; j < d; ++j)
        if (!b(k, j).is_zero()) r(i, j) += x * b(k, j);
    }
  return r;
}

DenseElement operator*(DenseElement a, const GaussianRational& c) {
  for (auto& z : a.a_) z *= c;
  return a;
}

bool operator==(const DenseElement& a, const DenseElement& b) {
  if (a.d_ == b.d_) return a.a_ == b.a_;
  if (a.d_ == 0) return b.is_zero();
  if (b.d_ == 0) return a.is_zero();
  return false;
}

DenseAlgebra::DenseAlgebra(int d) : d_(d) {
  if (d < 1) throw std::invalid_argument("dense algebra needs d >= 1");
}

DenseElement DenseAlgebra::densify(const Element& x) const { return x.dim() == 0 ? zero() : x; }

DenseElement DenseAlgebra::one() const {
  Element e(d_);
  for (int i = 0; i < d_; ++i) e(i, i) = 1;
  return e;
}

DenseElement DenseAlgebra::unit(int i, int j) const {
  Element e(d_);
  e(i, j) = 1;
  return e;
}

DenseElement DenseAlgebra::adjoint(const Element& x0) const {
  Element x = densify(x0), r(d_);
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j) r(i, j) = x(j, i).conj();
  return r;
}

std::string DenseAlgebra::to_string(const Element& x0) const {
  Element x = densify(x0);
  std::ostringstream os;
  os << '[';
  for (int i = 0; i < d_; ++i) {
    if (i) os << "; ";
    for (int j = 0; j < d_; ++j) os << (j ? ", " : "") << x(i, j).to_string();
  }
  os << ']';
  return os.str();
}

SparseComplex DenseAlgebra::to_sparse(const Element& x) const {
  SparseComplex s;
  s.dim = float_dim();
  if (x.dim() == 0) return s;
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j)
      if (!x(i, j).is_zero()) s.push(i, j, qfree::to_complex(x(i, j)));
  return s;
}

std::vector<GaussianRational> DenseAlgebra::coordinates(const Element& x0) const {
  Element x = densify(x0);
  std::vector<GaussianRational> c;
  c.reserve(static_cast<std::size_t>(d_) * d_);
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j) c.push_back(x(i, j));
  return c;
}

DenseElement DenseAlgebra::from_coordinates(const std::vector<GaussianRational>& c) const {
  if (c.size() != static_cast<std::size_t>(d_) * d_) throw std::invalid_argument("wrong number of coordinates");
  Element e(d_);
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j) e(i, j) = c[static_cast<std::size_t>(i) * d_ + j];
  return e;
}

std::vector<std::string> DenseAlgebra::coordinate_labels() const {
  std::vector<std::string> out;
  for (int i = 1; i <= d_; ++i)
    for (int j = 1; j <= d_; ++j) out.push_back("e" + std::to_string(i) + std::to_string(j));
  return out;
}

// ---- matrix units ----

namespace {

using Term = MatrixUnitElement::Term;

// product of one system's components; false when it vanishes
inline bool compose(int a, int b, int c, int d, int& ra, int& rb) {
  if (a == 0) {
    ra = c;
    rb = d;
    return true;
  }
  if (c == 0) {
    ra = a;
    rb = b;
    return true;
  }
  if (b != c) return false;
  ra = a;
  rb = d;
  return true;
}

std::vector<Term> merge(const std::vector<Term>& x, const std::vector<Term>& y, bool subtract) {
  std::vector<Term> r;
  r.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      r.push_back(x[i++]);
    } else if (i == x.size() || y[j].first < x[i].first) {
      r.push_back(y[j++]);
      if (subtract) r.back().second = -r.back().second;
    } else {
      GaussianRational c = x[i].second;
      if (subtract)
        c -= y[j].second;
      else
        c += y[j].second;
      if (!c.is_zero()) r.emplace_back(x[i].first, std::move(c));
      ++i;
      ++j;
    }
  }
  return r;
}

// kernel class of (a,b,c,d) among the 15 partitions of 4 points
struct KernelClasses {
  std::vector<Partition> parts;
  std::array<int, 256> by_code{};
  KernelClasses() {
    parts = enumerate(FamilyKind::ALL, 4).members;
    by_code.fill(-1);
    for (std::size_t k = 0; k < parts.size(); ++k) {
      const auto& l = parts[k].labels();
      by_code[l[0] * 64 + l[1] * 16 + l[2] * 4 + l[3]] = static_cast<int>(k);
    }
  }
  int classify(const std::array<int, 4>& v) const {
    std::array<int, 4> lab{};
    int next = 0;
    for (int i = 0; i < 4; ++i) {
      lab[i] = -1;
      for (int j = 0; j < i; ++j)
        if (v[j] == v[i]) {
          lab[i] = lab[j];
          break;
        }
      if (lab[i] < 0) lab[i] = next++;
    }
    return by_code[lab[0] * 64 + lab[1] * 16 + lab[2] * 4 + lab[3]];
  }
};

const KernelClasses& kernel_classes() {
  static const KernelClasses k;
  return k;
}

}  // namespace

MatrixUnitElement MatrixUnitElement::term(std::uint32_t key, GaussianRational c) {
  MatrixUnitElement e;
  if (!c.is_zero()) e.t_.emplace_back(key, std::move(c));
  return e;
}

MatrixUnitElement MatrixUnitElement::from_unsorted(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
  MatrixUnitElement e;
  e.t_.reserve(terms.size());
  for (auto& t : terms) {
    if (!e.t_.empty() && e.t_.back().first == t.first) {
      e.t_.back().second += t.second;
      if (e.t_.back().second.is_zero()) e.t_.pop_back();
    } else if (!t.second.is_zero()) {
      e.t_.push_back(std::move(t));
    }
  }
  return e;
}

MatrixUnitElement& MatrixUnitElement::operator+=(const MatrixUnitElement& o) {
  if (o.t_.empty()) return *this;
  if (t_.empty()) return *this = o;
  t_ = merge(t_, o.t_, false);
  return *this;
}

MatrixUnitElement& MatrixUnitElement::operator-=(const MatrixUnitElement& o) {
  if (o.t_.empty()) return *this;
  t_ = merge(t_, o.t_, true);
  return *this;
}

MatrixUnitElement operator*(const MatrixUnitElement& x, const MatrixUnitElement& y) {
  std::vector<Term> out;
  for (const auto& [kx, cx] : x.t_)
    for (const auto& [ky, cy] : y.t_) {
      int a, b, c, d;
      using E = MatrixUnitElement;
      if (!compose(E::part(kx, 0), E::part(kx, 1), E::part(ky, 0), E::part(ky, 1), a, b)) continue;
      if (!compose(E::part(kx, 2), E::part(kx, 3), E::part(ky, 2), E::part(ky, 3), c, d)) continue;
      out.emplace_back(E::pack(a, b, c, d), cx * cy);
    }
  if (out.size() == 1) {
    MatrixUnitElement e;
    if (!out[0].second.is_zero()) e.t_ = std::move(out);
    return e;
  }
  return MatrixUnitElement::from_unsorted(std::move(out));
}

MatrixUnitElement operator*(MatrixUnitElement a, const GaussianRational& c) {
  if (c.is_zero()) return {};
  for (auto& t : a.t_) t.second *= c;
  return a;
}

MatrixUnitAlgebra::MatrixUnitAlgebra(int n) : n_(n) {
  if (n < 1 || n > 255) throw std::invalid_argument("matrix unit size must be in [1, 255]");
}

MatrixUnitElement MatrixUnitAlgebra::unit(int system, int i, int j) const {
  if (i < 1 || i > n_ || j < 1 || j > n_) throw std::out_of_range("matrix unit index out of range");
  if (system == 1) return Element::term(Element::pack(i, j, 0, 0));
  if (system == 2) return Element::term(Element::pack(0, 0, i, j));
  throw std::invalid_argument("matrix unit system must be 1 or 2");
}

MatrixUnitElement MatrixUnitAlgebra::adjoint(const Element& x) const {
  std::vector<Term> out;
  for (const auto& [k, c] : x.terms())
    out.emplace_back(Element::pack(Element::part(k, 1), Element::part(k, 0), Element::part(k, 3), Element::part(k, 2)),
                     c.conj());
  return Element::from_unsorted(std::move(out));
}

namespace {

// signed expansion of one system component
template <class F>
void expand_component(int n, int a, int b, bool canonical, F&& emit) {
  if (canonical) {
    if (a == n && b == n) {
      emit(0, 0, 1);
      for (int k = 1; k < n; ++k) emit(k, k, -1);
    } else {
      emit(a, b, 1);
    }
  } else {
    if (a == 0) {
      for (int k = 1; k <= n; ++k) emit(k, k, 1);
    } else {
      emit(a, b, 1);
    }
  }
}

MatrixUnitElement rewrite(int n, const MatrixUnitElement& x, bool canonical) {
  std::vector<Term> out;
  for (const auto& [key, c] : x.terms()) {
    using E = MatrixUnitElement;
    expand_component(n, E::part(key, 0), E::part(key, 1), canonical, [&](int a, int b, int s1) {
      expand_component(n, E::part(key, 2), E::part(key, 3), canonical, [&](int cc, int d, int s2) {
        GaussianRational v = c;
        if (s1 * s2 < 0) v = -v;
        out.emplace_back(E::pack(a, b, cc, d), std::move(v));
      });
    });
  }
  return MatrixUnitElement::from_unsorted(std::move(out));
}

}  // namespace

MatrixUnitElement MatrixUnitAlgebra::canonical(const Element& x) const { return rewrite(n_, x, true); }
MatrixUnitElement MatrixUnitAlgebra::expanded(const Element& x) const { return rewrite(n_, x, false); }

std::string MatrixUnitAlgebra::to_string(const Element& x) const {
  Element c = canonical(x);
  if (c.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, v] : c.terms()) {
    if (!first) os << " + ";
    first = false;
    int a = Element::part(key, 0), b = Element::part(key, 1), cc = Element::part(key, 2), d = Element::part(key, 3);
    std::string mono;
    if (a) mono += "E" + std::to_string(a) + "," + std::to_string(b) + "(1)";
    if (cc) mono += "E" + std::to_string(cc) + "," + std::to_string(d) + "(2)";
    if (mono.empty()) {
      os << v.to_string();
    } else if (v == GaussianRational(1)) {
      os << mono;
    } else {
      os << '(' << v.to_string() << ')' << mono;
    }
  }
  return os.str();
}

SparseComplex MatrixUnitAlgebra::to_sparse(const Element& x) const {
  SparseComplex s;
  s.dim = float_dim();
  const std::size_t n = static_cast<std::size_t>(n_);
  std::map<std::pair<std::size_t, std::size_t>, std::complex<double>> acc;
  const Element ex = expanded(x);
  for (const auto& [key, v] : ex.terms()) {
    std::size_t a = Element::part(key, 0) - 1, b = Element::part(key, 1) - 1;
    std::size_t c = Element::part(key, 2) - 1, d = Element::part(key, 3) - 1;
    acc[{a * n + c, b * n + d}] += qfree::to_complex(v);
  }
  for (const auto& [rc, v] : acc) s.push(rc.first, rc.second, v);
  return s;
}

std::vector<GaussianRational> MatrixUnitAlgebra::coordinates(const Element& x) const {
  if (n_ < 4) throw std::domain_error("matrix unit coordinates need N >= 4");
  const auto& kc = kernel_classes();
  std::vector<GaussianRational> coef(kc.parts.size());
  std::vector<long> seen(kc.parts.size(), 0);
  const Element ex = expanded(x);
  for (const auto& [key, v] : ex.terms()) {
    std::array<int, 4> t{Element::part(key, 0), Element::part(key, 1), Element::part(key, 2), Element::part(key, 3)};
    int k = kc.classify(t);
    if (seen[k] == 0) {
      coef[k] = v;
    } else if (coef[k] != v) {
      throw std::domain_error("element is not invariant under relabelling of matrix unit indices");
    }
    ++seen[k];
  }
  for (std::size_t k = 0; k < coef.size(); ++k) {
    if (seen[k] == 0) continue;
    long expected = 1;
    for (int b = 0; b < kc.parts[k].num_blocks(); ++b) expected *= n_ - b;
    if (seen[k] != expected)
      throw std::domain_error("element is not invariant under relabelling of matrix unit indices");
  }
  return coef;
}

MatrixUnitElement MatrixUnitAlgebra::from_coordinates(const std::vector<GaussianRational>& c) const {
  const auto& kc = kernel_classes();
  const std::size_t K = kc.parts.size();
  if (c.size() != K) throw std::invalid_argument("wrong number of coordinates");
  // O_k = sum_{k <= j} mu(k, j) F_j where F_j sums over index tuples constant
  // on the blocks of j.  F_j is short when a block is exactly {1,2} or {3,4}:
  // that pair sums to the identity of its system.
  std::vector<GaussianRational> f(K);
  for (std::size_t k = 0; k < K; ++k) {
    if (c[k].is_zero()) continue;
    for (std::size_t j = 0; j < K; ++j) {
      if (!kc.parts[k].refines(kc.parts[j])) continue;
      long mu = 1;
      for (const auto& blk : kc.parts[j].blocks()) {
        std::set<int> merged;
        for (int x : blk) merged.insert(kc.parts[k].labels()[x - 1]);
        for (long t = 2; t < static_cast<long>(merged.size()); ++t) mu *= t;
        if (merged.size() % 2 == 0) mu = -mu;
      }
      f[j] += c[k] * GaussianRational(mu);
    }
  }
  std::vector<Term> out;
  for (std::size_t j = 0; j < K; ++j) {
    if (f[j].is_zero()) continue;
    const auto& lab = kc.parts[j].labels();
    const bool id1 = lab[0] == lab[1] && lab[0] != lab[2] && lab[0] != lab[3];
    const bool id2 = lab[2] == lab[3] && lab[2] != lab[0] && lab[2] != lab[1];
    const int nb = kc.parts[j].num_blocks();
    std::vector<int> val(nb, 1);
    while (true) {
      int a = id1 ? 0 : val[lab[0]], b = id1 ? 0 : val[lab[1]];
      int cc = id2 ? 0 : val[lab[2]], d = id2 ? 0 : val[lab[3]];
      out.emplace_back(Element::pack(a, b, cc, d), f[j]);
      // advance only the block values that appear explicitly
      int p = nb - 1;
      for (; p >= 0; --p) {
        bool used = (!id1 && (lab[0] == p || lab[1] == p)) || (!id2 && (lab[2] == p || lab[3] == p));
        if (!used) continue;
        if (val[p] < n_) {
          ++val[p];
          break;
        }
        val[p] = 1;
      }
      if (p < 0) break;
    }
  }
  return Element::from_unsorted(std::move(out));
}

std::vector<std::string> MatrixUnitAlgebra::coordinate_labels() const {
  // points 1..4 are the indices a,b,c,d of E_ab(1)E_cd(2)
  std::vector<std::string> out;
  for (const auto& p : kernel_classes().parts) out.push_back("O" + p.to_string());
  return out;
}

}  // namespace qfree
