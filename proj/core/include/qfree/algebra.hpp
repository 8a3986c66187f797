#pragma once

#include <complex>
#include <concepts>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qfree/rational.hpp"

namespace qfree {

// Triplet form of a complex matrix, used only for float norm estimates.
struct SparseComplex {
  std::size_t dim = 0;
  std::vector<std::size_t> row, col;
  std::vector<std::complex<double>> val;
  void push(std::size_t r, std::size_t c, std::complex<double> v) {
    row.push_back(r);
    col.push_back(c);
    val.push_back(v);
  }
};

std::complex<double> to_complex(const GaussianRational& z);
// Largest singular value by power iteration on X^*X with a fixed start
// vector; stops after 500 rounds or once the relative change drops below 1e-12.
double operator_norm(const SparseComplex& x);

template <class A>
concept CoefficientAlgebra = requires(const A& alg, const typename A::Element& x, typename A::Element& y,
                                      const GaussianRational& c, const std::vector<GaussianRational>& coords) {
  { alg.zero() } -> std::same_as<typename A::Element>;
  { alg.one() } -> std::same_as<typename A::Element>;
  { x + x } -> std::same_as<typename A::Element>;
  { x - x } -> std::same_as<typename A::Element>;
  { x * x } -> std::same_as<typename A::Element>;
  { x * c } -> std::same_as<typename A::Element>;
  { y += x };
  { x.is_zero() } -> std::same_as<bool>;
  { alg.adjoint(x) } -> std::same_as<typename A::Element>;
  { alg.equal(x, x) } -> std::same_as<bool>;
  { alg.to_string(x) } -> std::same_as<std::string>;
  { alg.float_dim() } -> std::convertible_to<std::size_t>;
  { alg.to_sparse(x) } -> std::same_as<SparseComplex>;
  { alg.norm(x) } -> std::same_as<double>;
  { alg.coordinates(x) } -> std::same_as<std::vector<GaussianRational>>;
  { alg.from_coordinates(coords) } -> std::same_as<typename A::Element>;
  { alg.coordinate_labels() } -> std::same_as<std::vector<std::string>>;
};

// d x d matrices over the Gaussian rationals.  A default-constructed element
// is a zero of unknown size and behaves as zero in every operation.
class DenseElement {
 public:
  DenseElement() = default;
  explicit DenseElement(int d) : d_(d), a_(static_cast<std::size_t>(d) * d) {}
  int dim() const { return d_; }
  GaussianRational& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * d_ + j]; }
  const GaussianRational& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * d_ + j]; }
  bool is_zero() const;

  DenseElement& operator+=(const DenseElement& o);
  DenseElement& operator-=(const DenseElement& o);
  friend DenseElement operator+(DenseElement a, const DenseElement& b) { return a += b; }
  friend DenseElement operator-(DenseElement a, const DenseElement& b) { return a -= b; }
  friend DenseElement operator*(const DenseElement& a, const DenseElement& b);
  friend DenseElement operator*(DenseElement a, const GaussianRational& c);
  friend bool operator==(const DenseElement& a, const DenseElement& b);

 private:
  int d_ = 0;
  std::vector<GaussianRational> a_;
};

class DenseAlgebra {
 public:
  using Element = DenseElement;
  explicit DenseAlgebra(int d);
  int dim() const { return d_; }
  Element zero() const { return Element(d_); }
  Element one() const;
  Element unit(int i, int j) const;  // matrix unit e_ij, 0-based
  Element adjoint(const Element& x) const;
  bool equal(const Element& x, const Element& y) const { return (x - y).is_zero(); }
  std::string to_string(const Element& x) const;
  std::size_t float_dim() const { return static_cast<std::size_t>(d_); }
  SparseComplex to_sparse(const Element& x) const;
  double norm(const Element& x) const { return operator_norm(to_sparse(x)); }
  // entries in row-major order
  std::vector<GaussianRational> coordinates(const Element& x) const;
  Element from_coordinates(const std::vector<GaussianRational>& c) const;
  std::vector<std::string> coordinate_labels() const;
  friend bool operator==(const DenseAlgebra&, const DenseAlgebra&) = default;

 private:
  Element densify(const Element& x) const;
  int d_;
};

// Linear combinations of E_ab(1) E_cd(2) built from two commuting systems of
// N x N matrix units.  A term key packs (a,b,c,d) into bytes; index 0 in a
// system stands for the identity of that system, which keeps E_ab(1) a single
// term.  Such sums are not unique (1 = sum_a E_aa), so comparisons go
// through canonical(), which rewrites E_NN as 1 - sum_{a<N} E_aa.
class MatrixUnitElement {
 public:
  using Term = std::pair<std::uint32_t, GaussianRational>;
  MatrixUnitElement() = default;
  static MatrixUnitElement term(std::uint32_t key, GaussianRational c = 1);
  static std::uint32_t pack(int a, int b, int c, int d) {
    return (static_cast<std::uint32_t>(a) << 24) | (static_cast<std::uint32_t>(b) << 16) |
           (static_cast<std::uint32_t>(c) << 8) | static_cast<std::uint32_t>(d);
  }
  static int part(std::uint32_t key, int k) { return static_cast<int>((key >> (24 - 8 * k)) & 0xffu); }

  const std::vector<Term>& terms() const { return t_; }
  // structurally zero; canonical() is needed to detect hidden cancellations
  bool is_zero() const { return t_.empty(); }

  MatrixUnitElement& operator+=(const MatrixUnitElement& o);
  MatrixUnitElement& operator-=(const MatrixUnitElement& o);
  friend MatrixUnitElement operator+(MatrixUnitElement a, const MatrixUnitElement& b) { return a += b; }
  friend MatrixUnitElement operator-(MatrixUnitElement a, const MatrixUnitElement& b) { return a -= b; }
  friend MatrixUnitElement operator*(const MatrixUnitElement& a, const MatrixUnitElement& b);
  friend MatrixUnitElement operator*(MatrixUnitElement a, const GaussianRational& c);
  friend bool operator==(const MatrixUnitElement& a, const MatrixUnitElement& b) { return a.t_ == b.t_; }

  static MatrixUnitElement from_unsorted(std::vector<Term> terms);

 private:
  std::vector<Term> t_;  // sorted by key, no zero coefficients
};

class MatrixUnitAlgebra {
 public:
  using Element = MatrixUnitElement;
  explicit MatrixUnitAlgebra(int n);
  int n() const { return n_; }
  Element zero() const { return {}; }
  Element one() const { return Element::term(0); }
  // E_ij(system), 1-based indices, system 1 or 2
  Element unit(int system, int i, int j) const;
  Element adjoint(const Element& x) const;
  Element canonical(const Element& x) const;
  // every term spelled out in the basis E_ab(1)E_cd(2), a,b,c,d >= 1
  Element expanded(const Element& x) const;
  bool equal(const Element& x, const Element& y) const { return canonical(x - y).is_zero(); }
  std::string to_string(const Element& x) const;
  std::size_t float_dim() const { return static_cast<std::size_t>(n_) * n_; }
  SparseComplex to_sparse(const Element& x) const;
  double norm(const Element& x) const { return operator_norm(to_sparse(x)); }
  // Coefficients on the 15 orbit sums O_kappa = sum over (a,b,c,d) with
  // kernel kappa of E_ab(1)E_cd(2), kappa running over partitions of 4
  // points.  These labels do not depend on N, which is what lets values at
  // different N be compared.  Requires N >= 4 and throws for elements that
  // are not invariant under simultaneous relabelling of indices.
  std::vector<GaussianRational> coordinates(const Element& x) const;
  Element from_coordinates(const std::vector<GaussianRational>& c) const;
  std::vector<std::string> coordinate_labels() const;
  friend bool operator==(const MatrixUnitAlgebra&, const MatrixUnitAlgebra&) = default;

 private:
  int n_;
};

static_assert(CoefficientAlgebra<DenseAlgebra>);
static_assert(CoefficientAlgebra<MatrixUnitAlgebra>);

}  // namespace qfree
