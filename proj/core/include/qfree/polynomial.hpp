#pragma once

#include <utility>
#include <vector>

#include "qfree/rational.hpp"

namespace qfree {

// Dense univariate polynomial over Q in the variable n; c[i] is the
// coefficient of n^i and the leading coefficient is nonzero (zero polynomial
// has no coefficients).
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(long c) : Polynomial(BigRational(c)) {}  // NOLINT
  Polynomial(const BigRational& c);  // NOLINT
  explicit Polynomial(std::vector<BigRational> coeffs);
  static Polynomial monomial(int degree, const BigRational& c = 1);

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  const std::vector<BigRational>& coeffs() const { return c_; }
  BigRational coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : BigRational(0); }
  const BigRational& lead() const { return c_.back(); }
  int low_degree() const;  // index of lowest nonzero coefficient

  BigRational eval(const BigRational& x) const;
  Polynomial monic() const;
  // lcm of coefficient denominators over gcd of numerators; multiplying by it
  // yields a primitive integer polynomial with the same sign.
  BigRational content_normalizer() const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const BigRational& s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(const Polynomial& a);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const BigRational& s) { return a *= s; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  // Quotient and remainder; throws on division by zero.
  static std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b);
  // Monic gcd; gcd(0,0) = 0.
  static Polynomial gcd(Polynomial a, Polynomial b);

  // Integer-coefficient rendering in the variable name, e.g. "n^3 - n".
  std::string to_string(const char* var = "n") const;

 private:
  void trim();
  std::vector<BigRational> c_;
};

}  // namespace qfree
