#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qfree/polynomial.hpp"

namespace qfree {

// Quotient of integer polynomials in n.  Canonical form: coprime, both
// sides with integer coefficients whose joint content is 1, denominator with
// positive leading coefficient.  Equality is therefore structural.
class RationalFunction {
 public:
  RationalFunction() : den_(1) {}
  RationalFunction(long c) : num_(c), den_(1) {}  // NOLINT
  RationalFunction(const BigRational& c) : num_(c), den_(1) { normalize(); }  // NOLINT
  RationalFunction(Polynomial p) : num_(std::move(p)), den_(1) { normalize(); }  // NOLINT
  RationalFunction(Polynomial num, Polynomial den);

  static RationalFunction n() { return RationalFunction(Polynomial::monomial(1)); }
  static RationalFunction n_pow(int k);  // k may be negative

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  // True when the denominator vanishes at x.
  bool has_pole(const BigRational& x) const;
  BigRational eval(const BigRational& x) const;
  RationalFunction inverse() const;

  RationalFunction& operator+=(const RationalFunction& o);
  RationalFunction& operator-=(const RationalFunction& o);
  RationalFunction& operator*=(const RationalFunction& o);
  RationalFunction& operator/=(const RationalFunction& o) { return *this *= o.inverse(); }
  friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { return a += b; }
  friend RationalFunction operator-(RationalFunction a, const RationalFunction& b) { return a -= b; }
  friend RationalFunction operator*(RationalFunction a, const RationalFunction& b) { return a *= b; }
  friend RationalFunction operator/(RationalFunction a, const RationalFunction& b) { return a /= b; }
  friend RationalFunction operator-(const RationalFunction& a);
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

  // e.g. "(n^2 + 1)/(n^3 - n)", "-1/(n^3 - n)", "1/n", "0".
  std::string to_string() const;
  // Accepts integers, n, + - * / ^ (nonnegative integer exponents) and parentheses.
  static RationalFunction parse(std::string_view text);

 private:
  void normalize();
  Polynomial num_;
  Polynomial den_;
};

inline std::string to_string(const RationalFunction& f) { return f.to_string(); }

// f(n) = n^exponent * (c0 + c1/n + c2/n^2 + ...).
struct LaurentExpansion {
  bool zero = false;
  int exponent = 0;
  std::vector<BigRational> coeffs;
  // coefficient of n^k, zero outside the computed window
  BigRational coeff_of_power(int k) const;
};

LaurentExpansion laurent_at_infinity(const RationalFunction& f, int order);

struct DegreeBounds {
  int num = 0;
  int den = 0;
};

struct InterpolationError : ArithmeticError {
  using ArithmeticError::ArithmeticError;
};

// Unique rational function with deg num <= bounds.num and deg den <= bounds.den
// through all samples.  Needs at least num + den + 2 samples so that the fit
// is overdetermined; every sample is rechecked against the result.
RationalFunction interpolate_rational(const std::vector<std::pair<long, BigRational>>& samples, DegreeBounds bounds);

}  // namespace qfree
