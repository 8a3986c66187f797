#include "qfree/rational_function.hpp"

#include <cctype>

#include "qfree/field_matrix.hpp"

namespace qfree {

RationalFunction::RationalFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
  normalize();
}

RationalFunction RationalFunction::n_pow(int k) {
  if (k >= 0) return RationalFunction(Polynomial::monomial(k));
  return RationalFunction(Polynomial(1), Polynomial::monomial(-k));
}

void RationalFunction::normalize() {
  if (den_.is_zero()) throw ArithmeticError("rational function with zero denominator");
  if (num_.is_zero()) {
    den_ = Polynomial(1);
    return;
  }
  if (!den_.is_constant()) {
    Polynomial g = Polynomial::gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = Polynomial::divmod(num_, g).first;
      den_ = Polynomial::divmod(den_, g).first;
    }
  }
  mpz_class l = 1, g = 0;
  for (const Polynomial* p : {&num_, &den_})
    for (auto& c : p->coeffs()) {
      if (sgn(c) == 0) continue;
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
    }
  BigRational s(l, g);
  s.canonicalize();
  if (sgn(den_.lead()) < 0) s = -s;
  if (s != 1) {
    num_ *= s;
    den_ *= s;
  }
}

bool RationalFunction::has_pole(const BigRational& x) const { return sgn(den_.eval(x)) == 0; }

BigRational RationalFunction::eval(const BigRational& x) const {
  BigRational d = den_.eval(x);
  if (sgn(d) == 0) throw ArithmeticError("rational function " + to_string() + " has a pole at " + x.get_str());
  return num_.eval(x) / d;
}

RationalFunction RationalFunction::inverse() const {
  if (is_zero()) throw ArithmeticError("division by the zero rational function");
  return RationalFunction(den_, num_);
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_ == o.den_) {
    num_ += o.num_;
  } else {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ = den_ * o.den_;
  }
  normalize();
  return *this;
}

RationalFunction& RationalFunction::operator-=(const RationalFunction& o) { return *this += -o; }

RationalFunction& RationalFunction::operator*=(const RationalFunction& o) {
  if (is_zero()) return *this;
  if (o.is_zero()) return *this = RationalFunction();
  num_ = num_ * o.num_;
  den_ = den_ * o.den_;
  normalize();
  return *this;
}

RationalFunction operator-(const RationalFunction& a) {
  RationalFunction r = a;
  r.num_ = -r.num_;
  return r;
}

namespace {

bool is_single_term(const Polynomial& p) {
  int terms = 0;
  for (auto& c : p.coeffs()) terms += sgn(c) != 0;
  return terms <= 1;
}

}  // namespace

std::string RationalFunction::to_string() const {
  if (is_zero()) return "0";
  bool negative = sgn(num_.lead()) < 0;
  Polynomial num = negative ? -num_ : num_;
  std::string ns = num.to_string();
  if (den_ == Polynomial(1)) return (negative ? "-" : "") + (negative && !is_single_term(num) ? "(" + ns + ")" : ns);
  if (!is_single_term(num)) ns = "(" + ns + ")";
  std::string ds = den_.to_string();
  bool bare = den_.is_constant() || (is_single_term(den_) && den_.lead() == 1);
  if (!bare) ds = "(" + ds + ")";
  return (negative ? "-" : "") + ns + "/" + ds;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  RationalFunction parse_all() {
    RationalFunction r = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected character");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& why) {
    throw ArithmeticError("cannot parse rational function '" + std::string(s_) + "' at position " +
                          std::to_string(i_) + ": " + why);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool peek(char c) {
    skip();
    return i_ < s_.size() && s_[i_] == c;
  }
  RationalFunction expr() {
    RationalFunction r = term();
    while (true) {
      if (peek('+')) {
        ++i_;
        r += term();
      } else if (peek('-')) {
        ++i_;
        r -= term();
      } else {
        return r;
      }
    }
  }
  RationalFunction term() {
    RationalFunction r = unary();
    while (true) {
      if (peek('*')) {
        ++i_;
        r *= unary();
      } else if (peek('/')) {
        ++i_;
        RationalFunction d = unary();
        if (d.is_zero()) fail("division by zero");
        r /= d;
      } else if (peek('n') || peek('(')) {
        r *= power();
      } else {
        return r;
      }
    }
  }
  RationalFunction unary() {
    if (peek('-')) {
      ++i_;
      return -unary();
    }
    if (peek('+')) {
      ++i_;
      return unary();
    }
    return power();
  }
  RationalFunction power() {
    RationalFunction base = atom();
    if (peek('^')) {
      ++i_;
      skip();
      std::size_t start = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      if (start == i_) fail("expected a nonnegative integer exponent");
      int e = std::stoi(std::string(s_.substr(start, i_ - start)));
      RationalFunction r = 1;
      for (int k = 0; k < e; ++k) r *= base;
      return r;
    }
    return base;
  }
  RationalFunction atom() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end of input");
    char c = s_[i_];
    if (c == 'n') {
      ++i_;
      return RationalFunction::n();
    }
    if (c == '(') {
      ++i_;
      RationalFunction r = expr();
      if (!peek(')')) fail("expected ')'");
      ++i_;
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      return RationalFunction(BigRational(mpz_class(std::string(s_.substr(start, i_ - start)))));
    }
    fail("unexpected character");
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace

RationalFunction RationalFunction::parse(std::string_view text) { return Parser(text).parse_all(); }

BigRational LaurentExpansion::coeff_of_power(int k) const {
  if (zero) return 0;
  int idx = exponent - k;
  if (idx < 0 || idx >= static_cast<int>(coeffs.size())) return 0;
  return coeffs[idx];
}

LaurentExpansion laurent_at_infinity(const RationalFunction& f, int order) {
  if (order < 0) throw ArithmeticError("laurent_at_infinity: order must be nonnegative");
  LaurentExpansion out;
  if (f.is_zero()) {
    out.zero = true;
    out.coeffs.assign(order + 1, BigRational(0));
    return out;
  }
  const auto& p = f.num();
  const auto& q = f.den();
  out.exponent = p.degree() - q.degree();
  // With t = 1/n: f = n^e * P(t)/Q(t), P and Q the reversed coefficient lists.
  auto reversed = [](const Polynomial& x, int k) { return x.coeff(x.degree() - k); };
  std::vector<BigRational> c(order + 1);
  BigRational q0inv = 1 / q.lead();
  for (int k = 0; k <= order; ++k) {
    BigRational acc = reversed(p, k);
    for (int j = 1; j <= k && j <= q.degree(); ++j) acc -= reversed(q, j) * c[k - j];
    c[k] = acc * q0inv;
  }
  out.coeffs = std::move(c);
  return out;
}

RationalFunction interpolate_rational(const std::vector<std::pair<long, BigRational>>& samples, DegreeBounds b) {
  if (b.num < 0 || b.den < 0) throw InterpolationError("interpolate_rational: negative degree bound");
  std::size_t needed = static_cast<std::size_t>(b.num + b.den + 2);
  if (samples.size() < needed)
    throw InterpolationError("interpolate_rational: need at least " + std::to_string(needed) + " samples for bounds (" +
                             std::to_string(b.num) + "," + std::to_string(b.den) + "), got " +
                             std::to_string(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = i + 1; j < samples.size(); ++j)
      if (samples[i].first == samples[j].first)
        throw InterpolationError("interpolate_rational: repeated sample point " + std::to_string(samples[i].first));
  std::size_t cols = needed;
  FieldMatrix<BigRational> a(samples.size(), cols);
  for (std::size_t r = 0; r < samples.size(); ++r) {
    BigRational x = samples[r].first;
    BigRational pw = 1;
    for (int k = 0; k <= std::max(b.num, b.den); ++k) {
      if (k <= b.num) a(r, k) = pw;
      if (k <= b.den) a(r, b.num + 1 + k) = -samples[r].second * pw;
      pw *= x;
    }
  }
  auto pivots = a.rref();
  std::vector<char> is_pivot(cols, 0);
  for (auto c : pivots) is_pivot[c] = 1;
  std::size_t free_col = cols;
  for (std::size_t c = 0; c < cols; ++c)
    if (!is_pivot[c]) {
      free_col = c;
      break;
    }
  if (free_col == cols)
    throw InterpolationError("interpolate_rational: samples are inconsistent with degree bounds (" +
                             std::to_string(b.num) + "," + std::to_string(b.den) + ")");
  std::vector<BigRational> sol(cols, BigRational(0));
  sol[free_col] = 1;
  for (std::size_t r = 0; r < pivots.size(); ++r) sol[pivots[r]] = -a(r, free_col);
  std::vector<BigRational> pc(sol.begin(), sol.begin() + b.num + 1);
  std::vector<BigRational> qc(sol.begin() + b.num + 1, sol.end());
  Polynomial q(std::move(qc));
  if (q.is_zero())
    throw InterpolationError("interpolate_rational: samples are inconsistent with degree bounds (" +
                             std::to_string(b.num) + "," + std::to_string(b.den) + ")");
  RationalFunction f(Polynomial(std::move(pc)), q);
  for (auto& [x, v] : samples) {
    BigRational bx = x;
    if (f.has_pole(bx) || f.eval(bx) != v)
      throw InterpolationError("interpolate_rational: fitted function " + f.to_string() + " misses the sample at " +
                               std::to_string(x));
  }
  return f;
}

}  // namespace qfree
