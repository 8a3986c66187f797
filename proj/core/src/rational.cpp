#include "qfree/rational.hpp"

#include <cctype>

namespace qfree {

std::string to_string(const BigRational& q) { return q.get_str(); }

BigRational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw ArithmeticError("empty rational literal");
  BigRational q;
  if (q.set_str(s, 10) != 0 || q.get_den() == 0) throw ArithmeticError("malformed rational '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  BigRational r = re_ * o.re_ - im_ * o.im_;
  BigRational i = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

GaussianRational GaussianRational::inverse() const {
  BigRational d = norm2();
  if (sgn(d) == 0) throw ArithmeticError("division by zero");
  return {re_ / d, -im_ / d};
}

std::string GaussianRational::to_string() const {
  if (sgn(im_) == 0) return re_.get_str();
  std::string imag;
  if (im_ == 1)
    imag = "i";
  else if (im_ == -1)
    imag = "-i";
  else
    imag = im_.get_str() + "i";
  if (sgn(re_) == 0) return imag;
  return re_.get_str() + (sgn(im_) > 0 ? "+" : "") + imag;
}

GaussianRational GaussianRational::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw ArithmeticError("empty Gaussian rational literal");
  if (s.back() != 'i') return GaussianRational(parse_rational(s));
  // split "a+bi" at the last sign that is not the leading one
  std::size_t cut = std::string::npos;
  for (std::size_t k = s.size() - 1; k > 0; --k)
    if (s[k] == '+' || s[k] == '-') {
      cut = k;
      break;
    }
  std::string re_part = cut == std::string::npos ? "" : s.substr(0, cut);
  std::string im_part = s.substr(cut == std::string::npos ? 0 : cut, s.size() - (cut == std::string::npos ? 0 : cut) - 1);
  if (im_part.empty() || im_part == "+") im_part = "1";
  if (im_part == "-") im_part = "-1";
  if (im_part[0] == '+') im_part.erase(0, 1);
  BigRational re = re_part.empty() ? BigRational(0) : parse_rational(re_part);
  return {re, parse_rational(im_part)};
}

}  // namespace qfree
