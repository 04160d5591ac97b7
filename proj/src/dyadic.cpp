#include "cantor/dyadic.hpp"

#include <algorithm>
#include <regex>

#include "cantor/errors.hpp"

namespace cantor {

Dyadic::Dyadic(BigInt numerator, unsigned exponent) : numerator_(std::move(numerator)), exponent_(exponent) {
  if (numerator_ < 0) throw Error(ErrorKind::PreconditionFailed, "negative dyadic");
  normalize();
}

void Dyadic::normalize() {
  if (numerator_ == 0) {
    exponent_ = 0;
    return;
  }
  while (exponent_ > 0 && (numerator_ & 1) == 0) {
    numerator_ >>= 1;
    --exponent_;
  }
}

Rational Dyadic::to_rational() const {
  BigInt den = BigInt(1) << exponent_;
  return Rational(numerator_, den);
}

std::string Dyadic::str() const { return numerator_.str() + "/2^" + std::to_string(exponent_); }

Dyadic Dyadic::parse(const std::string& text) {
  static const std::regex re(R"(^(0|[1-9][0-9]*)/2\^(0|[1-9][0-9]*)$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw Error(ErrorKind::ParseError, "bad dyadic '" + text + "'");
  Dyadic d(BigInt(m[1].str()), static_cast<unsigned>(std::stoul(m[2].str())));
  if (d.str() != text) throw Error(ErrorKind::ParseError, "non-canonical dyadic '" + text + "'");
  return d;
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  const unsigned e = std::max(a.exponent_, b.exponent_);
  return {(a.numerator_ << (e - a.exponent_)) + (b.numerator_ << (e - b.exponent_)), e};
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) {
  const unsigned e = std::max(a.exponent_, b.exponent_);
  BigInt n = (a.numerator_ << (e - a.exponent_)) - (b.numerator_ << (e - b.exponent_));
  if (n < 0) throw Error(ErrorKind::PreconditionFailed, "dyadic subtraction below zero");
  return {n, e};
}

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
  return {a.numerator_ * b.numerator_, a.exponent_ + b.exponent_};
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  const unsigned e = std::max(a.exponent_, b.exponent_);
  const BigInt x = a.numerator_ << (e - a.exponent_);
  const BigInt y = b.numerator_ << (e - b.exponent_);
  if (x < y) return std::strong_ordering::less;
  if (x > y) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string rational_str(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

Rational parse_rational(const std::string& text) {
  static const std::regex re(R"(^(-?(?:0|[1-9][0-9]*))/([1-9][0-9]*)$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw Error(ErrorKind::ParseError, "bad rational '" + text + "'");
  Rational r(BigInt(m[1].str()), BigInt(m[2].str()));
  if (rational_str(r) != text) throw Error(ErrorKind::ParseError, "non-canonical rational '" + text + "'");
  return r;
}

}  // namespace cantor
