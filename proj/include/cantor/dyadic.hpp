#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <string>

namespace cantor {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact non-negative value numerator / 2^exponent, kept canonical
/// (numerator odd, or zero with exponent 0).
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(BigInt numerator, unsigned exponent);
  static Dyadic zero() { return {}; }
  static Dyadic one() { return {BigInt(1), 0}; }
  /// 2^{-exponent}
  static Dyadic unit(unsigned exponent) { return {BigInt(1), exponent}; }

  const BigInt& numerator() const noexcept { return numerator_; }
  unsigned exponent() const noexcept { return exponent_; }
  bool is_zero() const noexcept { return numerator_ == 0; }

  Rational to_rational() const;

  /// "p/2^q"
  std::string str() const;
  /// Parses the "p/2^q" form; rejects non-canonical spellings.
  static Dyadic parse(const std::string& text);

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  /// Requires a >= b.
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
  friend bool operator==(const Dyadic& a, const Dyadic& b) = default;
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

 private:
  void normalize();
  BigInt numerator_{0};
  unsigned exponent_{0};
};

/// "p/q" in lowest terms (q may be 1).
std::string rational_str(const Rational& r);
Rational parse_rational(const std::string& text);

inline bool operator<(const Dyadic& a, const Rational& b) { return a.to_rational() < b; }
inline bool operator>(const Dyadic& a, const Rational& b) { return a.to_rational() > b; }

}  // namespace cantor
