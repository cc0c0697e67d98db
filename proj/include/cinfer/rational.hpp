#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cinfer {

// Expression templates off: values are stored and compared, rarely chained.
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(double x) { return x; }

// "p/q", "-p/q", "p" or a finite decimal such as "0.125" / "-1.5e-3" (exact).
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] { throw std::invalid_argument("malformed rational '" + std::string(text) + "'"); };
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  auto parse_int = [&](std::string_view s) -> BigInt {
    s = trim(s);
    bool neg = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
      neg = s.front() == '-';
      s.remove_prefix(1);
    }
    if (s.empty()) fail();
    BigInt v = 0;
    for (char c : s) {
      if (c < '0' || c > '9') fail();
      v = v * 10 + (c - '0');
    }
    return neg ? BigInt(-v) : v;
  };

  std::string_view s = trim(text);
  if (s.empty()) fail();
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_int(s.substr(0, slash));
    BigInt den = parse_int(s.substr(slash + 1));
    if (den == 0) fail();
    return Rational(num, den);
  }

  // decimal with optional exponent
  long long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    BigInt ev = parse_int(s.substr(e + 1));
    if (ev > 4000 || ev < -4000) fail();
    exponent = ev.convert_to<long long>();
    s = s.substr(0, e);
  }
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  BigInt digits = 0;
  bool seen_digit = false, seen_point = false;
  for (char c : s) {
    if (c == '.') {
      if (seen_point) fail();
      seen_point = true;
      continue;
    }
    if (c < '0' || c > '9') fail();
    seen_digit = true;
    digits = digits * 10 + (c - '0');
    if (seen_point) --exponent;
  }
  if (!seen_digit) fail();
  BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
  Rational value = exponent < 0 ? Rational(digits, scale) : Rational(digits * scale);
  return neg ? Rational(-value) : value;
}

inline std::string format_rational(const Rational& q) {
  const auto num = boost::multiprecision::numerator(q);
  const auto den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

// Numeric traits used by the generic set-function code.
template <typename T>
struct NumericTraits;

template <>
struct NumericTraits<Rational> {
  static constexpr bool exact = true;
  static bool is_zero(const Rational& v, double /*tol*/) { return v == 0; }
  static bool is_negative(const Rational& v, double /*tol*/) { return v < 0; }
  static bool is_integer(const Rational& v) { return boost::multiprecision::denominator(v) == 1; }
  static Rational parse(std::string_view s) { return parse_rational(s); }
  static std::string format(const Rational& v) { return format_rational(v); }
};

template <>
struct NumericTraits<double> {
  static constexpr bool exact = false;
  static bool is_zero(double v, double tol) { return std::abs(v) <= tol; }
  static bool is_negative(double v, double tol) { return v < -tol; }
  static bool is_integer(double v) { return std::isfinite(v) && v == std::round(v); }
  static double parse(std::string_view s) { return to_double(parse_rational(s)); }
  static std::string format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }
};

}  // namespace cinfer
