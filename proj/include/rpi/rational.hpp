#ifndef RPI_RATIONAL_HPP
#define RPI_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "rpi/errors.hpp"

namespace rpi {

// Exact scalar type.  cpp_rational keeps gcd(num,den)=1 and den>0 as a
// class invariant, which is exactly the canonical form every module relies
// on for equality.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline int sign(const Rational& q) { return q.sign(); }

inline Rational rat_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline const Rational& rat_min(const Rational& a, const Rational& b) {
  return a < b ? a : b;
}

inline const Rational& rat_max(const Rational& a, const Rational& b) {
  return a < b ? b : a;
}

inline Rational rat_pow(const Rational& q, unsigned n) {
  Rational r(1);
  Rational base = q;
  for (unsigned k = n; k; k >>= 1) {
    if (k & 1) r *= base;
    base *= base;
  }
  return r;
}

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Integer rat_floor(const Rational& q) {
  return floor_div(numerator(q), denominator(q));
}

inline Integer rat_ceil(const Rational& q) { return -rat_floor(-q); }

// Serialized form is "p/q", or just "p" when q=1.
inline std::string rat_to_string(const Rational& q) {
  std::string s = numerator(q).str();
  if (denominator(q) != 1) {
    s += "/";
    s += denominator(q).str();
  }
  return s;
}

inline Rational rat_parse(const std::string& text, const std::string& where = "") {
  auto fail = [&]() -> Rational {
    throw ParseError("malformed rational '" + text + "'", where);
  };
  if (text.empty()) return fail();
  std::size_t slash = text.find('/');
  auto is_int = [](const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  try {
    if (slash == std::string::npos) {
      if (!is_int(text)) return fail();
      return Rational(Integer(text));
    }
    std::string num = text.substr(0, slash);
    std::string den = text.substr(slash + 1);
    if (!is_int(num) || !is_int(den)) return fail();
    Integer d(den);
    if (d == 0) return fail();
    return Rational(Integer(num), d);
  } catch (const std::exception&) {
    return fail();
  }
}

}  // namespace rpi

#endif  // RPI_RATIONAL_HPP
