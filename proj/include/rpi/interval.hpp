#ifndef RPI_INTERVAL_HPP
#define RPI_INTERVAL_HPP

#include <string>

#include "rpi/rational.hpp"

namespace rpi {

// Extended real endpoint.
class ExtReal {
 public:
  enum Kind { NegInf = -1, Finite = 0, PosInf = 1 };

  ExtReal() : kind_(Finite), v_(0) {}
  explicit ExtReal(Rational v) : kind_(Finite), v_(std::move(v)) {}
  static ExtReal neg_inf() { return ExtReal(NegInf); }
  static ExtReal pos_inf() { return ExtReal(PosInf); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Finite; }
  bool is_neg_inf() const { return kind_ == NegInf; }
  bool is_pos_inf() const { return kind_ == PosInf; }
  const Rational& value() const {
    if (!is_finite()) throw PreconditionError("infinite endpoint has no value");
    return v_;
  }

  int compare(const ExtReal& o) const {
    if (kind_ != o.kind_) return kind_ < o.kind_ ? -1 : 1;
    if (kind_ != Finite) return 0;
    return v_ < o.v_ ? -1 : (v_ == o.v_ ? 0 : 1);
  }
  bool operator<(const ExtReal& o) const { return compare(o) < 0; }
  bool operator<=(const ExtReal& o) const { return compare(o) <= 0; }
  bool operator==(const ExtReal& o) const { return compare(o) == 0; }
  bool operator!=(const ExtReal& o) const { return compare(o) != 0; }

  std::string to_string() const {
    switch (kind_) {
      case NegInf: return "-inf";
      case PosInf: return "inf";
      default: return rat_to_string(v_);
    }
  }

  static ExtReal parse(const std::string& s, const std::string& where = "") {
    if (s == "-inf" || s == "-INF" || s == "-oo") return neg_inf();
    if (s == "inf" || s == "+inf" || s == "INF" || s == "oo") return pos_inf();
    return ExtReal(rat_parse(s, where));
  }

 private:
  explicit ExtReal(Kind k) : kind_(k), v_(0) {}
  Kind kind_;
  Rational v_;
};

// Which one-sided limit of the primitive an endpoint reads.
enum class Side { Minus, Plus };

inline Side flip(Side s) { return s == Side::Minus ? Side::Plus : Side::Minus; }

// An interval of the extended line with explicit sidedness.  The four finite
// forms (a,b), (a,b], [a,b), [a,b] read different one-sided limits of a
// discontinuous primitive and are genuinely different integrals.  Singleton
// {a} is encoded as [a,a].  Sides are ignored (forced open) at infinite
// endpoints.
class IntervalSpec {
 public:
  IntervalSpec(ExtReal lower, bool lower_closed, ExtReal upper, bool upper_closed)
      : lower_(std::move(lower)),
        upper_(std::move(upper)),
        lower_closed_(lower_closed),
        upper_closed_(upper_closed) {
    if (!lower_.is_finite()) lower_closed_ = false;
    if (!upper_.is_finite()) upper_closed_ = false;
    if (upper_ < lower_)
      throw PreconditionError("interval endpoints out of order");
    if (lower_ == upper_ && lower_.is_finite() &&
        !(lower_closed_ && upper_closed_))
      throw PreconditionError("degenerate interval must be a singleton [a,a]");
  }

  static IntervalSpec whole_line() {
    return IntervalSpec(ExtReal::neg_inf(), false, ExtReal::pos_inf(), false);
  }
  static IntervalSpec singleton(const Rational& a) {
    return IntervalSpec(ExtReal(a), true, ExtReal(a), true);
  }
  static IntervalSpec open(const Rational& a, const Rational& b) {
    return IntervalSpec(ExtReal(a), false, ExtReal(b), false);
  }
  static IntervalSpec closed(const Rational& a, const Rational& b) {
    return IntervalSpec(ExtReal(a), true, ExtReal(b), true);
  }

  const ExtReal& lower() const { return lower_; }
  const ExtReal& upper() const { return upper_; }
  bool lower_closed() const { return lower_closed_; }
  bool upper_closed() const { return upper_closed_; }
  bool is_singleton() const {
    return lower_.is_finite() && lower_ == upper_;
  }
  bool is_empty_interior() const { return is_singleton(); }

  bool contains(const Rational& x) const {
    ExtReal p{x};
    int cl = lower_.compare(p);
    if (cl > 0 || (cl == 0 && !lower_closed_)) return false;
    int cu = upper_.compare(p);
    if (cu < 0 || (cu == 0 && !upper_closed_)) return false;
    return true;
  }

  // Side of the primitive limit read at each endpoint: integral over I is
  // F(upper_limit_side) - F(lower_limit_side).
  Side lower_limit_side() const {
    return lower_closed_ ? Side::Minus : Side::Plus;
  }
  Side upper_limit_side() const {
    return upper_closed_ ? Side::Plus : Side::Minus;
  }

  std::string to_string() const {
    if (is_singleton()) return "{" + lower_.to_string() + "}";
    if (lower_.is_neg_inf() && upper_.is_pos_inf()) return "R";
    std::string s;
    s += lower_closed_ ? '[' : '(';
    s += lower_.to_string();
    s += ",";
    s += upper_.to_string();
    s += upper_closed_ ? ']' : ')';
    return s;
  }

  // Accepts "(a,b)", "(a,b]", "[a,b)", "[a,b]", "{a}", "R" with rational or
  // -inf/inf endpoints.
  static IntervalSpec parse(const std::string& text) {
    auto strip = [](std::string s) {
      std::size_t b = s.find_first_not_of(" \t");
      std::size_t e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string s = strip(text);
    if (s.empty()) throw ParseError("empty interval expression");
    if (s == "R" || s == "r") return whole_line();
    if (s.front() == '{') {
      if (s.back() != '}')
        throw ParseError("unterminated singleton", "'" + text + "'");
      Rational a = rat_parse(strip(s.substr(1, s.size() - 2)), "'" + text + "'");
      return singleton(a);
    }
    if ((s.front() != '(' && s.front() != '[') ||
        (s.back() != ')' && s.back() != ']'))
      throw ParseError("interval must be bracketed", "'" + text + "'");
    bool lc = s.front() == '[';
    bool uc = s.back() == ']';
    std::string body = s.substr(1, s.size() - 2);
    std::size_t comma = body.find(',');
    if (comma == std::string::npos)
      throw ParseError("interval needs two endpoints", "'" + text + "'");
    ExtReal lo = ExtReal::parse(strip(body.substr(0, comma)), "'" + text + "'");
    ExtReal hi = ExtReal::parse(strip(body.substr(comma + 1)), "'" + text + "'");
    return IntervalSpec(lo, lc, hi, uc);
  }

  bool operator==(const IntervalSpec& o) const {
    return lower_ == o.lower_ && upper_ == o.upper_ &&
           lower_closed_ == o.lower_closed_ && upper_closed_ == o.upper_closed_;
  }

 private:
  ExtReal lower_, upper_;
  bool lower_closed_, upper_closed_;
};

}  // namespace rpi

#endif  // RPI_INTERVAL_HPP
