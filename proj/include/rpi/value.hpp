#ifndef RPI_VALUE_HPP
#define RPI_VALUE_HPP

#include <string>

#include "rpi/rational.hpp"

namespace rpi {

// Every scalar result in the library is a NormValue: either an exact
// rational (radius 0) or a rigorous center-radius enclosure of an
// irrational exact value.  Arithmetic propagates enclosures outward so a
// chain of operations stays rigorous end to end.
class NormValue {
 public:
  NormValue() : center_(0), radius_(0) {}
  explicit NormValue(Rational exact) : center_(std::move(exact)), radius_(0) {}

  static NormValue exact(Rational v) { return NormValue(std::move(v)); }
  static NormValue ball(Rational center, Rational radius) {
    if (radius < 0) throw PreconditionError("ball radius must be >= 0");
    NormValue v(std::move(center));
    v.radius_ = std::move(radius);
    return v;
  }
  static NormValue hull(const Rational& lo, const Rational& hi) {
    return ball((lo + hi) / 2, (hi - lo) / 2);
  }

  bool is_exact() const { return radius_ == 0; }
  const Rational& center() const { return center_; }
  const Rational& radius() const { return radius_; }
  Rational lower() const { return center_ - radius_; }
  Rational upper() const { return center_ + radius_; }

  const Rational& exact_value() const {
    if (!is_exact())
      throw PreconditionError("enclosure used where an exact value is required");
    return center_;
  }

  bool contains(const Rational& q) const {
    return rat_abs(q - center_) <= radius_;
  }
  bool contains(const NormValue& o) const {
    return lower() <= o.lower() && o.upper() <= upper();
  }

  NormValue operator+(const NormValue& o) const {
    return ball(center_ + o.center_, radius_ + o.radius_);
  }
  NormValue operator-(const NormValue& o) const {
    return ball(center_ - o.center_, radius_ + o.radius_);
  }
  NormValue operator-() const { return ball(-center_, radius_); }

  NormValue operator*(const NormValue& o) const {
    if (is_exact() && o.is_exact()) return exact(center_ * o.center_);
    Rational a = lower(), b = upper(), c = o.lower(), d = o.upper();
    Rational p1 = a * c, p2 = a * d, p3 = b * c, p4 = b * d;
    return hull(rat_min(rat_min(p1, p2), rat_min(p3, p4)),
                rat_max(rat_max(p1, p2), rat_max(p3, p4)));
  }

  NormValue scaled(const Rational& k) const {
    return ball(center_ * k, radius_ * rat_abs(k));
  }

  // Enclosure of |value|.
  NormValue abs_value() const {
    if (is_exact()) return exact(rat_abs(center_));
    Rational lo = lower(), hi = upper();
    if (lo >= 0) return *this;
    if (hi <= 0) return ball(-center_, radius_);
    return hull(Rational(0), rat_max(-lo, hi));
  }

  // Hull of max/min over the two (valid regardless of which is larger).
  static NormValue max_hull(const NormValue& a, const NormValue& b) {
    return hull(rat_max(a.lower(), b.lower()), rat_max(a.upper(), b.upper()));
  }
  static NormValue min_hull(const NormValue& a, const NormValue& b) {
    return hull(rat_min(a.lower(), b.lower()), rat_min(a.upper(), b.upper()));
  }

  // Order certified by the enclosures.
  bool definitely_le(const NormValue& o) const { return upper() <= o.lower(); }
  bool definitely_lt(const NormValue& o) const { return upper() < o.lower(); }
  bool definitely_ge(const NormValue& o) const { return o.definitely_le(*this); }

  bool same_exact(const NormValue& o) const {
    return is_exact() && o.is_exact() && center_ == o.center_;
  }
  bool operator==(const NormValue& o) const {
    return center_ == o.center_ && radius_ == o.radius_;
  }

  std::string to_string() const {
    if (is_exact()) return rat_to_string(center_);
    return "[" + rat_to_string(center_) + " +- " + rat_to_string(radius_) + "]";
  }

 private:
  Rational center_;
  Rational radius_;
};

// Spec-level Ball type; NormValue with radius possibly zero is the working
// representation, Ball is the named pair used at API boundaries.
struct Ball {
  Rational center;
  Rational radius;
};

inline NormValue to_norm_value(const Ball& b) {
  return NormValue::ball(b.center, b.radius);
}

}  // namespace rpi

#endif  // RPI_VALUE_HPP
