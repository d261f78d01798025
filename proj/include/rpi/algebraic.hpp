#ifndef RPI_ALGEBRAIC_HPP
#define RPI_ALGEBRAIC_HPP

#include <utility>
#include <variant>
#include <vector>

#include "rpi/polynomial.hpp"
#include "rpi/value.hpp"

namespace rpi {

namespace detail {
// Refinement depth cap.  Comparisons and enclosures all decide within a few
// dozen halvings for sane inputs; hitting the cap is reported, never papered
// over with an approximation.
inline constexpr int kMaxRefineSteps = 512;
}  // namespace detail

// A real algebraic number: unique root of a square-free defining polynomial
// inside an open rational isolator with a sign change across it.
class AlgebraicPoint {
 public:
  AlgebraicPoint(Polynomial defining, Rational lo, Rational hi)
      : p_(std::move(defining)), lo_(std::move(lo)), hi_(std::move(hi)) {
    sign_lo_ = p_.sign_at(lo_);
    int sign_hi = p_.sign_at(hi_);
    if (sign_lo_ == 0 || sign_hi == 0 || sign_lo_ == sign_hi)
      throw PreconditionError("isolator must have a sign change with nonzero ends");
  }

  const Polynomial& defining() const { return p_; }
  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  Rational width() const { return hi_ - lo_; }

  // One bisection step.  The defining polynomial never vanishes at the
  // midpoint: construction sites (isolate_roots) peel off rational roots
  // before creating an AlgebraicPoint.
  AlgebraicPoint refined_once() const {
    Rational mid = (lo_ + hi_) / 2;
    int sm = p_.sign_at(mid);
    if (sm == 0)
      throw DegenerateInputError("algebraic point has a rational defining root");
    AlgebraicPoint r(*this);
    if (sm == sign_lo_)
      r.lo_ = mid;
    else
      r.hi_ = mid;
    return r;
  }

  AlgebraicPoint refined_to_width(const Rational& w) const {
    AlgebraicPoint r(*this);
    for (int i = 0; i < detail::kMaxRefineSteps && r.width() > w; ++i)
      r = r.refined_once();
    if (r.width() > w)
      throw ResourceError("isolator refinement budget exhausted");
    return r;
  }

  // Ball of radius <= eps containing the root; deterministic bisection.
  NormValue enclosure(const Rational& eps) const {
    if (eps <= 0) throw PreconditionError("refine needs eps > 0");
    AlgebraicPoint r = refined_to_width(2 * eps);
    return NormValue::hull(r.lo_, r.hi_);
  }

  // Exact three-way comparison against a rational; no refinement needed.
  int compare(const Rational& q) const {
    if (q <= lo_) return 1;   // root > lo >= q
    if (q >= hi_) return -1;  // root < hi <= q
    int sq = p_.sign_at(q);
    if (sq == 0) return 0;
    return sq == sign_lo_ ? 1 : -1;  // no sign change yet => root to the right
  }

  // Exact three-way comparison of two algebraic points.  Equality is decided
  // by a gcd root count on the overlap (no resultants); order by refinement.
  static int compare(const AlgebraicPoint& a, const AlgebraicPoint& b) {
    if (a.hi_ <= b.lo_) return -1;
    if (b.hi_ <= a.lo_) return 1;
    Polynomial g = Polynomial::gcd(a.p_, b.p_);
    if (g.degree() >= 1) {
      Rational lo = rat_max(a.lo_, b.lo_);
      Rational hi = rat_min(a.hi_, b.hi_);
      // Common roots in the open overlap equal both points (each isolator
      // holds exactly one root of its defining polynomial).
      if (g.sign_at(lo) == 0 || g.sign_at(hi) == 0)
        throw DegenerateInputError("algebraic point with rational defining root");
      auto chain = sturm_chain(g);
      if (sturm_count(chain, lo, hi) > 0) return 0;
    }
    AlgebraicPoint x = a, y = b;
    for (int i = 0; i < detail::kMaxRefineSteps; ++i) {
      if (x.hi_ <= y.lo_) return -1;
      if (y.hi_ <= x.lo_) return 1;
      if (x.width() >= y.width())
        x = x.refined_once();
      else
        y = y.refined_once();
    }
    throw ResourceError("algebraic comparison budget exhausted");
  }

 private:
  Polynomial p_;
  Rational lo_, hi_;
  int sign_lo_;
};

// A breakpoint coordinate: rational, or algebraic when produced by lattice
// and extremum operations.
using Point = std::variant<Rational, AlgebraicPoint>;

inline bool is_rational(const Point& p) { return p.index() == 0; }
inline const Rational& as_rational(const Point& p) {
  return std::get<Rational>(p);
}

inline int compare_points(const Point& a, const Point& b) {
  if (is_rational(a) && is_rational(b)) {
    const Rational &x = as_rational(a), &y = as_rational(b);
    return x < y ? -1 : (x == y ? 0 : 1);
  }
  if (is_rational(a)) return -std::get<AlgebraicPoint>(b).compare(as_rational(a));
  if (is_rational(b)) return std::get<AlgebraicPoint>(a).compare(as_rational(b));
  return AlgebraicPoint::compare(std::get<AlgebraicPoint>(a),
                                 std::get<AlgebraicPoint>(b));
}

inline bool points_equal(const Point& a, const Point& b) {
  return compare_points(a, b) == 0;
}

inline NormValue point_enclosure(const Point& p, const Rational& eps) {
  if (is_rational(p)) return NormValue::exact(as_rational(p));
  return std::get<AlgebraicPoint>(p).enclosure(eps);
}

// Rational lower/upper bounds for a point (for bracketing searches).
inline Rational point_lower_bound(const Point& p) {
  return is_rational(p) ? as_rational(p) : std::get<AlgebraicPoint>(p).lo();
}
inline Rational point_upper_bound(const Point& p) {
  return is_rational(p) ? as_rational(p) : std::get<AlgebraicPoint>(p).hi();
}

// A rational strictly between two points (requires a < b).
inline Rational rational_between(const Point& a, const Point& b) {
  if (is_rational(a) && is_rational(b)) {
    if (!(as_rational(a) < as_rational(b)))
      throw PreconditionError("rational_between needs a < b");
    return (as_rational(a) + as_rational(b)) / 2;
  }
  Point x = a, y = b;
  for (int i = 0; i < detail::kMaxRefineSteps; ++i) {
    Rational xhi = point_upper_bound(x);
    Rational ylo = point_lower_bound(y);
    // Strict gap between the bounds puts the midpoint strictly between the
    // underlying reals whichever sides are algebraic.
    if (xhi < ylo) return (xhi + ylo) / 2;
    if (!is_rational(x)) x = std::get<AlgebraicPoint>(x).refined_once();
    if (!is_rational(y)) y = std::get<AlgebraicPoint>(y).refined_once();
  }
  throw ResourceError("separation budget exhausted in rational_between");
}

// Exact sign of poly at an algebraic point: zero is decided by a gcd root
// count, nonzero by interval refinement.
inline int sign_at_point(const Polynomial& poly, const Point& pt) {
  if (poly.is_zero()) return 0;
  if (is_rational(pt)) return poly.sign_at(as_rational(pt));
  const AlgebraicPoint& a = std::get<AlgebraicPoint>(pt);
  Polynomial g = Polynomial::gcd(poly, a.defining());
  if (g.degree() >= 1) {
    if (g.sign_at(a.lo()) == 0 || g.sign_at(a.hi()) == 0)
      throw DegenerateInputError("algebraic point with rational defining root");
    auto chain = sturm_chain(g);
    if (sturm_count(chain, a.lo(), a.hi()) > 0) return 0;
  }
  AlgebraicPoint r = a;
  for (int i = 0; i < detail::kMaxRefineSteps; ++i) {
    auto [lo, hi] = poly.eval_interval(r.lo(), r.hi());
    if (lo > 0) return 1;
    if (hi < 0) return -1;
    r = r.refined_once();
  }
  throw ResourceError("sign determination budget exhausted");
}

// Enclosure of poly(pt) with radius <= eps.
inline NormValue eval_at_point(const Polynomial& poly, const Point& pt,
                               const Rational& eps) {
  if (is_rational(pt)) return NormValue::exact(poly.eval(as_rational(pt)));
  AlgebraicPoint r = std::get<AlgebraicPoint>(pt);
  for (int i = 0; i < detail::kMaxRefineSteps; ++i) {
    auto [lo, hi] = poly.eval_interval(r.lo(), r.hi());
    if (hi - lo <= 2 * eps) return NormValue::hull(lo, hi);
    r = r.refined_once();
  }
  throw ResourceError("evaluation enclosure budget exhausted");
}

namespace detail {

// Decide whether the unique root of square-free q in the open isolator
// (lo,hi) is rational; returns it if so.  Rational roots u/v of the
// primitive integer form have v | leading coefficient, so y = lc*x turns
// them into integer roots of a monic polynomial: refine until the scaled
// isolator holds at most one integer and test it.
inline bool rational_root_in(const Polynomial& q, Rational lo, Rational hi,
                             int sign_lo, Rational* out) {
  Integer lc_den(1);
  for (const auto& c : q.coefficients())
    lc_den = boost::multiprecision::lcm(lc_den, denominator(c));
  Rational lead = q.leading() * Rational(lc_den);
  Integer lc = numerator(lead);  // integer leading coeff of the int poly
  if (lc < 0) lc = -lc;
  for (int i = 0; i < kMaxRefineSteps; ++i) {
    if (Rational(lc) * (hi - lo) < 1) {
      Integer m = rat_ceil(Rational(lc) * lo);
      Rational candidate = Rational(m) / Rational(lc);
      if (candidate > lo && candidate < hi && q.sign_at(candidate) == 0) {
        *out = candidate;
        return true;
      }
      return false;
    }
    Rational mid = (lo + hi) / 2;
    int sm = q.sign_at(mid);
    if (sm == 0) {
      *out = mid;
      return true;
    }
    if (sm == sign_lo)
      lo = mid;
    else
      hi = mid;
  }
  throw ResourceError("rational root detection budget exhausted");
}

}  // namespace detail

// All distinct real roots of p in the closed interval [lo, hi], increasing;
// rational roots come back as Rational, the rest as AlgebraicPoint.
inline std::vector<Point> isolate_roots(const Polynomial& p, const Rational& lo,
                                        const Rational& hi) {
  if (p.is_zero())
    throw DegenerateInputError("cannot isolate roots of the zero polynomial");
  std::vector<Point> roots;
  if (lo > hi) return roots;
  Polynomial q = p.squarefree_part();
  if (q.is_constant()) return roots;

  if (q.sign_at(lo) == 0) roots.emplace_back(lo);
  bool hi_is_root = (lo != hi) && q.sign_at(hi) == 0;
  // Deflate endpoint roots so every Sturm endpoint below is sign-definite.
  if (q.sign_at(lo) == 0) q = q.divmod(Polynomial({-lo, Rational(1)})).first;
  if (!q.is_constant() && q.sign_at(hi) == 0)
    q = q.divmod(Polynomial({-hi, Rational(1)})).first;

  if (!q.is_constant() && lo < hi) {
    auto chain = sturm_chain(q);
    // Split point inside the middle half with q nonzero; q has finitely many
    // roots so the shrinking probe sequence exits quickly.
    auto split_point = [&](const Rational& a, const Rational& b) {
      Rational mid = (a + b) / 2;
      Rational step = (b - a) / 8;
      for (int i = 0; i < detail::kMaxRefineSteps; ++i) {
        if (q.sign_at(mid) != 0) return mid;
        mid += step;
        step /= 2;
      }
      throw ResourceError("split point probe budget exhausted");
    };
    struct Span {
      Rational lo, hi;
      int count;
    };
    std::vector<Span> stack;
    std::vector<Span> isolated;
    int total = sturm_count(chain, lo, hi);
    if (total > 0) stack.push_back({lo, hi, total});
    while (!stack.empty()) {
      Span s = stack.back();
      stack.pop_back();
      if (s.count == 1) {
        isolated.push_back(s);
        continue;
      }
      Rational t = split_point(s.lo, s.hi);
      int left = sturm_count(chain, s.lo, t);
      int right = s.count - left;
      if (right > 0) stack.push_back({t, s.hi, right});
      if (left > 0) stack.push_back({s.lo, t, left});
    }
    std::sort(isolated.begin(), isolated.end(),
              [](const Span& a, const Span& b) { return a.lo < b.lo; });
    for (const auto& s : isolated) {
      Rational rational_root;
      if (detail::rational_root_in(q, s.lo, s.hi, q.sign_at(s.lo),
                                   &rational_root)) {
        roots.emplace_back(rational_root);
      } else {
        roots.emplace_back(AlgebraicPoint(q, s.lo, s.hi));
      }
    }
  }
  if (hi_is_root) roots.emplace_back(hi);
  return roots;
}

// Roots strictly inside the open span (a, b) given as Points.
inline std::vector<Point> isolate_roots_open(const Polynomial& p, const Point& a,
                                             const Point& b) {
  Rational lo = point_lower_bound(a);
  Rational hi = point_upper_bound(b);
  std::vector<Point> all = isolate_roots(p, lo, hi);
  std::vector<Point> inside;
  for (auto& r : all) {
    if (compare_points(r, a) > 0 && compare_points(r, b) < 0)
      inside.push_back(std::move(r));
  }
  return inside;
}

}  // namespace rpi

#endif  // RPI_ALGEBRAIC_HPP
