#ifndef RPI_PIECEWISE_HPP
#define RPI_PIECEWISE_HPP

#include <optional>
#include <utility>
#include <vector>

#include "rpi/algebraic.hpp"
#include "rpi/interval.hpp"
#include "rpi/polynomial.hpp"
#include "rpi/value.hpp"

namespace rpi {

inline const Rational kDefaultEps = Rational(1, 1000000);

class PiecewiseFunction;

namespace detail {
// Assembles a PiecewiseFunction from alternating region polynomials and
// boundary points: poly_0 | x_0 | poly_1 | x_1 | ... | x_{m-1} | poly_m.
// First and last polynomials must be constants (the tails).
struct RegionBuilder {
  std::vector<Point> xs;
  std::vector<std::optional<Rational>> vals;
  std::vector<Polynomial> polys;  // one per region, xs.size() + 1 at the end

  void region(Polynomial p) { polys.push_back(std::move(p)); }
  void boundary(Point x, std::optional<Rational> v) {
    xs.push_back(std::move(x));
    vals.push_back(std::move(v));
  }
  PiecewiseFunction finish();
};
}  // namespace detail

// Regulated function with finitely many breakpoints, polynomial pieces and
// constant tails.  Constant tails force finite limits at +-infinity, so every
// value of this type is regulated on the extended line.
//
// Breakpoint values are stored explicitly at rational breakpoints.  At
// algebraic breakpoints (produced only by lattice/extremum operations, never
// by parsing) the value is implicit -- it equals the left limit -- and every
// in-class construction keeps the function continuous there.
class PiecewiseFunction {
 public:
  PiecewiseFunction() : left_tail_(0), right_tail_(0) {}

  PiecewiseFunction(std::vector<Point> breakpoints,
                    std::vector<std::optional<Rational>> values,
                    std::vector<Polynomial> pieces, Rational left_tail,
                    Rational right_tail)
      : xs_(std::move(breakpoints)),
        vals_(std::move(values)),
        pieces_(std::move(pieces)),
        left_tail_(std::move(left_tail)),
        right_tail_(std::move(right_tail)) {
    validate();
  }

  static PiecewiseFunction constant(const Rational& c) {
    PiecewiseFunction f;
    f.left_tail_ = c;
    f.right_tail_ = c;
    return f;
  }

  static PiecewiseFunction zero() { return constant(Rational(0)); }

  // H1: 0 for x <= 0, 1 for x > 0 (left continuous).
  static PiecewiseFunction heaviside_left() {
    return PiecewiseFunction({Point(Rational(0))}, {Rational(0)}, {},
                             Rational(0), Rational(1));
  }
  // H2: 0 for x < 0, 1 for x >= 0 (right continuous).
  static PiecewiseFunction heaviside_right() {
    return PiecewiseFunction({Point(Rational(0))}, {Rational(1)}, {},
                             Rational(0), Rational(1));
  }

  std::size_t breakpoint_count() const { return xs_.size(); }
  const std::vector<Point>& breakpoints() const { return xs_; }
  const std::vector<std::optional<Rational>>& stored_values() const {
    return vals_;
  }
  const std::vector<Polynomial>& pieces() const { return pieces_; }
  const Rational& left_tail() const { return left_tail_; }
  const Rational& right_tail() const { return right_tail_; }
  const Rational& value_at_minus_infinity() const { return left_tail_; }
  const Rational& value_at_plus_infinity() const { return right_tail_; }

  bool all_breakpoints_rational() const {
    for (const auto& x : xs_)
      if (!is_rational(x)) return false;
    return true;
  }
  Rational rational_breakpoint(std::size_t i) const {
    return as_rational(xs_[i]);
  }

  // Polynomial governing the open region r in 0..m, region r = (x_{r-1}, x_r)
  // with x_{-1} = -inf and x_m = +inf.
  Polynomial region_poly(std::size_t r) const {
    if (r == 0) return Polynomial::constant(left_tail_);
    if (r == xs_.size()) return Polynomial::constant(right_tail_);
    return pieces_[r - 1];
  }
  // Polynomial governing (x_{i-1}, x_i) seen from breakpoint i.
  Polynomial poly_before(std::size_t i) const { return region_poly(i); }
  // Polynomial governing (x_i, x_{i+1}) seen from breakpoint i.
  Polynomial poly_after(std::size_t i) const { return region_poly(i + 1); }

  // Index of the first breakpoint >= x, plus whether it equals x.  When the
  // bool is false, x lies strictly inside region `index`.
  std::pair<std::size_t, bool> locate(const Point& x) const {
    for (std::size_t i = 0; i < xs_.size(); ++i) {
      int c = compare_points(x, xs_[i]);
      if (c == 0) return {i, true};
      if (c < 0) return {i, false};
    }
    return {xs_.size(), false};
  }

  NormValue value_at_breakpoint(std::size_t i,
                                const Rational& eps = kDefaultEps) const {
    if (vals_[i]) return NormValue::exact(*vals_[i]);
    return eval_at_point(poly_before(i), xs_[i], eps);
  }

  // F(x) as assigned (breakpoint values included).
  NormValue value(const Point& x, const Rational& eps = kDefaultEps) const {
    auto [i, at] = locate(x);
    if (at) return value_at_breakpoint(i, eps);
    return eval_at_point(region_poly(i), x, eps);
  }

  Rational value_rational(const Rational& x) const {
    return value(Point(x)).exact_value();
  }

  NormValue limit(const Point& x, Side side,
                  const Rational& eps = kDefaultEps) const {
    auto [i, at] = locate(x);
    Polynomial p = at ? (side == Side::Minus ? poly_before(i) : poly_after(i))
                      : region_poly(i);
    return eval_at_point(p, x, eps);
  }

  NormValue limit(const ExtReal& x, Side side,
                  const Rational& eps = kDefaultEps) const {
    if (x.is_neg_inf()) return NormValue::exact(left_tail_);
    if (x.is_pos_inf()) return NormValue::exact(right_tail_);
    return limit(Point(x.value()), side, eps);
  }

  Rational limit_rational(const Rational& x, Side side) const {
    return limit(Point(x), side).exact_value();
  }

  // ---- algebra ---------------------------------------------------------

  PiecewiseFunction scaled(const Rational& k) const {
    PiecewiseFunction r = *this;
    for (auto& v : r.vals_)
      if (v) *v *= k;
    for (auto& p : r.pieces_) p = p.scaled(k);
    r.left_tail_ *= k;
    r.right_tail_ *= k;
    return r.canonicalized();
  }

  PiecewiseFunction operator-() const { return scaled(Rational(-1)); }

  PiecewiseFunction operator+(const PiecewiseFunction& o) const {
    return zip(
        o, [](const Polynomial& a, const Polynomial& b) { return a + b; },
        [](const Rational& a, const Rational& b) { return a + b; });
  }
  PiecewiseFunction operator-(const PiecewiseFunction& o) const {
    return zip(
        o, [](const Polynomial& a, const Polynomial& b) { return a - b; },
        [](const Rational& a, const Rational& b) { return a - b; });
  }
  PiecewiseFunction operator*(const PiecewiseFunction& o) const {
    return zip(
        o, [](const Polynomial& a, const Polynomial& b) { return a * b; },
        [](const Rational& a, const Rational& b) { return a * b; });
  }

  PiecewiseFunction translated(const Rational& t) const {
    PiecewiseFunction r = *this;
    for (auto& x : r.xs_) {
      if (is_rational(x)) {
        x = Point(as_rational(x) + t);
      } else {
        const auto& a = std::get<AlgebraicPoint>(x);
        // p(x - t) vanishes at (root of p) + t
        x = Point(AlgebraicPoint(a.defining().compose_linear(Rational(1), -t),
                                 a.lo() + t, a.hi() + t));
      }
    }
    for (auto& p : r.pieces_) p = p.compose_linear(Rational(1), -t);
    return r;
  }

  // y |-> f(c - y); used by convolution.
  PiecewiseFunction reflected_about(const Rational& c) const {
    std::vector<Point> xs;
    std::vector<std::optional<Rational>> vals;
    std::vector<Polynomial> pieces;
    for (std::size_t k = xs_.size(); k-- > 0;) {
      const Point& x = xs_[k];
      if (is_rational(x)) {
        xs.emplace_back(c - as_rational(x));
      } else {
        const auto& a = std::get<AlgebraicPoint>(x);
        xs.emplace_back(AlgebraicPoint(
            a.defining().compose_linear(Rational(-1), c), c - a.hi(),
            c - a.lo()));
      }
      vals.push_back(vals_[k]);
    }
    for (std::size_t k = pieces_.size(); k-- > 0;)
      pieces.push_back(pieces_[k].compose_linear(Rational(-1), c));
    return PiecewiseFunction(std::move(xs), std::move(vals), std::move(pieces),
                             right_tail_, left_tail_)
        .canonicalized();
  }

  // ---- canonical form and comparisons ----------------------------------

  // Merges adjacent identical pieces at removable breakpoints.
  PiecewiseFunction canonicalized() const;

  // Every stored value replaced by the left limit.
  PiecewiseFunction left_continuous_version() const {
    PiecewiseFunction r = *this;
    for (std::size_t i = 0; i < r.xs_.size(); ++i) {
      if (is_rational(r.xs_[i]))
        r.vals_[i] = poly_before(i).eval(as_rational(r.xs_[i]));
      else
        r.vals_[i] = std::nullopt;
    }
    return r.canonicalized();
  }

  bool is_left_continuous() const {
    for (std::size_t i = 0; i < xs_.size(); ++i) {
      if (!vals_[i]) continue;
      if (*vals_[i] != poly_before(i).eval(as_rational(xs_[i]))) return false;
    }
    return true;
  }

  bool is_continuous() const {
    for (std::size_t i = 0; i < xs_.size(); ++i) {
      if (vals_[i]) {
        const Rational& x = as_rational(xs_[i]);
        if (*vals_[i] != poly_before(i).eval(x)) return false;
        if (*vals_[i] != poly_after(i).eval(x)) return false;
      } else {
        if (sign_at_point(poly_before(i) - poly_after(i), xs_[i]) != 0)
          return false;
      }
    }
    return true;
  }

  bool is_step() const {
    for (const auto& p : pieces_)
      if (p.degree() > 0) return false;
    return true;
  }

  // Structural equality of canonical forms.
  bool equals(const PiecewiseFunction& o) const {
    PiecewiseFunction a = canonicalized();
    PiecewiseFunction b = o.canonicalized();
    if (a.xs_.size() != b.xs_.size()) return false;
    if (a.left_tail_ != b.left_tail_ || a.right_tail_ != b.right_tail_)
      return false;
    for (std::size_t i = 0; i < a.xs_.size(); ++i) {
      if (!points_equal(a.xs_[i], b.xs_[i])) return false;
      if (i + 1 < a.xs_.size() && a.pieces_[i] != b.pieces_[i]) return false;
      const auto &va = a.vals_[i], &vb = b.vals_[i];
      if (va.has_value() != vb.has_value()) {
        // Same real point, one side explicit: compare against the left limit.
        const auto& ev = va ? va : vb;
        const PiecewiseFunction& impl = va ? b : a;
        if (sign_at_point(impl.poly_before(i) - Polynomial::constant(*ev),
                          a.xs_[i]) != 0)
          return false;
      } else if (va && *va != *vb) {
        return false;
      }
    }
    return true;
  }

  // One-sided limits agree at every point of the extended line.
  bool equivalent_to(const PiecewiseFunction& o) const {
    return left_continuous_version().equals(o.left_continuous_version());
  }

  // F1(x) = F(x-) - F(-inf): the left-continuous zero-based primitive.
  PiecewiseFunction normalized_to_br() const {
    PiecewiseFunction r = left_continuous_version();
    if (left_tail_ == 0) return r;
    Polynomial shift = Polynomial::constant(left_tail_);
    for (auto& p : r.pieces_) p = p - shift;
    for (auto& v : r.vals_)
      if (v) *v -= left_tail_;
    r.left_tail_ = 0;
    r.right_tail_ -= left_tail_;
    return r.canonicalized();
  }

  // ---- extrema ----------------------------------------------------------

  struct Candidate {
    NormValue value;
    Polynomial poly;  // set when refinable (value at an algebraic point)
    Point at = Point(Rational(0));
    bool refinable = false;
  };

  // One-sided limit values attained or approached by the function: piece
  // limits at breakpoints from both sides, interior critical values, tails.
  // With include_assigned, stored breakpoint values join the pool.
  std::vector<Candidate> extreme_candidates(bool include_assigned,
                                            const Rational& eps) const {
    std::vector<Candidate> out;
    auto push_exact = [&out](Rational v) {
      out.push_back({NormValue::exact(std::move(v)), Polynomial(),
                     Point(Rational(0)), false});
    };
    auto push_eval = [&out, &eps](const Polynomial& p, const Point& x) {
      if (is_rational(x)) {
        out.push_back({NormValue::exact(p.eval(as_rational(x))), Polynomial(),
                       Point(Rational(0)), false});
      } else {
        out.push_back({eval_at_point(p, x, eps), p, x, true});
      }
    };
    push_exact(left_tail_);
    push_exact(right_tail_);
    for (std::size_t i = 0; i < xs_.size(); ++i) {
      push_eval(poly_before(i), xs_[i]);
      push_eval(poly_after(i), xs_[i]);
      if (include_assigned && vals_[i]) push_exact(*vals_[i]);
    }
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
      const Polynomial& p = pieces_[i];
      if (p.degree() < 2) continue;
      for (const auto& r :
           isolate_roots_open(p.derivative(), xs_[i], xs_[i + 1]))
        push_eval(p, r);
    }
    return out;
  }

  static NormValue hull_max(const std::vector<Candidate>& cands,
                            const Rational& eps, bool absolute) {
    bool have_exact = false;
    Rational best;
    std::vector<NormValue> balls;
    for (const auto& c : cands) {
      NormValue v = c.refinable ? eval_at_point(c.poly, c.at, eps / 2) : c.value;
      if (absolute) v = v.abs_value();
      if (v.is_exact()) {
        if (!have_exact || v.center() > best) best = v.center();
        have_exact = true;
      } else {
        balls.push_back(v);
      }
    }
    if (!have_exact) throw PreconditionError("no exact extremum candidate");
    NormValue result = NormValue::exact(best);
    for (const auto& b : balls) {
      if (b.upper() <= best) continue;
      result = NormValue::max_hull(result, b);
    }
    return result;
  }

  static NormValue hull_min(std::vector<Candidate> cands, const Rational& eps) {
    for (auto& c : cands) {
      c.value = c.value.scaled(Rational(-1));
      if (c.refinable) c.poly = -c.poly;
    }
    return hull_max(cands, eps, false).scaled(Rational(-1));
  }

  // sup over the real line of |F(x)|, breakpoint values included; exact when
  // the winning extremum is rational, otherwise an enclosure of radius <= eps.
  NormValue sup_norm(const Rational& eps = kDefaultEps) const {
    return hull_max(extreme_candidates(true, eps), eps, true);
  }

  // Hull of the closure of the one-sided limit values (assigned values
  // excluded); used by the oscillation norm.
  std::pair<NormValue, NormValue> limit_range(
      const Rational& eps = kDefaultEps) const {
    auto cands = extreme_candidates(false, eps);
    return {hull_min(cands, eps), hull_max(cands, eps, false)};
  }

  // inf over the real line of |F(x)| (assigned values included).
  NormValue inf_abs(const Rational& eps = kDefaultEps) const {
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
      const Polynomial& p = pieces_[i];
      if (p.is_zero() || !isolate_roots_open(p, xs_[i], xs_[i + 1]).empty())
        return NormValue::exact(Rational(0));
    }
    auto cands = extreme_candidates(true, eps);
    bool have_exact = false;
    Rational best;
    std::vector<NormValue> balls;
    for (const auto& c : cands) {
      NormValue v =
          (c.refinable ? eval_at_point(c.poly, c.at, eps / 2) : c.value)
              .abs_value();
      if (v.is_exact()) {
        if (!have_exact || v.center() < best) best = v.center();
        have_exact = true;
      } else {
        balls.push_back(v);
      }
    }
    NormValue result = NormValue::exact(best);
    for (const auto& b : balls) {
      if (b.lower() >= best) continue;
      result = NormValue::min_hull(result, b);
    }
    return result;
  }

  // ---- integration helpers ---------------------------------------------

  // Continuous primitive of a density with zero tails and rational
  // breakpoints: x |-> integral over (-inf, x].
  PiecewiseFunction cumulative_integral() const {
    if (!all_breakpoints_rational())
      throw PreconditionError(
          "cumulative integral needs rational breakpoints (irrational "
          "antiderivative offsets leave the exact class)");
    if (left_tail_ != 0 || right_tail_ != 0)
      throw PreconditionError("density must have zero tails");
    if (xs_.empty()) return PiecewiseFunction::zero();
    std::vector<Point> xs = xs_;
    std::vector<std::optional<Rational>> vals;
    std::vector<Polynomial> pieces;
    Rational acc(0);
    for (std::size_t i = 0; i < xs_.size(); ++i) {
      vals.push_back(acc);
      if (i + 1 < xs_.size()) {
        const Rational& a = as_rational(xs_[i]);
        const Rational& b = as_rational(xs_[i + 1]);
        Polynomial anti = pieces_[i].antiderivative();
        pieces.push_back(anti + Polynomial::constant(acc - anti.eval(a)));
        acc += anti.eval(b) - anti.eval(a);
      }
    }
    return PiecewiseFunction(std::move(xs), std::move(vals), std::move(pieces),
                             Rational(0), acc)
        .canonicalized();
  }

  // ---- step approximation & modulus --------------------------------------

  // Piecewise-constant S with sup |F - S| <= eps; preserves left continuity.
  std::pair<PiecewiseFunction, int> step_approximate(const Rational& eps) const;

  // A uniform-regulatedness modulus: one-sided oscillation within delta of
  // every point is < eps on breakpoint-free spans, |F| < eps below -1/delta,
  // |F - F(inf)| < eps above 1/delta.
  Rational uniform_regulated_modulus(const Rational& eps) const {
    if (eps <= 0) throw PreconditionError("modulus needs eps > 0");
    Rational delta(1);
    if (!xs_.empty()) {
      Rational alpha = rat_min(point_lower_bound(xs_.front()), Rational(-1));
      Rational beta = rat_max(point_upper_bound(xs_.back()), Rational(1));
      delta = rat_min(-1 / alpha, 1 / beta);
      for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
        Rational lip = pieces_[i].derivative().abs_bound(
            point_lower_bound(xs_[i]), point_upper_bound(xs_[i + 1]));
        if (lip > 0) delta = rat_min(delta, eps / lip);
      }
    }
    return delta;
  }

  void validate() const {
    if (!xs_.empty() &&
        (vals_.size() != xs_.size() || pieces_.size() + 1 != xs_.size()))
      throw PreconditionError("inconsistent piecewise arrays");
    if (xs_.empty() && (!vals_.empty() || !pieces_.empty()))
      throw PreconditionError("constant function cannot carry pieces");
    if (xs_.empty() && left_tail_ != right_tail_)
      throw PreconditionError("tails of a breakpoint-free function must agree");
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i)
      if (compare_points(xs_[i], xs_[i + 1]) >= 0)
        throw PreconditionError("breakpoints must be strictly increasing");
    for (std::size_t i = 0; i < xs_.size(); ++i) {
      if (!vals_[i] && is_rational(xs_[i]))
        throw PreconditionError("rational breakpoints need explicit values");
      if (vals_[i] && !is_rational(xs_[i]))
        throw PreconditionError("algebraic breakpoints carry implicit values");
    }
  }

 private:
  template <typename PolyOp, typename ValOp>
  PiecewiseFunction zip(const PiecewiseFunction& o, PolyOp pop,
                        ValOp vop) const;

  std::vector<Point> xs_;
  std::vector<std::optional<Rational>> vals_;
  std::vector<Polynomial> pieces_;
  Rational left_tail_, right_tail_;
};

namespace detail {
inline PiecewiseFunction RegionBuilder::finish() {
  if (polys.size() != xs.size() + 1)
    throw PreconditionError("region builder shape mismatch");
  if (!polys.front().is_constant() || !polys.back().is_constant())
    throw PreconditionError("tail regions must be constant");
  Rational lt = polys.front().coeff(0);
  Rational rt = polys.back().coeff(0);
  std::vector<Polynomial> mid;
  for (std::size_t i = 1; i + 1 < polys.size(); ++i) mid.push_back(polys[i]);
  return PiecewiseFunction(std::move(xs), std::move(vals), std::move(mid), lt,
                           rt);
}
}  // namespace detail

inline PiecewiseFunction PiecewiseFunction::canonicalized() const {
  detail::RegionBuilder b;
  b.region(Polynomial::constant(left_tail_));
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    const Polynomial& prev = b.polys.back();
    Polynomial after = poly_after(i);
    bool removable = prev == after;
    if (removable && vals_[i])
      removable = *vals_[i] == prev.eval(as_rational(xs_[i]));
    if (removable) continue;
    b.boundary(xs_[i], vals_[i]);
    b.region(std::move(after));
  }
  return b.finish();
}

template <typename PolyOp, typename ValOp>
PiecewiseFunction PiecewiseFunction::zip(const PiecewiseFunction& o, PolyOp pop,
                                         ValOp vop) const {
  detail::RegionBuilder b;
  std::size_t i = 0, j = 0;
  b.region(pop(region_poly(0), o.region_poly(0)));
  while (i < xs_.size() || j < o.xs_.size()) {
    int c;
    if (i >= xs_.size())
      c = 1;
    else if (j >= o.xs_.size())
      c = -1;
    else
      c = compare_points(xs_[i], o.xs_[j]);
    Point x = (c <= 0) ? xs_[i] : o.xs_[j];
    std::optional<Rational> v;
    if (is_rational(x)) {
      const Rational& xr = as_rational(x);
      Rational mine = (c <= 0) ? *vals_[i] : region_poly(i).eval(xr);
      Rational theirs = (c >= 0) ? *o.vals_[j] : o.region_poly(j).eval(xr);
      v = vop(mine, theirs);
    }
    if (c <= 0) ++i;
    if (c >= 0) ++j;
    b.boundary(std::move(x), std::move(v));
    b.region(pop(region_poly(i), o.region_poly(j)));
  }
  return b.finish().canonicalized();
}

// Left-continuous primitive with F(-inf) = 0: the space the integral reads
// one-sided limits from.  Canonical on construction.
class BRFunction {
 public:
  BRFunction() : f_(PiecewiseFunction::zero()) {}
  explicit BRFunction(const PiecewiseFunction& f) : f_(f.canonicalized()) {
    if (f_.left_tail() != 0)
      throw PreconditionError("BR primitive must vanish at -infinity");
    if (!f_.is_left_continuous())
      throw PreconditionError("BR primitive must be left continuous");
  }

  static BRFunction normalize(const PiecewiseFunction& g) {
    return BRFunction(g.normalized_to_br());
  }

  const PiecewiseFunction& fn() const { return f_; }
  operator const PiecewiseFunction&() const { return f_; }

  const Rational& at_infinity() const { return f_.right_tail(); }

  bool operator==(const BRFunction& o) const { return f_.equals(o.f_); }

 private:
  PiecewiseFunction f_;
};

// Pointwise max/min of two piecewise functions; crossings become new
// breakpoints, irrational ones as algebraic points.  Ties over a whole
// subinterval merge pieces instead of manufacturing breakpoints.
inline PiecewiseFunction pointwise_extreme(const PiecewiseFunction& F,
                                           const PiecewiseFunction& G,
                                           bool take_max) {
  std::vector<Point> merged;
  {
    std::size_t i = 0, j = 0;
    const auto &a = F.breakpoints(), &b = G.breakpoints();
    while (i < a.size() || j < b.size()) {
      int c;
      if (i >= a.size())
        c = 1;
      else if (j >= b.size())
        c = -1;
      else
        c = compare_points(a[i], b[j]);
      merged.push_back(c <= 0 ? a[i] : b[j]);
      if (c <= 0) ++i;
      if (c >= 0) ++j;
    }
  }
  auto pick = [&](const Rational& x, const Rational& y) {
    return take_max ? rat_max(x, y) : rat_min(x, y);
  };

  detail::RegionBuilder b;
  std::size_t fi = 0, gi = 0;  // region indices into F and G
  for (std::size_t r = 0; r <= merged.size(); ++r) {
    const Point* lo = r == 0 ? nullptr : &merged[r - 1];
    const Point* hi = r == merged.size() ? nullptr : &merged[r];
    Polynomial pf = F.region_poly(fi);
    Polynomial pg = G.region_poly(gi);
    Polynomial d = pf - pg;
    std::vector<Point> cuts;
    if (!d.is_constant()) {
      if (lo && hi) {
        cuts = isolate_roots_open(d, *lo, *hi);
      } else {
        // Unbounded region: clip at a bound past every root of d.
        Rational big = root_bound(d) + 1;
        if (lo)
          cuts = isolate_roots_open(d, *lo, Point(big));
        else if (hi)
          cuts = isolate_roots_open(d, Point(-big), *hi);
        else
          cuts = isolate_roots(d, -big, big);
      }
    }
    std::vector<const Point*> bounds;
    bounds.push_back(lo);
    for (auto& c : cuts) bounds.push_back(&c);
    bounds.push_back(hi);
    for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
      if (s > 0) {
        const Point& cut = *bounds[s];
        std::optional<Rational> v;
        if (is_rational(cut)) v = pf.eval(as_rational(cut));  // pf == pg here
        b.boundary(cut, std::move(v));
      }
      const Point* a = bounds[s];
      const Point* bb = bounds[s + 1];
      Rational probe;
      if (a && bb)
        probe = rational_between(*a, *bb);
      else if (a)
        probe = point_upper_bound(*a) + rat_max(root_bound(d), Rational(1)) + 1;
      else if (bb)
        probe = point_lower_bound(*bb) - rat_max(root_bound(d), Rational(1)) - 1;
      else
        probe = Rational(0);
      int sd = d.is_zero() ? 0 : sign(d.eval(probe));
      b.region(sd == 0 ? pf : ((sd > 0) == take_max ? pf : pg));
    }
    if (hi) {
      std::optional<Rational> v;
      if (is_rational(*hi)) {
        const Rational& x = as_rational(*hi);
        v = pick(F.value(Point(x)).exact_value(),
                 G.value(Point(x)).exact_value());
      }
      b.boundary(*hi, std::move(v));
      if (fi < F.breakpoint_count() && points_equal(F.breakpoints()[fi], *hi))
        ++fi;
      if (gi < G.breakpoint_count() && points_equal(G.breakpoints()[gi], *hi))
        ++gi;
    }
  }
  return b.finish().canonicalized();
}

inline PiecewiseFunction pointwise_max(const PiecewiseFunction& a,
                                       const PiecewiseFunction& b) {
  return pointwise_extreme(a, b, true);
}
inline PiecewiseFunction pointwise_min(const PiecewiseFunction& a,
                                       const PiecewiseFunction& b) {
  return pointwise_extreme(a, b, false);
}

// Step construction for step_approximate, out of line for readability.
inline std::pair<PiecewiseFunction, int> PiecewiseFunction::step_approximate(
    const Rational& eps) const {
  if (eps <= 0) throw PreconditionError("step_approximate needs eps > 0");
  if (xs_.empty()) return {*this, 1};
  detail::RegionBuilder b;
  b.region(Polynomial::constant(left_tail_));
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    b.boundary(xs_[i], vals_[i]);
    if (i + 1 == xs_.size()) {
      b.region(Polynomial::constant(right_tail_));
      break;
    }
    const Polynomial& p = pieces_[i];
    if (p.degree() <= 0) {
      b.region(p);
      continue;
    }
    const Point& u = xs_[i];
    const Point& w = xs_[i + 1];
    bool pad_left = !is_rational(u);
    bool pad_right = !is_rational(w);
    Point uu = u, ww = w;
    auto osc_ok = [&](const Rational& lo, const Rational& hi) {
      auto [l, h] = p.eval_interval(lo, hi);
      return h - l <= eps;
    };
    // Shrink algebraic-end isolators until separated and the oscillation over
    // each isolator fits eps; the rational core [a, bb] then gets uniform
    // steps.
    for (int k = 0; k < detail::kMaxRefineSteps; ++k) {
      bool separated = point_upper_bound(uu) < point_lower_bound(ww);
      bool left_ok =
          !pad_left || (separated && osc_ok(point_lower_bound(uu),
                                            point_upper_bound(uu)));
      bool right_ok =
          !pad_right || (separated && osc_ok(point_lower_bound(ww),
                                             point_upper_bound(ww)));
      if (left_ok && right_ok) break;
      if (pad_left) uu = std::get<AlgebraicPoint>(uu).refined_once();
      if (pad_right) ww = std::get<AlgebraicPoint>(ww).refined_once();
    }
    Rational a = pad_left ? point_upper_bound(uu) : as_rational(u);
    Rational bb = pad_right ? point_lower_bound(ww) : as_rational(w);
    if (pad_left) {
      // constant p(a) covers (u, a]
      b.region(Polynomial::constant(p.eval(a)));
      b.boundary(Point(a), p.eval(a));
    }
    Rational len = bb - a;
    Rational lip = p.derivative().abs_bound(a, bb);
    Integer k(1);
    if (lip * len > eps) k = rat_ceil(lip * len / eps);
    Rational h = len / Rational(k);
    for (Integer j(1); j <= k; ++j) {
      Rational t = a + h * Rational(j);
      // constant p(t_j) covers (t_{j-1}, t_j]
      b.region(Polynomial::constant(p.eval(t)));
      if (j < k || pad_right) b.boundary(Point(t), p.eval(t));
    }
    if (pad_right) {
      // constant p(bb) covers (bb, w)
      b.region(Polynomial::constant(p.eval(bb)));
    }
  }
  PiecewiseFunction s = b.finish().canonicalized();
  return {s, static_cast<int>(s.breakpoint_count()) + 1};
}

}  // namespace rpi

#endif  // RPI_PIECEWISE_HPP
