#ifndef RPI_CALCULUS_HPP
#define RPI_CALCULUS_HPP

#include <optional>
#include <utility>
#include <vector>

#include "rpi/product.hpp"

namespace rpi {

// Piecewise-linear change-of-variables map.  Pieces cover the whole line
// (tail pieces included, so limits at +-infinity may be infinite); each piece
// is monotone by construction since it is linear.
class MonotonePiecewiseMap {
 public:
  enum class Tag { Increasing, Decreasing, Constant };

  // pieces.size() == breakpoints.size() + 1; piece i governs the region
  // between breakpoints i-1 and i.
  MonotonePiecewiseMap(std::vector<Rational> breakpoints,
                       std::vector<Rational> values,
                       std::vector<Polynomial> pieces)
      : xs_(std::move(breakpoints)),
        vals_(std::move(values)),
        pieces_(std::move(pieces)) {
    if (pieces_.size() != xs_.size() + 1 || vals_.size() != xs_.size())
      throw PreconditionError("map arrays inconsistent");
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i)
      if (!(xs_[i] < xs_[i + 1]))
        throw PreconditionError("map breakpoints must increase");
    for (const auto& p : pieces_)
      if (p.degree() > 1)
        throw PreconditionError("map pieces must have degree <= 1");
  }

  static MonotonePiecewiseMap identity() {
    return MonotonePiecewiseMap({}, {}, {Polynomial::identity()});
  }
  // y |-> a y + b
  static MonotonePiecewiseMap linear(const Rational& a, const Rational& b) {
    return MonotonePiecewiseMap({}, {}, {Polynomial({b, a})});
  }

  const std::vector<Rational>& breakpoints() const { return xs_; }
  const std::vector<Rational>& values() const { return vals_; }
  const std::vector<Polynomial>& pieces() const { return pieces_; }
  std::size_t region_count() const { return pieces_.size(); }
  const Polynomial& region(std::size_t r) const { return pieces_[r]; }

  Tag tag(std::size_t r) const {
    int s = sign(pieces_[r].coeff(1));
    return s > 0 ? Tag::Increasing : (s < 0 ? Tag::Decreasing : Tag::Constant);
  }

  // Region index strictly containing x, or the breakpoint hit.
  std::pair<std::size_t, bool> locate(const Rational& x) const {
    for (std::size_t i = 0; i < xs_.size(); ++i) {
      if (x == xs_[i]) return {i, true};
      if (x < xs_[i]) return {i, false};
    }
    return {xs_.size(), false};
  }

  Rational value(const Rational& x) const {
    auto [i, at] = locate(x);
    return at ? vals_[i] : pieces_[i].eval(x);
  }

  // One-sided limit of G at a sided endpoint of the extended line.
  ExtReal limit(const ExtReal& a, Side side) const {
    if (a.is_neg_inf() || a.is_pos_inf()) {
      const Polynomial& p = a.is_neg_inf() ? pieces_.front() : pieces_.back();
      int s = sign(p.coeff(1));
      if (s == 0) return ExtReal(p.coeff(0));
      bool to_pos = a.is_pos_inf() ? (s > 0) : (s < 0);
      return to_pos ? ExtReal::pos_inf() : ExtReal::neg_inf();
    }
    auto [i, at] = locate(a.value());
    const Polynomial& p =
        at ? (side == Side::Minus ? pieces_[i] : pieces_[i + 1])
           : pieces_[i];
    return ExtReal(p.eval(a.value()));
  }

  // Tag of the piece adjacent to a on the given side.
  Tag side_tag(const ExtReal& a, Side side) const {
    if (a.is_neg_inf()) return tag(0);
    if (a.is_pos_inf()) return tag(pieces_.size() - 1);
    auto [i, at] = locate(a.value());
    return at ? tag(side == Side::Minus ? i : i + 1) : tag(i);
  }

 private:
  std::vector<Rational> xs_;
  std::vector<Rational> vals_;
  std::vector<Polynomial> pieces_;
};

namespace detail {

inline Point preimage_point(const Point& w, const Rational& a,
                            const Rational& b) {
  // solve a y + b = w
  if (is_rational(w)) return Point((as_rational(w) - b) / a);
  const auto& alg = std::get<AlgebraicPoint>(w);
  Polynomial defining = alg.defining().compose_linear(a, b);
  Rational y1 = (alg.lo() - b) / a, y2 = (alg.hi() - b) / a;
  return Point(AlgebraicPoint(defining, rat_min(y1, y2), rat_max(y1, y2)));
}

}  // namespace detail

// F composed with a piecewise-linear map, as a raw piecewise function; the
// preimages of F's breakpoints under each linear piece become breakpoints.
inline PiecewiseFunction compose_primitive(const PiecewiseFunction& F,
                                           const MonotonePiecewiseMap& G) {
  detail::RegionBuilder b;
  for (std::size_t r = 0; r < G.region_count(); ++r) {
    if (r > 0)
      b.boundary(Point(G.breakpoints()[r - 1]),
                 F.value(Point(G.values()[r - 1])).exact_value());
    const Polynomial& piece = G.region(r);
    Rational slope = piece.coeff(1), offset = piece.coeff(0);
    if (slope == 0) {
      b.region(Polynomial::constant(F.value(Point(offset)).exact_value()));
      continue;
    }
    bool has_lo = r > 0, has_hi = r + 1 < G.region_count();
    Point lo_pt = Point(has_lo ? G.breakpoints()[r - 1] : Rational(0));
    Point hi_pt = Point(has_hi ? G.breakpoints()[r] : Rational(0));
    // preimages of F's breakpoints strictly inside the region, ascending in y
    std::vector<Point> cuts;
    for (const auto& w : F.breakpoints()) {
      Point y = detail::preimage_point(w, slope, offset);
      if (has_lo && compare_points(y, lo_pt) <= 0) continue;
      if (has_hi && compare_points(y, hi_pt) >= 0) continue;
      cuts.push_back(std::move(y));
    }
    if (slope < 0) std::reverse(cuts.begin(), cuts.end());
    for (std::size_t s = 0; s <= cuts.size(); ++s) {
      if (s > 0) {
        const Point& y = cuts[s - 1];
        std::optional<Rational> v;
        if (is_rational(y))
          v = F.value(Point(piece.eval(as_rational(y)))).exact_value();
        b.boundary(y, std::move(v));
      }
      const Point* pa = s > 0 ? &cuts[s - 1] : (has_lo ? &lo_pt : nullptr);
      const Point* pb = s < cuts.size() ? &cuts[s] : (has_hi ? &hi_pt : nullptr);
      Rational probe;
      if (pa && pb)
        probe = rational_between(*pa, *pb);
      else if (pa)
        probe = point_upper_bound(*pa) + 1;
      else if (pb)
        probe = point_lower_bound(*pb) - 1;
      else
        probe = Rational(0);
      Rational image = piece.eval(probe);
      auto [idx, at] = F.locate(Point(image));
      if (at) throw PreconditionError("probe landed on a breakpoint");
      b.region(F.region_poly(idx).compose_linear(slope, offset));
    }
  }
  return b.finish().canonicalized();
}

// (f o G) G' := (F o G)'.
inline Distribution compose(const Distribution& f,
                            const MonotonePiecewiseMap& G) {
  return Distribution::from_primitive(
      compose_primitive(f.primitive_fn(), G));
}

struct SidedEndpoint {
  ExtReal at;
  Side side;  // ignored at infinities

  static SidedEndpoint parse(const std::string& text) {
    if (text == "-inf") return {ExtReal::neg_inf(), Side::Plus};
    if (text == "inf" || text == "+inf") return {ExtReal::pos_inf(), Side::Minus};
    if (text.empty()) throw ParseError("empty endpoint");
    char c = text.back();
    if (c != '+' && c != '-')
      throw ParseError("sided endpoint must end in + or -", "'" + text + "'");
    Rational a = rat_parse(text.substr(0, text.size() - 1), "'" + text + "'");
    return {ExtReal(a), c == '+' ? Side::Plus : Side::Minus};
  }

  std::string to_string() const {
    if (!at.is_finite()) return at.to_string();
    return at.to_string() + (side == Side::Plus ? "+" : "-");
  }
};

struct ResolvedEndpoint {
  ExtReal image;                  // G(a eps)
  std::optional<Side> sigma;      // dropped at infinite images
};

struct ChangeOfVariablesResult {
  NormValue value;                 // F(G(a2 e2) s2) - F(G(a1 e1) s1)
  NormValue composed_path_value;   // (F o G)(a2 e2) - (F o G)(a1 e1)
  ResolvedEndpoint resolved1, resolved2;
};

namespace detail {

inline ResolvedEndpoint resolve_endpoint(const MonotonePiecewiseMap& G,
                                         const SidedEndpoint& e) {
  ResolvedEndpoint r;
  r.image = G.limit(e.at, e.side);
  if (!r.image.is_finite()) return r;
  MonotonePiecewiseMap::Tag t = G.side_tag(e.at, e.side);
  switch (t) {
    case MonotonePiecewiseMap::Tag::Increasing: {
      Side s = e.side;
      if (e.at.is_neg_inf()) s = Side::Plus;
      if (e.at.is_pos_inf()) s = Side::Minus;
      r.sigma = s;
      break;
    }
    case MonotonePiecewiseMap::Tag::Decreasing: {
      Side s = flip(e.side);
      if (e.at.is_neg_inf()) s = Side::Minus;
      if (e.at.is_pos_inf()) s = Side::Plus;
      r.sigma = s;
      break;
    }
    case MonotonePiecewiseMap::Tag::Constant:
      // constant stretch: F's left continuity reads the value as F(c-)
      r.sigma = Side::Minus;
      break;
  }
  return r;
}

}  // namespace detail

// Side-resolution change of variables: the value of the composed integral
// between sided endpoints, computed both through the composed primitive and
// through the resolved F(G(a eps) sigma) endpoint reads.
inline ChangeOfVariablesResult change_of_variables(
    const Distribution& f, const MonotonePiecewiseMap& G,
    const SidedEndpoint& e1, const SidedEndpoint& e2,
    const Rational& eps = kDefaultEps) {
  const PiecewiseFunction& F = f.primitive_fn();
  PiecewiseFunction composed = compose_primitive(F, G);
  ChangeOfVariablesResult out;
  out.resolved1 = detail::resolve_endpoint(G, e1);
  out.resolved2 = detail::resolve_endpoint(G, e2);
  auto read = [&](const ResolvedEndpoint& r) {
    if (!r.image.is_finite())
      return NormValue::exact(r.image.is_neg_inf() ? F.left_tail()
                                                   : F.right_tail());
    return F.limit(r.image, *r.sigma, eps / 2);
  };
  out.value = read(out.resolved2) - read(out.resolved1);
  out.composed_path_value = composed.limit(e2.at, e2.side, eps / 2) -
                            composed.limit(e1.at, e1.side, eps / 2);
  return out;
}

// ---------------------------------------------------------------------------
// Taylor expansion with regulated remainder
// ---------------------------------------------------------------------------

namespace detail {

// n-th derivative of a piecewise function as a piecewise function with
// left-limit values (the stored values only matter through the limits).
inline PiecewiseFunction derivative_pw(const PiecewiseFunction& f, int n) {
  if (n == 0) return f;
  if (!f.all_breakpoints_rational())
    throw PreconditionError("derivative needs rational breakpoints");
  std::vector<Point> xs = f.breakpoints();
  if (xs.empty()) return PiecewiseFunction::zero();
  std::vector<std::optional<Rational>> vals;
  std::vector<Polynomial> pieces;
  for (const auto& p : f.pieces()) {
    Polynomial d = p;
    for (int k = 0; k < n; ++k) d = d.derivative();
    pieces.push_back(d);
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Polynomial d = f.poly_before(i);
    for (int k = 0; k < n; ++k) d = d.derivative();
    vals.push_back(d.eval(as_rational(xs[i])));
  }
  return PiecewiseFunction(std::move(xs), std::move(vals), std::move(pieces),
                           Rational(0), Rational(0))
      .canonicalized();
}

// sup over [a, b) of |one-sided limits of h|, h piecewise with rational data.
inline NormValue sup_abs_on(const PiecewiseFunction& h, const Rational& a,
                            const Rational& b, const Rational& eps) {
  std::vector<PiecewiseFunction::Candidate> cands;
  auto push = [&](NormValue v) {
    cands.push_back({std::move(v), Polynomial(), Point(Rational(0)), false});
  };
  push(h.limit(Point(a), Side::Plus, eps));
  push(h.limit(Point(b), Side::Minus, eps));
  for (std::size_t i = 0; i < h.breakpoint_count(); ++i) {
    if (!is_rational(h.breakpoints()[i])) continue;
    const Rational& x = as_rational(h.breakpoints()[i]);
    if (x <= a || x >= b) continue;
    push(h.limit(Point(x), Side::Minus, eps));
    push(h.limit(Point(x), Side::Plus, eps));
    push(h.value(Point(x), eps));
  }
  // interior critical points of the pieces overlapping (a, b)
  for (std::size_t i = 0; i + 1 < h.breakpoint_count(); ++i) {
    const Polynomial& p = h.pieces()[i];
    if (p.degree() < 2) continue;
    Rational lo = rat_max(a, as_rational(h.breakpoints()[i]));
    Rational hi = rat_min(b, as_rational(h.breakpoints()[i + 1]));
    if (!(lo < hi)) continue;
    for (const auto& r : isolate_roots(p.derivative(), lo, hi))
      cands.push_back({eval_at_point(p, r, eps), p, r, !is_rational(r)});
  }
  // tails overlapping [a, b)
  if (!h.breakpoint_count() ||
      a < point_upper_bound(h.breakpoints().front()))
    push(NormValue::exact(h.left_tail()));
  if (!h.breakpoint_count() ||
      b > point_lower_bound(h.breakpoints().back()))
    push(NormValue::exact(h.right_tail()));
  return PiecewiseFunction::hull_max(cands, eps, true);
}

}  // namespace detail

struct TaylorBoundReport {
  Rational x;
  NormValue remainder;        // |R_n(x)| via the integral formula
  NormValue estimate1;        // sup |f^(n)(t)-f^(n)(a)| (x-a)^n / n!
  NormValue alexiewicz;       // ||R_n chi_(a,x)||
  NormValue l1;               // ||R_n chi_(a,x)||_1
  NormValue estimate2;        // (x-a)^{n+1} sup / (n+1)!
  bool estimate1_holds;
  bool chain_holds;           // alexiewicz <= l1 <= estimate2
};

namespace detail {

inline bool le_within_enclosures(const NormValue& a, const NormValue& b) {
  if (a.is_exact() && b.is_exact()) return a.center() <= b.center();
  return a.lower() <= b.upper();
}

}  // namespace detail

class TaylorExpansion {
 public:
  // Verifies C^{n-1} smoothness with regulated right-continuous n-th
  // derivative from the piece data; rejects anything weaker.
  TaylorExpansion(const PiecewiseFunction& f, const Rational& a, int n)
      : f_(f.canonicalized()), a_(a), n_(n) {
    if (n_ < 0) throw PreconditionError("taylor order must be >= 0");
    if (!f_.all_breakpoints_rational())
      throw PreconditionError("taylor needs rational breakpoints");
    // The expansion lives on [a, infinity); smoothness is checked there and
    // only there (the clip points left of a carry no constraint).
    for (std::size_t i = 0; i < f_.breakpoint_count(); ++i) {
      const Rational& x = f_.rational_breakpoint(i);
      if (x <= a_) continue;
      Polynomial l = f_.poly_before(i), r = f_.poly_after(i);
      const auto& v = f_.stored_values()[i];
      if (n_ >= 1) {
        if (!v || *v != l.eval(x) || *v != r.eval(x))
          throw PreconditionError("taylor input must be continuous");
      }
      for (int k = 1; k < n_; ++k) {
        l = l.derivative();
        r = r.derivative();
        if (l.eval(x) != r.eval(x))
          throw PreconditionError("taylor input smoothness too low");
      }
    }
    // coefficients read from the piece just right of a
    auto [idx, at] = f_.locate(Point(a_));
    Polynomial q = at ? f_.poly_after(idx) : f_.region_poly(idx);
    Rational fact(1);
    std::vector<Rational> coeffs;
    Polynomial d = q;
    for (int k = 0; k <= n_; ++k) {
      if (k > 0) {
        d = d.derivative();
        fact *= k;
      }
      coeffs.push_back(d.eval(a_) / fact);
    }
    // P_n(x) = sum c_k (x-a)^k, expanded
    Polynomial pn;
    for (int k = n_; k >= 0; --k)
      pn = pn * Polynomial({-a_, Rational(1)}) +
           Polynomial::constant(coeffs[k]);
    p_n_ = pn;
    fn_deriv_ = detail::derivative_pw(f_, n_);
    f_np1_ = Distribution::from_primitive(fn_deriv_);
  }

  const Polynomial& taylor_polynomial() const { return p_n_; }
  const Distribution& derivative_distribution() const { return f_np1_; }
  const PiecewiseFunction& nth_derivative() const { return fn_deriv_; }

  // R_n(x) = (1/n!) integral over (a,x] of f^(n+1)(t) (x-t)^n dt.
  NormValue remainder(const Rational& x) const {
    if (!(x > a_)) throw PreconditionError("remainder needs x > a");
    Rational fact(1);
    for (int k = 2; k <= n_; ++k) fact *= k;
    // weight (x-t)^n, frozen outside [a, x] to stay of bounded variation
    Polynomial w =
        Polynomial::monomial(n_, Rational(1)).compose_linear(Rational(-1), x);
    PiecewiseFunction weight({Point(a_), Point(x)}, {w.eval(a_), Rational(0)},
                             {w}, w.eval(a_), Rational(0));
    Distribution prod = product(f_np1_, BVFunction(weight));
    NormValue integral =
        prod.integrate(IntervalSpec(ExtReal(a_), false, ExtReal(x), true));
    return integral.scaled(Rational(1) / fact);
  }

  // f - P_n restricted to (a, x), zero outside: the remainder as a density.
  PiecewiseFunction remainder_density(const Rational& x) const {
    if (!(x > a_)) throw PreconditionError("clip needs x > a");
    detail::RegionBuilder clip;
    clip.region(Polynomial::constant(Rational(0)));
    clip.boundary(Point(a_), Rational(0));
    Rational cur = a_;
    while (cur < x) {
      auto [idx, at] = f_.locate(Point(cur));
      std::size_t region = at ? idx + 1 : idx;
      Polynomial piece = f_.region_poly(region) - p_n_;
      Rational end = region < f_.breakpoint_count()
                         ? rat_min(x, f_.rational_breakpoint(region))
                         : x;
      clip.region(piece);
      clip.boundary(Point(end), piece.eval(end));
      cur = end;
    }
    clip.region(Polynomial::constant(Rational(0)));
    return clip.finish().canonicalized();
  }

  TaylorBoundReport bound_report(const Rational& x,
                                 const Rational& eps = kDefaultEps) const {
    if (!(x > a_)) throw PreconditionError("bound report needs x > a");
    TaylorBoundReport rep;
    rep.x = x;
    rep.remainder = remainder(x).abs_value();
    Rational factn(1);
    for (int k = 2; k <= n_; ++k) factn *= k;
    Rational factn1 = factn * (n_ + 1);
    // sup over [a, x) of |f^(n)(t) - f^(n)(a)| with the right-continuous
    // reading of f^(n); the value at a is the right limit there.
    Rational fna = fn_deriv_.limit(Point(a_), Side::Plus).exact_value();
    PiecewiseFunction shifted = fn_deriv_ - PiecewiseFunction::constant(fna);
    NormValue sup = detail::sup_abs_on(shifted, a_, x, eps);
    rep.estimate1 = sup.scaled(rat_pow(x - a_, n_) / factn);
    rep.estimate1_holds = detail::le_within_enclosures(rep.remainder, rep.estimate1);
    PiecewiseFunction r_clip = remainder_density(x);
    Distribution r_dist = Distribution::from_density(r_clip);
    rep.alexiewicz = r_dist.alexiewicz_norm(eps);
    Distribution abs_r =
        Distribution::from_density(pointwise_max(r_clip, -r_clip));
    rep.l1 = abs_r.integrate(IntervalSpec::whole_line(), eps);
    rep.estimate2 = sup.scaled(rat_pow(x - a_, n_ + 1) / factn1);
    rep.chain_holds = detail::le_within_enclosures(rep.alexiewicz, rep.l1) &&
                      detail::le_within_enclosures(rep.l1, rep.estimate2);
    return rep;
  }

 private:
  PiecewiseFunction f_;
  Rational a_;
  int n_;
  Polynomial p_n_;
  PiecewiseFunction fn_deriv_;
  Distribution f_np1_;
};

// ---------------------------------------------------------------------------
// Convolution evaluation
// ---------------------------------------------------------------------------

// (f * g)(x) = integral of f(y) g(x - y) dy for continuous in-class g;
// evaluated by integration by parts against the reflected translate.
inline NormValue convolve_eval(const Distribution& f,
                               const PiecewiseFunction& g, const Rational& x,
                               const Rational& eps = kDefaultEps) {
  if (!g.is_continuous())
    throw PreconditionError("convolution needs a continuous kernel");
  (void)eps;
  return integrate_by_parts(f, BVFunction(g.reflected_about(x)));
}

// The same value through the change-of-variables route: f(x-y) as a composed
// distribution integrated against g.  Kept separate so tests can pit the two
// paths against each other.
inline NormValue convolve_eval_via_compose(const Distribution& f,
                                           const PiecewiseFunction& g,
                                           const Rational& x) {
  MonotonePiecewiseMap reflect = MonotonePiecewiseMap::linear(Rational(-1), x);
  Distribution composed = compose(f, reflect);  // (f o G) G', G' = -1
  return -integrate_by_parts(composed, BVFunction(g));
}

}  // namespace rpi

#endif  // RPI_CALCULUS_HPP
