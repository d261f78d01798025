#ifndef RPI_DISTRIBUTION_HPP
#define RPI_DISTRIBUTION_HPP

#include <tuple>
#include <utility>
#include <vector>

#include "rpi/piecewise.hpp"

namespace rpi {

// Compactly supported polynomial spline of finite smoothness: the pairing
// surrogate for smooth test functions.  One integration by parts is all the
// primitives need, so order >= 2 suffices for every pairing in the library.
class TestFunction {
 public:
  // Requires zero tails and global C^{order-1} smoothness with order >= 2,
  // all verified from the piece data.
  explicit TestFunction(PiecewiseFunction f, int order = 2)
      : f_(f.canonicalized()), order_(order) {
    if (order_ < 2)
      throw PreconditionError("test functions need smoothness order >= 2");
    if (f_.left_tail() != 0 || f_.right_tail() != 0)
      throw PreconditionError("test function must have compact support");
    if (!f_.all_breakpoints_rational())
      throw PreconditionError("test function breakpoints must be rational");
    for (std::size_t i = 0; i < f_.breakpoint_count(); ++i) {
      const Rational& x = f_.rational_breakpoint(i);
      Polynomial a = f_.poly_before(i);
      Polynomial d = f_.poly_after(i);
      const auto& v = f_.stored_values()[i];
      if (!v || *v != a.eval(x) || *v != d.eval(x))
        throw PreconditionError("test function must be continuous");
      for (int k = 1; k < order_; ++k) {
        a = a.derivative();
        d = d.derivative();
        if (a.eval(x) != d.eval(x))
          throw PreconditionError("test function smoothness too low");
      }
    }
  }

  const PiecewiseFunction& fn() const { return f_; }
  int order() const { return order_; }

  Rational operator()(const Rational& x) const { return f_.value_rational(x); }

  PiecewiseFunction derivative_fn() const {
    std::vector<Point> xs = f_.breakpoints();
    std::vector<std::optional<Rational>> vals;
    std::vector<Polynomial> pieces;
    for (std::size_t i = 0; i < xs.size(); ++i)
      vals.push_back(f_.poly_before(i).derivative().eval(f_.rational_breakpoint(i)));
    for (const auto& p : f_.pieces()) pieces.push_back(p.derivative());
    if (xs.empty()) return PiecewiseFunction::zero();
    return PiecewiseFunction(std::move(xs), std::move(vals), std::move(pieces),
                             Rational(0), Rational(0))
        .canonicalized();
  }

  // Cubic B-spline bump supported on [c-2w, c+2w], C^2, peak 2/3 at c.
  static TestFunction bump(const Rational& c, const Rational& w) {
    if (w <= 0) throw PreconditionError("bump needs positive half-width");
    // B3 on knots -2,-1,0,1,2 composed with (x-c)/w.
    auto seg = [&](std::vector<Rational> coeffs) {
      Polynomial p{std::move(coeffs)};
      return p.compose_linear(Rational(1) / w, -c / w);
    };
    // t in [-2,-1]: (t+2)^3/6 ; [-1,0]: (-3t^3 -6t^2 +4)/6 ;
    // [0,1]: (3t^3 -6t^2 +4)/6 ; [1,2]: (2-t)^3/6
    Polynomial p1 = seg({Rational(8, 6), Rational(12, 6), Rational(6, 6), Rational(1, 6)});
    Polynomial p2 = seg({Rational(4, 6), Rational(0), Rational(-1), Rational(-1, 2)});
    Polynomial p3 = seg({Rational(4, 6), Rational(0), Rational(-1), Rational(1, 2)});
    Polynomial p4 = seg({Rational(8, 6), Rational(-12, 6), Rational(1), Rational(-1, 6)});
    std::vector<Point> xs = {Point(c - 2 * w), Point(c - w), Point(c),
                             Point(c + w), Point(c + 2 * w)};
    std::vector<std::optional<Rational>> vals = {
        Rational(0), Rational(1, 6), Rational(2, 3), Rational(1, 6),
        Rational(0)};
    std::vector<Polynomial> pieces = {p1, p2, p3, p4};
    return TestFunction(PiecewiseFunction(std::move(xs), std::move(vals),
                                          std::move(pieces), Rational(0),
                                          Rational(0)),
                        3);
  }

 private:
  PiecewiseFunction f_;
  int order_;
};

// Riemann integral of a piecewise polynomial with zero tails (values at
// breakpoints are immaterial).  Exact for rational breakpoints.
inline NormValue riemann_integral(const PiecewiseFunction& f,
                                  const Rational& eps = kDefaultEps) {
  if (f.left_tail() != 0 || f.right_tail() != 0)
    throw PreconditionError("Riemann integral needs compact support");
  NormValue total = NormValue::exact(Rational(0));
  std::size_t m = f.breakpoint_count();
  for (std::size_t i = 0; i + 1 < m; ++i) {
    Polynomial anti = f.pieces()[i].antiderivative();
    Rational cell_eps = eps / Rational(2 * static_cast<int>(m));
    NormValue hi = eval_at_point(anti, f.breakpoints()[i + 1], cell_eps);
    NormValue lo = eval_at_point(anti, f.breakpoints()[i], cell_eps);
    total = total + (hi - lo);
  }
  return total;
}

// An integrable distribution f = F' for a unique left-continuous primitive
// F with F(-inf) = 0.  Everything an integral can ask of f is a one-sided
// limit of F.
class Distribution {
 public:
  Distribution() : F_() {}
  explicit Distribution(BRFunction primitive) : F_(std::move(primitive)) {}

  // G' for any regulated G with limits at +-infinity (the FTC(b) route).
  static Distribution from_primitive(const PiecewiseFunction& g) {
    return Distribution(BRFunction::normalize(g));
  }

  static Distribution zero() { return Distribution(); }

  static Distribution dirac(const Rational& a) {
    return from_primitive(PiecewiseFunction::heaviside_left().translated(a));
  }

  // A locally integrable density with zero tails, as a distribution.
  static Distribution from_density(const PiecewiseFunction& density) {
    return Distribution(BRFunction(density.cumulative_integral()));
  }

  // sum a_k * (translate_k dirac), k = 1..N: the series distribution whose
  // primitive holds partial sums.
  static Distribution delta_series(const std::vector<Rational>& coeffs) {
    if (coeffs.empty()) return zero();
    std::vector<Point> xs;
    std::vector<std::optional<Rational>> vals;
    std::vector<Polynomial> pieces;
    Rational acc(0);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      xs.emplace_back(Rational(static_cast<int>(k) + 1));
      vals.push_back(acc);
      acc += coeffs[k];
      if (k + 1 < coeffs.size()) pieces.push_back(Polynomial::constant(acc));
    }
    return Distribution(BRFunction(PiecewiseFunction(
        std::move(xs), std::move(vals), std::move(pieces), Rational(0), acc)));
  }

  const BRFunction& primitive() const { return F_; }
  const PiecewiseFunction& primitive_fn() const { return F_.fn(); }

  bool operator==(const Distribution& o) const { return F_ == o.F_; }
  bool operator!=(const Distribution& o) const { return !(*this == o); }
  bool is_zero() const { return *this == Distribution(); }

  Distribution operator+(const Distribution& o) const {
    return Distribution(BRFunction(F_.fn() + o.F_.fn()));
  }
  Distribution operator-(const Distribution& o) const {
    return Distribution(BRFunction(F_.fn() - o.F_.fn()));
  }
  Distribution scaled(const Rational& k) const {
    return Distribution(BRFunction(F_.fn().scaled(k)));
  }
  Distribution operator-() const { return scaled(Rational(-1)); }

  Distribution translated(const Rational& t) const {
    return Distribution(BRFunction(F_.fn().translated(t)));
  }

  // integral over I, reading one-sided limits of the primitive:
  //   (a,b) -> F(b-)-F(a+)     (a,b] -> F(b+)-F(a+)
  //   [a,b) -> F(b-)-F(a-)     [a,b] -> F(b+)-F(a-)
  //   {a}   -> F(a+)-F(a-)     whole line -> F(inf)
  NormValue integrate(const IntervalSpec& I,
                      const Rational& eps = kDefaultEps) const {
    NormValue hi = F_.fn().limit(I.upper(), I.upper_limit_side(), eps / 2);
    NormValue lo = F_.fn().limit(I.lower(), I.lower_limit_side(), eps / 2);
    return hi - lo;
  }

  // Oriented integral between sided endpoints; antisymmetric under swap.
  NormValue integrate_oriented(const ExtReal& a1, Side e1, const ExtReal& a2,
                               Side e2, const Rational& eps = kDefaultEps) const {
    return F_.fn().limit(a2, e2, eps / 2) - F_.fn().limit(a1, e1, eps / 2);
  }

  // Split I at an interior point c; the parts sum exactly to integrate(I).
  std::pair<NormValue, NormValue> split(const IntervalSpec& I, const Rational& c,
                                        const Rational& eps = kDefaultEps) const {
    ExtReal cc{c};
    if (!(I.lower() < cc) || !(cc < I.upper()))
      throw PreconditionError("split point must be interior to the interval");
    IntervalSpec left(I.lower(), I.lower_closed(), cc, true);
    IntervalSpec right(cc, false, I.upper(), I.upper_closed());
    return {integrate(left, eps), integrate(right, eps)};
  }

  // ||f|| = ||F||_inf.
  NormValue alexiewicz_norm(const Rational& eps = kDefaultEps) const {
    return F_.fn().sup_norm(eps);
  }

  // ||f||' = sup over finite intervals of |integral|: the spread of the
  // closure of one-sided primitive values together with 0 and F(inf).
  NormValue norm_prime(const Rational& eps = kDefaultEps) const {
    auto [lo, hi] = F_.fn().limit_range(eps / 2);
    NormValue zero = NormValue::exact(Rational(0));
    NormValue inf = NormValue::exact(F_.at_infinity());
    hi = NormValue::max_hull(NormValue::max_hull(hi, zero), inf);
    lo = NormValue::min_hull(NormValue::min_hull(lo, zero), inf);
    return hi - lo;
  }

  // Lower proxy for ||f||'' from the indicator family g = chi_{(-inf,x]}:
  // sup_x |integral of f over (-inf, x]|, which equals ||f|| exactly.
  NormValue norm_doubleprime_proxy(const Rational& eps = kDefaultEps) const {
    auto [lo, hi] = F_.fn().limit_range(eps / 2);
    NormValue m = NormValue::max_hull(hi.abs_value(), lo.abs_value());
    return NormValue::max_hull(m, NormValue::exact(rat_abs(F_.at_infinity())));
  }

  // FTC(a): G1(x) = integral over (-inf,x) = F(x); closed side gives the
  // right-continuous G2(x) = integral over (-inf,x] = F(x+).
  NormValue ftc_primitive(const Rational& x, bool closed,
                          const Rational& eps = kDefaultEps) const {
    return F_.fn().limit(Point(x), closed ? Side::Plus : Side::Minus, eps);
  }

  // Hake decomposition: (lim_{x->inf} over (0,x), lim_{x->-inf} over (x,0],
  // total over the line), summing exactly.
  std::tuple<Rational, Rational, Rational> hake_decomposition() const {
    Rational at0 = F_.fn().limit(Point(Rational(0)), Side::Plus).exact_value();
    Rational total = F_.at_infinity();
    return {total - at0, at0, total};
  }

  // <f, phi> = -integral of F phi'.
  NormValue pair_with_test(const TestFunction& phi,
                           const Rational& eps = kDefaultEps) const {
    PiecewiseFunction integrand = F_.fn() * phi.derivative_fn();
    // Support of phi' keeps tails zero.
    return -riemann_integral(integrand, eps);
  }

 private:
  BRFunction F_;
};

}  // namespace rpi

#endif  // RPI_DISTRIBUTION_HPP
