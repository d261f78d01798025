#ifndef RPI_PRODUCT_HPP
#define RPI_PRODUCT_HPP

#include <utility>
#include <vector>

#include "rpi/bv.hpp"
#include "rpi/distribution.hpp"
#include "rpi/stieltjes.hpp"

namespace rpi {

// Points where both F and g fail right continuity; the correction sum of the
// product runs over exactly these.
struct CommonRightDiscontinuitySet {
  std::vector<Rational> points;
  std::vector<Rational> weights;  // [F(c)-F(c+)] * [g(c)-g(c+)]
};

inline CommonRightDiscontinuitySet common_right_discontinuities(
    const PiecewiseFunction& F, const PiecewiseFunction& g) {
  CommonRightDiscontinuitySet out;
  for (std::size_t i = 0; i < F.breakpoint_count(); ++i) {
    if (!is_rational(F.breakpoints()[i])) continue;
    const Rational& c = as_rational(F.breakpoints()[i]);
    Rational fv = *F.stored_values()[i];
    Rational fplus = F.poly_after(i).eval(c);
    if (fv == fplus) continue;
    Rational gv = g.value(Point(c)).exact_value();
    Rational gplus = g.limit(Point(c), Side::Plus).exact_value();
    if (gv == gplus) continue;
    out.points.push_back(c);
    out.weights.push_back((fv - fplus) * (gv - gplus));
  }
  return out;
}

namespace detail {

// M(x) = Henstock-Stieltjes integral of F dg over [-inf, x], as a function
// of x, with the compact-interval value convention
//   M(x) = M(x-) + F(x) [g(x) - g(x-)].
// Needs rational breakpoints: irrational antiderivative offsets would leave
// the exact piecewise class.
inline PiecewiseFunction cumulative_stieltjes(const PiecewiseFunction& F,
                                              const PiecewiseFunction& g) {
  if (!F.all_breakpoints_rational() || !g.all_breakpoints_rational())
    throw PreconditionError(
        "product needs rational breakpoints (irrational antiderivative "
        "offsets leave the exact class)");
  std::vector<Rational> merged;
  {
    std::size_t i = 0, j = 0;
    const auto &a = F.breakpoints(), &b = g.breakpoints();
    while (i < a.size() || j < b.size()) {
      int c;
      if (i >= a.size())
        c = 1;
      else if (j >= b.size())
        c = -1;
      else
        c = compare_points(a[i], b[j]);
      merged.push_back(as_rational(c <= 0 ? a[i] : b[j]));
      if (c <= 0) ++i;
      if (c >= 0) ++j;
    }
  }
  if (merged.empty()) return PiecewiseFunction::zero();

  RegionBuilder b;
  b.region(Polynomial::constant(Rational(0)));
  Rational acc(0);  // M(z-) at the upcoming breakpoint
  for (std::size_t r = 0; r < merged.size(); ++r) {
    const Rational& z = merged[r];
    Rational fz = F.value(Point(z)).exact_value();
    Rational gminus = g.limit(Point(z), Side::Minus).exact_value();
    Rational gval = g.value(Point(z)).exact_value();
    Rational gplus = g.limit(Point(z), Side::Plus).exact_value();
    Rational value_at = acc + fz * (gval - gminus);
    Rational acc_plus = acc + fz * (gplus - gminus);
    b.boundary(Point(z), value_at);
    if (r + 1 < merged.size()) {
      auto [fi, fat] = F.locate(Point(z));
      auto [gi, gat] = g.locate(Point(z));
      Polynomial fp = F.region_poly(fat ? fi + 1 : fi);
      Polynomial gp = g.region_poly(gat ? gi + 1 : gi);
      Polynomial anti = (fp * gp.derivative()).antiderivative();
      b.region(anti + Polynomial::constant(acc_plus - anti.eval(z)));
      acc = acc_plus + anti.eval(merged[r + 1]) - anti.eval(z);
    } else {
      b.region(Polynomial::constant(acc_plus));
    }
  }
  return b.finish().canonicalized();
}

}  // namespace detail

// Psi(x) = F(x) g(x) - integral_{-inf}^{x} F dg
//          - sum_{c_n < x} [F(c_n)-F(c_n+)][g(c_n)-g(c_n+)],
// the left-continuous vanishing-at--infinity primitive whose derivative
// defines the product f*g.
inline BRFunction psi_primitive(const Distribution& f, const BVFunction& g) {
  const PiecewiseFunction& F = f.primitive_fn();
  const PiecewiseFunction& gf = g.fn();
  PiecewiseFunction fg = F * gf;
  PiecewiseFunction M = detail::cumulative_stieltjes(F, gf);
  auto common = common_right_discontinuities(F, gf);
  PiecewiseFunction C = PiecewiseFunction::zero();
  if (!common.points.empty()) {
    detail::RegionBuilder b;
    Rational acc(0);
    b.region(Polynomial::constant(acc));
    for (std::size_t i = 0; i < common.points.size(); ++i) {
      b.boundary(Point(common.points[i]), acc);
      acc += common.weights[i];
      b.region(Polynomial::constant(acc));
    }
    C = b.finish();
  }
  return BRFunction(fg - M - C);
}

// f*g in A_R: the derivative of the Psi primitive.
inline Distribution product(const Distribution& f, const BVFunction& g) {
  return Distribution(psi_primitive(f, g));
}

// integral over the line of f g, by parts:
//   F(inf) g(inf) - integral F dg - correction sum.
// Exactly Psi(inf); also equal to hs_integral(g, F, line) and to the
// integral of product(f, g), which the test suite enforces three ways.
inline NormValue integrate_by_parts(const Distribution& f, const BVFunction& g) {
  return NormValue::exact(psi_primitive(f, g).at_infinity());
}

struct HolderBounds {
  NormValue lhs;     // |integral of f g|
  NormValue bound1;  // |integral f| |g(inf)| + ||f|| Vg
  NormValue bound2;  // ||f|| ||g||_BV
};

inline HolderBounds holder_bound(const Distribution& f, const BVFunction& g,
                                 const Rational& eps = kDefaultEps) {
  NormValue lhs = integrate_by_parts(f, g).abs_value();
  NormValue total = f.integrate(IntervalSpec::whole_line(), eps).abs_value();
  NormValue fn = f.alexiewicz_norm(eps);
  NormValue b1 = total.scaled(rat_abs(g.fn().right_tail())) +
                 fn * g.total_variation();
  NormValue b2 = fn * g.bv_norm(eps);
  return {lhs, b1, b2};
}

// Alternative bound for lambda-normalized g (Lemma route):
//   |integral f g| <= |integral f| inf|g| + ||f||' Vg.
inline NormValue holder_alternative(const Distribution& f, const BVFunction& g,
                                    const Rational& eps = kDefaultEps) {
  if (!is_lambda_normalized(g, nullptr))
    throw PreconditionError("alternative Holder bound needs lambda-normalized g");
  NormValue total = f.integrate(IntervalSpec::whole_line(), eps).abs_value();
  return total * g.fn().inf_abs(eps) + f.norm_prime(eps) * g.total_variation();
}

}  // namespace rpi

#endif  // RPI_PRODUCT_HPP
