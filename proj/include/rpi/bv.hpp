#ifndef RPI_BV_HPP
#define RPI_BV_HPP

#include <utility>
#include <vector>

#include "rpi/piecewise.hpp"

namespace rpi {

namespace detail {

// Total variation of a polynomial over a span: sum of |p(r_{i+1}) - p(r_i)|
// across the sign changes of p'.  Exact when those changes are rational.
inline NormValue poly_variation(const Polynomial& p, const Point& lo,
                                const Point& hi, const Rational& eps) {
  if (p.degree() <= 0) return NormValue::exact(Rational(0));
  std::vector<Point> nodes;
  nodes.push_back(lo);
  if (p.degree() >= 2)
    for (auto& r : isolate_roots_open(p.derivative(), lo, hi))
      nodes.push_back(std::move(r));
  nodes.push_back(hi);
  NormValue total = NormValue::exact(Rational(0));
  Rational node_eps = eps / Rational(2 * static_cast<int>(nodes.size()));
  NormValue prev = eval_at_point(p, nodes[0], node_eps);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    NormValue cur = eval_at_point(p, nodes[i], node_eps);
    total = total + (cur - prev).abs_value();
    prev = cur;
  }
  return total;
}

}  // namespace detail

// Total variation of g over the whole line: per-piece variation plus, at
// every breakpoint, |g(x)-g(x-)| + |g(x+)-g(x)|.  The assigned value counts
// (V chi_{{0}} = 2), which is what separates BV from essential variation.
inline NormValue variation(const PiecewiseFunction& g,
                           const Rational& eps = kDefaultEps) {
  std::size_t m = g.breakpoint_count();
  if (m == 0) return NormValue::exact(Rational(0));
  NormValue total = NormValue::exact(Rational(0));
  Rational slot = eps / Rational(2 * static_cast<int>(m) + 1);
  for (std::size_t i = 0; i + 1 < m; ++i)
    total = total + detail::poly_variation(g.pieces()[i], g.breakpoints()[i],
                                           g.breakpoints()[i + 1], slot);
  for (std::size_t i = 0; i < m; ++i) {
    NormValue v = g.value_at_breakpoint(i, slot / 4);
    NormValue left = g.limit(g.breakpoints()[i], Side::Minus, slot / 4);
    NormValue right = g.limit(g.breakpoints()[i], Side::Plus, slot / 4);
    total = total + (v - left).abs_value() + (right - v).abs_value();
  }
  return total;
}

// Multiplier function: piecewise representation plus its eagerly computed
// variation.
class BVFunction {
 public:
  BVFunction() : g_(PiecewiseFunction::zero()), var_(NormValue::exact(Rational(0))) {}
  explicit BVFunction(PiecewiseFunction g, const Rational& eps = kDefaultEps)
      : g_(std::move(g)), var_(variation(g_, eps)) {}

  const PiecewiseFunction& fn() const { return g_; }
  operator const PiecewiseFunction&() const { return g_; }
  const NormValue& total_variation() const { return var_; }

  NormValue sup_norm(const Rational& eps = kDefaultEps) const {
    return g_.sup_norm(eps);
  }

  // ||g||_BV = ||g||_inf + Vg.
  NormValue bv_norm(const Rational& eps = kDefaultEps) const {
    return g_.sup_norm(eps) + var_;
  }

  // ||g||'_BV = |g(a)| + Vg for an anchor a in the extended line.
  NormValue bv_norm_anchored(const ExtReal& a,
                             const Rational& eps = kDefaultEps) const {
    NormValue ga = a.is_finite() ? g_.value(Point(a.value()), eps)
                                 : NormValue::exact(a.is_neg_inf()
                                                        ? g_.left_tail()
                                                        : g_.right_tail());
    return ga.abs_value() + var_;
  }

  BVFunction operator+(const BVFunction& o) const {
    return BVFunction(g_ + o.g_);
  }
  BVFunction operator*(const BVFunction& o) const {
    return BVFunction(g_ * o.g_);
  }
  BVFunction scaled(const Rational& k) const { return BVFunction(g_.scaled(k)); }

  bool operator==(const BVFunction& o) const { return g_.equals(o.g_); }

 private:
  PiecewiseFunction g_;
  NormValue var_;
};

// g_lambda(x) = (1-lambda) g(x-) + lambda g(x+); endpoint values preserved.
// Idempotent, variation-nonincreasing.
inline BVFunction normalize_lambda(const BVFunction& g, const Rational& lambda) {
  if (lambda < 0 || lambda > 1)
    throw PreconditionError("lambda must lie in [0,1]");
  const PiecewiseFunction& f = g.fn();
  std::vector<Point> xs = f.breakpoints();
  std::vector<std::optional<Rational>> vals;
  std::vector<Polynomial> pieces = f.pieces();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!is_rational(xs[i])) {
      vals.push_back(std::nullopt);  // continuity point: mix is a no-op
      continue;
    }
    const Rational& x = as_rational(xs[i]);
    Rational left = f.poly_before(i).eval(x);
    Rational right = f.poly_after(i).eval(x);
    vals.push_back((1 - lambda) * left + lambda * right);
  }
  if (xs.empty()) return g;
  return BVFunction(PiecewiseFunction(std::move(xs), std::move(vals),
                                      std::move(pieces), f.left_tail(),
                                      f.right_tail())
                        .canonicalized());
}

// Reports the lambda for which g is normalized, if any jump pins one down;
// jump-free functions are normalized for every lambda.
inline bool is_lambda_normalized(const BVFunction& g, Rational* lambda_out) {
  const PiecewiseFunction& f = g.fn();
  bool pinned = false;
  Rational lambda(0);
  for (std::size_t i = 0; i < f.breakpoint_count(); ++i) {
    if (!is_rational(f.breakpoints()[i])) continue;
    const Rational& x = as_rational(f.breakpoints()[i]);
    Rational left = f.poly_before(i).eval(x);
    Rational right = f.poly_after(i).eval(x);
    Rational v = *f.stored_values()[i];
    if (left == right) {
      if (v != left) return false;  // removable point with an outlier value
      continue;
    }
    Rational mix = (v - left) / (right - left);
    if (mix < 0 || mix > 1) return false;
    if (pinned && mix != lambda) return false;
    lambda = mix;
    pinned = true;
  }
  if (lambda_out) *lambda_out = pinned ? lambda : Rational(0);
  return true;
}

}  // namespace rpi

#endif  // RPI_BV_HPP
