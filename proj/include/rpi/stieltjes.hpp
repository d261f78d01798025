#ifndef RPI_STIELTJES_HPP
#define RPI_STIELTJES_HPP

#include <utility>
#include <vector>

#include "rpi/piecewise.hpp"

namespace rpi {

// ---------------------------------------------------------------------------
// Closed-form Henstock-Stieltjes integral for in-class pairs.
//
// Over the whole line:
//   integral phi d(psi) = sum over pieces of integral phi psi'
//                       + sum over jumps c of psi of phi(c) [psi(c+)-psi(c-)]
// On a sub-interval, jumps at a closed endpoint contribute their full
// two-sided jump and open endpoints contribute nothing; this is the unique
// weighting for which hs_integral(1, F, I) = integrate(F', I) holds for all
// four interval types and every representable integrator.
// ---------------------------------------------------------------------------

inline NormValue hs_integral(const PiecewiseFunction& phi,
                             const PiecewiseFunction& psi,
                             const IntervalSpec& I,
                             const Rational& eps = kDefaultEps) {
  NormValue total = NormValue::exact(Rational(0));

  // Merged breakpoints bound the regions where phi * psi' is a polynomial.
  std::vector<Point> merged;
  {
    const auto &a = phi.breakpoints(), &b = psi.breakpoints();
    std::size_t i = 0, j = 0;
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
  Rational slot = eps / Rational(2 * static_cast<int>(merged.size()) + 2);

  // Smooth parts: clip every region to the open interior of I.
  std::size_t pi = 0, qi = 0;
  for (std::size_t r = 0; r <= merged.size(); ++r) {
    Polynomial integrand = phi.region_poly(pi) * psi.region_poly(qi).derivative();
    if (r < merged.size()) {
      if (pi < phi.breakpoint_count() &&
          points_equal(phi.breakpoints()[pi], merged[r]))
        ++pi;
      if (qi < psi.breakpoint_count() &&
          points_equal(psi.breakpoints()[qi], merged[r]))
        ++qi;
    }
    if (integrand.is_zero()) continue;
    // region (u, v), with u = merged[r-1], v = merged[r] (tails at the ends)
    bool has_u = r > 0, has_v = r < merged.size();
    // clip to I's interior
    Point lo = Point(Rational(0)), hi = Point(Rational(0));
    bool empty = false;
    if (I.lower().is_finite()) {
      Point a(I.lower().value());
      lo = has_u ? (compare_points(merged[r - 1], a) >= 0 ? merged[r - 1] : a)
                 : a;
      has_u = true;
    } else if (has_u) {
      lo = merged[r - 1];
    }
    if (I.upper().is_finite()) {
      Point b(I.upper().value());
      hi = has_v ? (compare_points(merged[r], b) <= 0 ? merged[r] : b) : b;
      has_v = true;
    } else if (has_v) {
      hi = merged[r];
    }
    if (!has_u || !has_v) {
      // unbounded region with unbounded clip: psi' is zero on tails, so the
      // integrand vanished already unless something is inconsistent
      throw PreconditionError("nonzero integrand on an unbounded tail");
    }
    if (compare_points(lo, hi) >= 0) empty = true;
    if (empty) continue;
    Polynomial anti = integrand.antiderivative();
    total = total + (eval_at_point(anti, hi, slot / 2) -
                     eval_at_point(anti, lo, slot / 2));
  }

  // Jump terms: rational breakpoints of psi inside I or at closed endpoints.
  for (std::size_t j = 0; j < psi.breakpoint_count(); ++j) {
    if (!is_rational(psi.breakpoints()[j])) continue;  // continuity point
    const Rational& c = as_rational(psi.breakpoints()[j]);
    Rational jump =
        psi.poly_after(j).eval(c) - psi.poly_before(j).eval(c);
    if (jump == 0) continue;
    bool include = false;
    ExtReal cc{c};
    bool interior = I.lower() < cc && cc < I.upper();
    bool at_lower = I.lower() == cc && I.lower_closed();
    bool at_upper = I.upper() == cc && I.upper_closed();
    include = interior || at_lower || at_upper;
    if (!include) continue;
    NormValue phic = phi.value(Point(c), slot);
    total = total + phic.scaled(jump);
  }
  return total;
}

// psi frozen outside I: constant at the appropriate one-sided limit beyond
// each finite endpoint, so that integral of phi d(stopped psi) over the whole
// line equals hs_integral(phi, psi, I).
inline PiecewiseFunction stop_outside(const PiecewiseFunction& psi,
                                      const IntervalSpec& I) {
  bool lower_fin = I.lower().is_finite();
  bool upper_fin = I.upper().is_finite();
  if (!lower_fin && !upper_fin) return psi;
  detail::RegionBuilder b;
  if (I.is_singleton()) {
    const Rational& a = I.lower().value();
    Rational lv = psi.limit(Point(a), Side::Minus).exact_value();
    Rational rv = psi.limit(Point(a), Side::Plus).exact_value();
    b.region(Polynomial::constant(lv));
    b.boundary(Point(a), lv);
    b.region(Polynomial::constant(rv));
    return b.finish().canonicalized();
  }
  std::size_t j = 0;  // index of the first breakpoint to copy through
  if (lower_fin) {
    const Rational& a = I.lower().value();
    Rational frozen =
        psi.limit(Point(a), I.lower_closed() ? Side::Minus : Side::Plus)
            .exact_value();
    b.region(Polynomial::constant(frozen));
    b.boundary(Point(a), frozen);
    auto [idx, at] = psi.locate(Point(a));
    j = at ? idx + 1 : idx;
    b.region(psi.region_poly(j));
  } else {
    b.region(psi.region_poly(0));
  }
  for (; j < psi.breakpoint_count(); ++j) {
    if (upper_fin && compare_points(psi.breakpoints()[j],
                                    Point(I.upper().value())) >= 0)
      break;
    b.boundary(psi.breakpoints()[j], psi.stored_values()[j]);
    b.region(psi.region_poly(j + 1));
  }
  if (upper_fin) {
    const Rational& c = I.upper().value();
    Rational frozen =
        psi.limit(Point(c), I.upper_closed() ? Side::Plus : Side::Minus)
            .exact_value();
    Rational at_c = psi.limit(Point(c), Side::Minus).exact_value();
    b.boundary(Point(c), at_c);
    b.region(Polynomial::constant(frozen));
  }
  return b.finish().canonicalized();
}

// ---------------------------------------------------------------------------
// Gauge-partition oracle
// ---------------------------------------------------------------------------

// Finite rule set: open base window around every point, private windows at
// forced tag points, tail windows at +-infinity.
struct Gauge {
  Rational base_halfwidth;
  struct Forced {
    Rational at;
    Rational halfwidth;
  };
  std::vector<Forced> forced;
  Rational left_tail_edge;   // gamma(-inf) = [-inf, left_tail_edge)
  Rational right_tail_edge;  // gamma(+inf) = (right_tail_edge, +inf]

  // gamma(x) as (lo, hi) for finite x.
  std::pair<Rational, Rational> window(const Rational& x) const {
    for (const auto& f : forced)
      if (f.at == x) return {x - f.halfwidth, x + f.halfwidth};
    return {x - base_halfwidth, x + base_halfwidth};
  }
};

// Tagged partition of the extended line: cells [nodes[i], nodes[i+1]] with
// tag tags[i]; nodes.front() = -inf, nodes.back() = +inf, first and last tag
// are the infinities themselves.
struct TaggedPartition {
  std::vector<ExtReal> nodes;
  std::vector<ExtReal> tags;

  std::size_t cells() const { return tags.size(); }
};

inline bool is_gamma_fine(const TaggedPartition& P, const Gauge& g) {
  if (P.nodes.size() != P.tags.size() + 1) return false;
  for (std::size_t i = 0; i < P.cells(); ++i) {
    const ExtReal &lo = P.nodes[i], &hi = P.nodes[i + 1];
    const ExtReal& tag = P.tags[i];
    if (tag.is_neg_inf()) {
      if (!lo.is_neg_inf()) return false;
      if (!(hi.is_finite() && hi.value() < g.left_tail_edge)) return false;
      continue;
    }
    if (tag.is_pos_inf()) {
      if (!hi.is_pos_inf()) return false;
      if (!(lo.is_finite() && lo.value() > g.right_tail_edge)) return false;
      continue;
    }
    if (!lo.is_finite() || !hi.is_finite()) return false;
    if (!(lo <= tag && tag <= hi)) return false;
    auto [wlo, whi] = g.window(tag.value());
    if (!(wlo < lo.value() && hi.value() < whi)) return false;
  }
  return true;
}

// Riemann-Stieltjes sum over a tagged partition, with tail-tag values read
// from the function limits at +-infinity.
inline Rational riemann_stieltjes_sum(const PiecewiseFunction& phi,
                                      const PiecewiseFunction& psi,
                                      const TaggedPartition& P) {
  Rational sum(0);
  for (std::size_t i = 0; i < P.cells(); ++i) {
    const ExtReal& tag = P.tags[i];
    Rational phiv = tag.is_finite() ? phi.value(Point(tag.value())).exact_value()
                                    : (tag.is_neg_inf() ? phi.left_tail()
                                                        : phi.right_tail());
    auto psiv = [&](const ExtReal& x) {
      if (x.is_neg_inf()) return psi.left_tail();
      if (x.is_pos_inf()) return psi.right_tail();
      return psi.value(Point(x.value())).exact_value();
    };
    sum += phiv * (psiv(P.nodes[i + 1]) - psiv(P.nodes[i]));
  }
  return sum;
}

namespace detail {

// Faulhaber: S_m(k) = sum_{i=0}^{k-1} i^m, exact via the binomial recurrence.
inline std::vector<Rational> power_sums(const Rational& k, int max_m) {
  std::vector<Rational> s(max_m + 1);
  std::vector<std::vector<Integer>> binom(max_m + 2);
  for (int n = 0; n <= max_m + 1; ++n) {
    binom[n].resize(n + 1);
    binom[n][0] = 1;
    binom[n][n] = 1;
    for (int j = 1; j < n; ++j)
      binom[n][j] = binom[n - 1][j - 1] + binom[n - 1][j];
  }
  Rational kpow = k;
  for (int m = 0; m <= max_m; ++m) {
    // sum_{j<=m} C(m+1, j) S_j = k^{m+1}
    Rational rhs = kpow;
    for (int j = 0; j < m; ++j) rhs -= Rational(binom[m + 1][j]) * s[j];
    s[m] = rhs / Rational(m + 1);
    kpow *= k;
  }
  return s;
}

// Midpoint-tagged uniform Riemann-Stieltjes sum over [s, s + k h] for
// polynomial phi-piece P and psi-piece Q, in closed form.
inline Rational uniform_run_sum(const Polynomial& P, const Polynomial& Q,
                                const Rational& s, const Rational& h,
                                const Integer& k) {
  Polynomial tag_poly = P.compose_linear(h, s + h / 2);
  Polynomial inc = Q.compose_linear(h, s + h) - Q.compose_linear(h, s);
  Polynomial prod = tag_poly * inc;
  if (prod.is_zero()) return Rational(0);
  auto sums = power_sums(Rational(k), prod.degree());
  Rational total(0);
  for (int m = 0; m <= prod.degree(); ++m)
    total += prod.coeff(m) * sums[m];
  return total;
}

}  // namespace detail

struct OracleResult {
  NormValue enclosure;   // Ball(sum, eps)
  Rational raw_sum;      // the exact Riemann-Stieltjes sum that was formed
  Rational error_bound;  // rigorous bound on |sum - integral|, <= eps
  Gauge gauge;
  Integer total_cells;
};

// Constructs a gauge forcing every breakpoint of phi and psi to be a tag,
// refines mesh and private windows until the Riemann-Stieltjes sum is
// provably within eps of the integral, and returns Ball(sum, eps).  The sum
// of a gamma-fine partition is evaluated in closed form per uniform run, so
// the cell count never materializes.
inline OracleResult gauge_oracle(const PiecewiseFunction& phi,
                                 const PiecewiseFunction& psi,
                                 const IntervalSpec& I, const Rational& eps) {
  if (eps <= 0) throw PreconditionError("gauge oracle needs eps > 0");
  if (!phi.all_breakpoints_rational() || !psi.all_breakpoints_rational())
    throw PreconditionError("gauge oracle needs rational breakpoints");

  PiecewiseFunction stopped = stop_outside(psi, I);

  // Forced tag points: all breakpoints of either function.
  std::vector<Rational> forced;
  {
    std::size_t i = 0, j = 0;
    const auto &a = phi.breakpoints(), &b = stopped.breakpoints();
    while (i < a.size() || j < b.size()) {
      int c;
      if (i >= a.size())
        c = 1;
      else if (j >= b.size())
        c = -1;
      else
        c = compare_points(a[i], b[j]);
      forced.push_back(as_rational(c <= 0 ? a[i] : b[j]));
      if (c <= 0) ++i;
      if (c >= 0) ++j;
    }
  }
  if (forced.empty()) {
    // psi constant everywhere: the integral and every sum vanish
    Gauge g{Rational(1), {}, Rational(0), Rational(0)};
    return {NormValue::ball(Rational(0), eps), Rational(0), Rational(0), g,
            Integer(2)};
  }

  std::size_t p = forced.size();
  Rational min_gap(1);
  for (std::size_t i = 0; i + 1 < p; ++i)
    min_gap = rat_min(min_gap, forced[i + 1] - forced[i]);

  Rational priv_budget = eps / Rational(2 * static_cast<int>(p));
  Rational run_budget =
      p > 1 ? eps / Rational(2 * static_cast<int>(p - 1)) : eps;

  auto region_polys_at = [&](const PiecewiseFunction& f, const Rational& x,
                             Side side) {
    auto [idx, at] = f.locate(Point(x));
    if (!at) return f.region_poly(idx);
    return side == Side::Minus ? f.poly_before(idx) : f.poly_after(idx);
  };

  // Private half-width: shrink until every private cell's error bound fits.
  Rational r = rat_min(Rational(1), min_gap / 4);
  for (int iter = 0;; ++iter) {
    if (iter >= detail::kMaxRefineSteps)
      throw ResourceError("gauge oracle could not certify eps");
    bool ok = true;
    for (const auto& c : forced) {
      Polynomial pl = region_polys_at(phi, c, Side::Minus);
      Polynomial pr = region_polys_at(phi, c, Side::Plus);
      Polynomial ql = region_polys_at(stopped, c, Side::Minus);
      Polynomial qr = region_polys_at(stopped, c, Side::Plus);
      Rational phic = phi.value(Point(c)).exact_value();
      Rational osc_l =
          (pl - Polynomial::constant(phic)).abs_bound(c - r, c);
      Rational osc_r =
          (pr - Polynomial::constant(phic)).abs_bound(c, c + r);
      Rational var_l = ql.derivative().abs_bound(c - r, c) * r;
      Rational var_r = qr.derivative().abs_bound(c, c + r) * r;
      if (osc_l * var_l + osc_r * var_r > priv_budget) {
        ok = false;
        break;
      }
    }
    if (ok) break;
    r /= 2;
  }

  Rational sum(0);
  Rational err(0);
  Integer cells(2);  // the two tail cells
  Rational max_h(0);

  // Private cells.
  for (const auto& c : forced) {
    Rational phic = phi.value(Point(c)).exact_value();
    Rational lo = stopped.value(Point(c - r)).exact_value();
    Rational hi = stopped.value(Point(c + r)).exact_value();
    sum += phic * (hi - lo);
    cells += 1;
    Polynomial pl = region_polys_at(phi, c, Side::Minus);
    Polynomial pr = region_polys_at(phi, c, Side::Plus);
    Polynomial ql = region_polys_at(stopped, c, Side::Minus);
    Polynomial qr = region_polys_at(stopped, c, Side::Plus);
    Rational osc_l = (pl - Polynomial::constant(phic)).abs_bound(c - r, c);
    Rational osc_r = (pr - Polynomial::constant(phic)).abs_bound(c, c + r);
    err += osc_l * ql.derivative().abs_bound(c - r, c) * r +
           osc_r * qr.derivative().abs_bound(c, c + r) * r;
  }

  // Uniform runs between consecutive private cells.
  for (std::size_t i = 0; i + 1 < p; ++i) {
    Rational s = forced[i] + r;
    Rational e = forced[i + 1] - r;
    Rational len = e - s;
    if (len <= 0) continue;
    Polynomial P = region_polys_at(phi, forced[i], Side::Plus);
    Polynomial Q = region_polys_at(stopped, forced[i], Side::Plus);
    Rational lp = P.derivative().abs_bound(s, e);
    Rational lq = Q.derivative().abs_bound(s, e);
    Integer k(1);
    Rational raw_err = lp * lq * len * len / 2;
    if (raw_err > run_budget) k = rat_ceil(raw_err / run_budget);
    Rational h = len / Rational(k);
    sum += detail::uniform_run_sum(P, Q, s, h, k);
    err += raw_err / Rational(k);
    cells += k;
    max_h = rat_max(max_h, h);
  }

  if (err > eps)
    throw ResourceError("gauge oracle error bound exceeded its target");

  Gauge g;
  g.base_halfwidth = max_h > 0 ? max_h : Rational(1);
  for (const auto& c : forced) g.forced.push_back({c, 2 * r});
  g.left_tail_edge = forced.front() - r / 2;
  g.right_tail_edge = forced.back() + r / 2;
  return {NormValue::ball(sum, eps), sum, err, g, cells};
}

// Materialized partition matching the oracle's construction, for small cell
// counts (tests cross-check the closed-form sum against this).
inline TaggedPartition oracle_partition(const std::vector<Rational>& forced,
                                        const Rational& r, const Integer& k) {
  TaggedPartition P;
  P.nodes.push_back(ExtReal::neg_inf());
  if (forced.empty()) {
    P.tags.push_back(ExtReal::neg_inf());
    P.nodes.push_back(ExtReal(Rational(0)));
    P.tags.push_back(ExtReal::pos_inf());
    P.nodes.push_back(ExtReal::pos_inf());
    return P;
  }
  P.tags.push_back(ExtReal::neg_inf());
  P.nodes.push_back(ExtReal(forced.front() - r));
  for (std::size_t i = 0; i < forced.size(); ++i) {
    P.tags.push_back(ExtReal(forced[i]));
    P.nodes.push_back(ExtReal(forced[i] + r));
    if (i + 1 < forced.size()) {
      Rational s = forced[i] + r, e = forced[i + 1] - r;
      Rational h = (e - s) / Rational(k);
      for (Integer j(0); j < k; ++j) {
        P.tags.push_back(ExtReal(s + h * Rational(j) + h / 2));
        P.nodes.push_back(j + 1 < k ? ExtReal(s + h * Rational(j + 1))
                                    : ExtReal(e));
      }
    }
  }
  P.tags.push_back(ExtReal::pos_inf());
  P.nodes.push_back(ExtReal::pos_inf());
  return P;
}

}  // namespace rpi

#endif  // RPI_STIELTJES_HPP
