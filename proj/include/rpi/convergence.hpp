#ifndef RPI_CONVERGENCE_HPP
#define RPI_CONVERGENCE_HPP

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "rpi/lattice.hpp"
#include "rpi/product.hpp"

namespace rpi {

// A closed-form family of distributions indexed by n, with a claimed limit
// and a finite horizon.  The harness never takes limits: it verifies finite
// prefixes against explicit tolerances, because the theorems' conclusions
// are asymptotic, and every report says so through its structure.
struct SequenceSpec {
  std::function<Distribution(int)> generator;
  Distribution claimed_limit;
  int horizon = 20;
};

struct TrendReport {
  std::vector<NormValue> values;          // per index, 1-based
  bool envelope_nonincreasing = true;     // v_{n+1} <= v_n throughout
  std::optional<int> first_violation;     // 1-based index of the first rise
  bool final_below_tolerance = false;
};

inline TrendReport trend_report(std::vector<NormValue> values,
                                const Rational& tolerance) {
  TrendReport r;
  r.values = std::move(values);
  for (std::size_t i = 0; i + 1 < r.values.size(); ++i) {
    if (r.values[i + 1].lower() > r.values[i].upper()) {
      r.envelope_nonincreasing = false;
      r.first_violation = static_cast<int>(i + 2);
      break;
    }
  }
  if (!r.values.empty())
    r.final_below_tolerance = r.values.back().upper() <= tolerance;
  return r;
}

// ||f_n - f|| per index.
inline TrendReport strong_distances(const SequenceSpec& s,
                                    const Rational& tolerance,
                                    const Rational& eps = kDefaultEps) {
  std::vector<NormValue> d;
  for (int n = 1; n <= s.horizon; ++n)
    d.push_back((s.generator(n) - s.claimed_limit).alexiewicz_norm(eps));
  return trend_report(std::move(d), tolerance);
}

// <f_n - f, phi> per index (exact pairings).
inline std::vector<NormValue> weak_pairings(const SequenceSpec& s,
                                            const TestFunction& phi,
                                            const Rational& eps = kDefaultEps) {
  std::vector<NormValue> out;
  for (int n = 1; n <= s.horizon; ++n)
    out.push_back((s.generator(n) - s.claimed_limit).pair_with_test(phi, eps));
  return out;
}

struct UniformBVIndexRow {
  NormValue f_gap;        // ||f_n - f||
  NormValue v_gap;        // V(g_n - g)
  NormValue anchor_gap;   // |g_n(a) - g(a)|
  NormValue g_sup_gap;    // ||g_n - g||_inf
  NormValue product_gap;  // |int f_n g_n - int f g|
  NormValue chain_bound;  // ||f_n|| ||g_n - g||_BV + ||f_n - f|| ||g||_BV
  bool chain_holds;
};

struct UniformBVReport {
  std::vector<UniformBVIndexRow> rows;
  bool hypotheses_met_at_horizon;   // the three gaps end below tolerance
  bool conclusions_met_at_horizon;  // sup gap and product gap end below
};

// Uniform-bounded-variation convergence check: hypothesis trio, conclusions
// and the proof's inequality chain, row by row.
inline UniformBVReport uniform_bv_check(
    const SequenceSpec& fs, const std::function<BVFunction(int)>& gs,
    const BVFunction& g_limit, const Rational& anchor,
    const Rational& tolerance, const Rational& eps = kDefaultEps) {
  UniformBVReport rep;
  NormValue target = integrate_by_parts(fs.claimed_limit, g_limit);
  for (int n = 1; n <= fs.horizon; ++n) {
    Distribution fn = fs.generator(n);
    BVFunction gn = gs(n);
    UniformBVIndexRow row;
    row.f_gap = (fn - fs.claimed_limit).alexiewicz_norm(eps);
    PiecewiseFunction diff = gn.fn() - g_limit.fn();
    row.v_gap = variation(diff, eps);
    row.anchor_gap = (gn.fn().value(Point(anchor), eps) -
                      g_limit.fn().value(Point(anchor), eps))
                         .abs_value();
    row.g_sup_gap = diff.sup_norm(eps);
    row.product_gap = (integrate_by_parts(fn, gn) - target).abs_value();
    NormValue diff_bv = BVFunction(diff).bv_norm(eps);
    row.chain_bound =
        fn.alexiewicz_norm(eps) * diff_bv + row.f_gap * g_limit.bv_norm(eps);
    row.chain_holds = row.product_gap.lower() <= row.chain_bound.upper();
    rep.rows.push_back(std::move(row));
  }
  const auto& last = rep.rows.back();
  auto below = [&](const NormValue& v) { return v.upper() <= tolerance; };
  rep.hypotheses_met_at_horizon =
      below(last.f_gap) && below(last.v_gap) && below(last.anchor_gap);
  rep.conclusions_met_at_horizon =
      below(last.g_sup_gap) && below(last.product_gap);
  return rep;
}

struct DominatedIndexRow {
  bool dominated;                      // |f_n| <= dominator in the order
  std::vector<NormValue> probe_gaps;   // |F_n(x) - F(x)| on the probe grid
  NormValue boundary_gap;              // |F_n(inf) - F(inf)|
};

struct DominatedReport {
  std::vector<DominatedIndexRow> rows;
  bool all_dominated;
  bool probes_settle;        // every probe gap ends below tolerance
  bool boundary_settles;     // the condition at infinity holds at horizon
};

// Dominated-convergence evidence: order domination per index, pointwise
// primitive convergence on the probe grid plus the boundary at infinity.
// A false boundary_settles is the harness flagging the tau_n delta
// phenomenon: pointwise interior convergence with mass escaping to infinity.
inline DominatedReport dominated_check(const SequenceSpec& fs,
                                       const Distribution& dominator,
                                       std::vector<Rational> probes,
                                       const Rational& tolerance,
                                       const Rational& eps = kDefaultEps) {
  DominatedReport rep;
  rep.all_dominated = true;
  const PiecewiseFunction& lim_fn = fs.claimed_limit.primitive_fn();
  for (int n = 1; n <= fs.horizon; ++n) {
    Distribution fn = fs.generator(n);
    DominatedIndexRow row;
    row.dominated = leq(abs(fn), dominator);
    rep.all_dominated = rep.all_dominated && row.dominated;
    for (const auto& x : probes)
      row.probe_gaps.push_back(
          (fn.primitive_fn().value(Point(x), eps) - lim_fn.value(Point(x), eps))
              .abs_value());
    row.boundary_gap = NormValue::exact(
        rat_abs(fn.primitive_fn().right_tail() - lim_fn.right_tail()));
    rep.rows.push_back(std::move(row));
  }
  const auto& last = rep.rows.back();
  rep.probes_settle = true;
  for (const auto& v : last.probe_gaps)
    rep.probes_settle = rep.probes_settle && v.upper() <= tolerance;
  rep.boundary_settles = last.boundary_gap.upper() <= tolerance;
  return rep;
}

// Default probe grid: the breakpoints of every generated element plus the
// user's extra points; discontinuities are where the theorems bite.
inline std::vector<Rational> probe_grid(const SequenceSpec& s,
                                        std::vector<Rational> extra) {
  std::vector<Rational> g = std::move(extra);
  auto add_breaks = [&](const Distribution& d) {
    for (const auto& p : d.primitive_fn().breakpoints())
      if (is_rational(p)) g.push_back(as_rational(p));
  };
  add_breaks(s.claimed_limit);
  for (int n = 1; n <= s.horizon; ++n) add_breaks(s.generator(n));
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

}  // namespace rpi

#endif  // RPI_CONVERGENCE_HPP
