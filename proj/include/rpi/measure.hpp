#ifndef RPI_MEASURE_HPP
#define RPI_MEASURE_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rpi/lattice.hpp"
#include "rpi/product.hpp"

namespace rpi {

// A BV set: finite union of pairwise-disjoint intervals, kept sorted and
// coalesced.  chi_E of such a set is the representable slice of BV, which is
// exactly why the type stops at finite unions.
class BVSet {
 public:
  BVSet() = default;
  explicit BVSet(std::vector<IntervalSpec> components)
      : comps_(std::move(components)) {
    normalize();
  }

  static BVSet empty() { return BVSet(); }
  static BVSet whole_line() { return BVSet({IntervalSpec::whole_line()}); }

  const std::vector<IntervalSpec>& components() const { return comps_; }
  bool is_empty() const { return comps_.empty(); }

  bool contains(const Rational& x) const {
    for (const auto& I : comps_)
      if (I.contains(x)) return true;
    return false;
  }

  BVSet unite(const BVSet& o) const {
    std::vector<IntervalSpec> all = comps_;
    all.insert(all.end(), o.comps_.begin(), o.comps_.end());
    return BVSet(std::move(all));
  }

  BVSet complement() const {
    std::vector<IntervalSpec> out;
    ExtReal lo = ExtReal::neg_inf();
    bool lo_closed = false;
    for (const auto& I : comps_) {
      ExtReal hi = I.lower();
      bool hi_closed = hi.is_finite() && !I.lower_closed();
      if (lo < hi)
        out.push_back(IntervalSpec(lo, lo_closed, hi, hi_closed));
      else if (lo == hi && lo.is_finite() && lo_closed && hi_closed)
        out.push_back(IntervalSpec(lo, true, hi, true));
      lo = I.upper();
      lo_closed = lo.is_finite() && !I.upper_closed();
      if (lo.is_pos_inf()) return BVSet(std::move(out));
    }
    out.push_back(IntervalSpec(lo, lo_closed, ExtReal::pos_inf(), false));
    return BVSet(std::move(out));
  }

  BVSet intersect(const BVSet& o) const {
    return complement().unite(o.complement()).complement();
  }

  // chi_E as a piecewise constant function with exact membership values.
  PiecewiseFunction indicator() const {
    std::vector<Rational> endpoints;
    for (const auto& I : comps_) {
      if (I.lower().is_finite()) endpoints.push_back(I.lower().value());
      if (I.upper().is_finite()) endpoints.push_back(I.upper().value());
    }
    std::sort(endpoints.begin(), endpoints.end());
    endpoints.erase(std::unique(endpoints.begin(), endpoints.end()),
                    endpoints.end());
    if (endpoints.empty())
      return PiecewiseFunction::constant(Rational(is_empty() ? 0 : 1));
    detail::RegionBuilder b;
    b.region(Polynomial::constant(
        Rational(contains(endpoints.front() - 1) ? 1 : 0)));
    for (std::size_t i = 0; i < endpoints.size(); ++i) {
      b.boundary(Point(endpoints[i]),
                 Rational(contains(endpoints[i]) ? 1 : 0));
      Rational probe = i + 1 < endpoints.size()
                           ? Rational((endpoints[i] + endpoints[i + 1]) / 2)
                           : Rational(endpoints[i] + 1);
      b.region(Polynomial::constant(Rational(contains(probe) ? 1 : 0)));
    }
    return b.finish().canonicalized();
  }

  BVFunction indicator_bv() const { return BVFunction(indicator()); }

  bool operator==(const BVSet& o) const {
    return indicator().equals(o.indicator());
  }

  std::string to_string() const {
    if (comps_.empty()) return "{}";
    std::string s;
    for (std::size_t i = 0; i < comps_.size(); ++i) {
      if (i) s += " u ";
      s += comps_[i].to_string();
    }
    return s;
  }

  // "[0,1) u (2,3] u {5}" and "{}" forms.
  static BVSet parse(const std::string& text) {
    std::vector<IntervalSpec> comps;
    std::string body = text;
    if (body == "{}" || body.empty()) return BVSet();
    std::size_t pos = 0;
    while (pos < body.size()) {
      std::size_t next = body.find(" u ", pos);
      std::string tok = next == std::string::npos
                            ? body.substr(pos)
                            : body.substr(pos, next - pos);
      comps.push_back(IntervalSpec::parse(tok));
      if (next == std::string::npos) break;
      pos = next + 3;
    }
    return BVSet(std::move(comps));
  }

 private:
  // Sort by lower endpoint and coalesce overlapping/touching components.
  void normalize() {
    if (comps_.empty()) return;
    std::sort(comps_.begin(), comps_.end(),
              [](const IntervalSpec& a, const IntervalSpec& b) {
                if (a.lower() != b.lower()) return a.lower() < b.lower();
                return a.lower_closed() && !b.lower_closed();
              });
    std::vector<IntervalSpec> out;
    for (const auto& I : comps_) {
      if (out.empty()) {
        out.push_back(I);
        continue;
      }
      IntervalSpec& last = out.back();
      bool overlap;
      if (I.lower() < last.upper()) {
        overlap = true;
      } else if (I.lower() == last.upper()) {
        overlap = last.upper().is_finite() &&
                  (last.upper_closed() || I.lower_closed());
      } else {
        overlap = false;
      }
      if (!overlap) {
        out.push_back(I);
        continue;
      }
      // merge
      ExtReal hi = last.upper();
      bool hic = last.upper_closed();
      if (hi < I.upper()) {
        hi = I.upper();
        hic = I.upper_closed();
      } else if (hi == I.upper()) {
        hic = hic || I.upper_closed();
      }
      last = IntervalSpec(last.lower(), last.lower_closed(), hi, hic);
    }
    comps_ = std::move(out);
  }

  std::vector<IntervalSpec> comps_;
};

// nu_f(E) = integral of f chi_E over the line, evaluated through the
// product/integration-by-parts path so finite additivity is a genuine
// cross-module identity rather than a primitive-difference shortcut.
inline NormValue nu(const Distribution& f, const BVSet& E) {
  if (E.is_empty()) return NormValue::exact(Rational(0));
  return integrate_by_parts(f, E.indicator_bv());
}

struct FinitenessReport {
  NormValue total_variation;  // VF, the sup of |nu_f| over BV sets
  BVSet witness;              // union of maximal rising spans of F
  NormValue witness_value;    // nu_f(witness): the positive-variation part
  bool witness_exact;         // false when irrational slope changes forced
                              // rational surrogate endpoints
};

// In-class primitives always have bounded variation, so nu_f is always
// finite here; the report carries the bound and a witness attaining the
// positive variation.
inline FinitenessReport finiteness_report(const Distribution& f,
                                          const Rational& eps = kDefaultEps) {
  const PiecewiseFunction& F = f.primitive_fn();
  NormValue vf = variation(F, eps);

  // Walk movements of F left to right: piece slopes between sign changes and
  // jumps at breakpoints.  Collect maximal spans where every movement is up.
  struct Movement {
    Rational at_lo, at_hi;  // span of the movement
    int direction;          // sign of the change
    bool exact;
  };
  std::vector<Movement> moves;
  bool exact = true;
  std::size_t m = F.breakpoint_count();
  for (std::size_t i = 0; i < m; ++i) {
    // jump across breakpoint i (left limit -> right limit; the assigned
    // value does not move nu since single points are null for chi integrals
    // against continuous-at-the-point primitives, but the jump does)
    Rational lo_b, hi_b;
    if (is_rational(F.breakpoints()[i])) {
      lo_b = hi_b = as_rational(F.breakpoints()[i]);
    } else {
      exact = false;
      lo_b = point_lower_bound(F.breakpoints()[i]);
      hi_b = point_upper_bound(F.breakpoints()[i]);
    }
    NormValue jump = F.limit(F.breakpoints()[i], Side::Plus, eps) -
                     F.limit(F.breakpoints()[i], Side::Minus, eps);
    int s;
    if (jump.is_exact())
      s = sign(jump.center());
    else
      s = sign_at_point(F.poly_after(i) - F.poly_before(i), F.breakpoints()[i]);
    if (s != 0) moves.push_back({lo_b, hi_b, s, is_rational(F.breakpoints()[i])});
    if (i + 1 < m) {
      const Polynomial& p = F.pieces()[i];
      if (p.degree() <= 0) continue;
      std::vector<Point> nodes;
      nodes.push_back(F.breakpoints()[i]);
      if (p.degree() >= 2)
        for (auto& r : isolate_roots_open(p.derivative(), F.breakpoints()[i],
                                          F.breakpoints()[i + 1]))
          nodes.push_back(std::move(r));
      nodes.push_back(F.breakpoints()[i + 1]);
      for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        Rational probe = rational_between(nodes[k], nodes[k + 1]);
        int ds = sign(p.derivative().eval(probe));
        if (ds == 0) continue;
        bool seg_exact = is_rational(nodes[k]) && is_rational(nodes[k + 1]);
        if (!seg_exact) exact = false;
        moves.push_back({point_upper_bound(nodes[k]),
                         point_lower_bound(nodes[k + 1]), ds, seg_exact});
      }
    }
  }

  // Merge consecutive rising movements into closed witness components.
  std::vector<IntervalSpec> comps;
  std::optional<Rational> open_lo;
  Rational cur_hi;
  for (const auto& mv : moves) {
    if (mv.direction > 0) {
      if (!open_lo) open_lo = mv.at_lo;
      cur_hi = mv.at_hi;
    } else if (open_lo) {
      comps.push_back(IntervalSpec::closed(*open_lo, cur_hi));
      open_lo.reset();
    }
  }
  if (open_lo) comps.push_back(IntervalSpec::closed(*open_lo, cur_hi));
  BVSet witness(std::move(comps));
  NormValue wv = witness.is_empty() ? NormValue::exact(Rational(0))
                                    : nu(f, witness);
  return {vf, witness, wv, exact};
}

}  // namespace rpi

#endif  // RPI_MEASURE_HPP
