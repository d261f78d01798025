#ifndef RPI_LATTICE_HPP
#define RPI_LATTICE_HPP

#include <utility>
#include <vector>

#include "rpi/distribution.hpp"

namespace rpi {

// Partial order on A_R through primitives: f <= g iff F(x) <= G(x) for all
// real x.  Decided exactly, piece by piece: the sign of G - F on each region
// via root isolation, plus breakpoint and tail values.
inline bool leq(const Distribution& f, const Distribution& g) {
  PiecewiseFunction d = g.primitive_fn() - f.primitive_fn();
  if (d.left_tail() < 0 || d.right_tail() < 0) return false;
  for (std::size_t i = 0; i < d.breakpoint_count(); ++i) {
    const auto& v = d.stored_values()[i];
    if (v) {
      if (*v < 0) return false;
    } else if (sign_at_point(d.poly_before(i), d.breakpoints()[i]) < 0) {
      return false;
    }
  }
  for (std::size_t i = 0; i + 1 < d.breakpoint_count(); ++i) {
    const Polynomial& p = d.pieces()[i];
    if (p.is_constant()) {
      if (p.coeff(0) < 0) return false;
      continue;
    }
    const Point& u = d.breakpoints()[i];
    const Point& w = d.breakpoints()[i + 1];
    // sign on each root-free span; roots themselves sit at zero
    std::vector<Point> cuts = isolate_roots_open(p, u, w);
    std::vector<const Point*> bounds;
    bounds.push_back(&u);
    for (auto& c : cuts) bounds.push_back(&c);
    bounds.push_back(&w);
    for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
      Rational probe = rational_between(*bounds[s], *bounds[s + 1]);
      if (p.eval(probe) < 0) return false;
    }
  }
  return true;
}

inline bool geq(const Distribution& f, const Distribution& g) {
  return leq(g, f);
}

inline Distribution join(const Distribution& f, const Distribution& g) {
  return Distribution(
      BRFunction(pointwise_max(f.primitive_fn(), g.primitive_fn())));
}

inline Distribution meet(const Distribution& f, const Distribution& g) {
  return Distribution(
      BRFunction(pointwise_min(f.primitive_fn(), g.primitive_fn())));
}

// |f| has primitive |F| = max(F, -F); pointwise max preserves left
// continuity, so the result is a genuine member of A_R.
inline Distribution abs(const Distribution& f) {
  return Distribution(
      BRFunction(pointwise_max(f.primitive_fn(), -f.primitive_fn())));
}

inline Distribution pos_part(const Distribution& f) {
  return Distribution(BRFunction(
      pointwise_max(f.primitive_fn(), PiecewiseFunction::zero())));
}

inline Distribution neg_part(const Distribution& f) {
  return Distribution(BRFunction(
      pointwise_max(-f.primitive_fn(), PiecewiseFunction::zero())));
}

struct JordanDecomposition {
  Distribution positive;
  Distribution negative;
};

inline JordanDecomposition jordan(const Distribution& f) {
  return {pos_part(f), neg_part(f)};
}

// Order transfer for raw regulated functions: G' <= H' iff the normalized
// primitives are pointwise ordered.
inline bool derivative_leq(const PiecewiseFunction& G,
                           const PiecewiseFunction& H) {
  return leq(Distribution::from_primitive(G), Distribution::from_primitive(H));
}

}  // namespace rpi

#endif  // RPI_LATTICE_HPP
