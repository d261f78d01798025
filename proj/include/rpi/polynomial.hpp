#ifndef RPI_POLYNOMIAL_HPP
#define RPI_POLYNOMIAL_HPP

#include <algorithm>
#include <initializer_list>
#include <utility>
#include <vector>

#include "rpi/rational.hpp"

namespace rpi {

// Dense univariate polynomial over the rationals, coefficients ascending.
// The zero polynomial has an empty coefficient vector; otherwise the leading
// coefficient is nonzero.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
    trim();
  }
  Polynomial(std::initializer_list<Rational> coeffs)
      : c_(coeffs) {
    trim();
  }

  static Polynomial zero() { return Polynomial(); }
  static Polynomial constant(const Rational& a) {
    return Polynomial(std::vector<Rational>{a});
  }
  // x
  static Polynomial identity() {
    return Polynomial(std::vector<Rational>{Rational(0), Rational(1)});
  }
  static Polynomial monomial(std::size_t degree, const Rational& coeff) {
    std::vector<Rational> c(degree + 1, Rational(0));
    c[degree] = coeff;
    return Polynomial(std::move(c));
  }

  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }

  const std::vector<Rational>& coefficients() const { return c_; }
  Rational coeff(std::size_t i) const {
    return i < c_.size() ? c_[i] : Rational(0);
  }
  const Rational& leading() const { return c_.back(); }

  Rational eval(const Rational& x) const {
    Rational r(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
    return r;
  }

  // Rigorous hull of p([lo,hi]) by interval Horner.  Not tight, but valid;
  // callers shrink the argument interval when they need sharper bounds.
  std::pair<Rational, Rational> eval_interval(const Rational& lo,
                                              const Rational& hi) const {
    Rational rlo(0), rhi(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      // [rlo,rhi] * [lo,hi]
      Rational p1 = rlo * lo, p2 = rlo * hi, p3 = rhi * lo, p4 = rhi * hi;
      Rational mlo = rat_min(rat_min(p1, p2), rat_min(p3, p4));
      Rational mhi = rat_max(rat_max(p1, p2), rat_max(p3, p4));
      rlo = mlo + *it;
      rhi = mhi + *it;
    }
    return {rlo, rhi};
  }

  // Upper bound for sup |p| on [lo,hi].
  Rational abs_bound(const Rational& lo, const Rational& hi) const {
    auto [a, b] = eval_interval(lo, hi);
    return rat_max(rat_abs(a), rat_abs(b));
  }

  int sign_at(const Rational& x) const { return sign(eval(x)); }

  Polynomial derivative() const {
    if (c_.size() <= 1) return Polynomial();
    std::vector<Rational> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * Rational(i);
    return Polynomial(std::move(d));
  }

  // Antiderivative with zero constant term.
  Polynomial antiderivative() const {
    if (c_.empty()) return Polynomial();
    std::vector<Rational> a(c_.size() + 1, Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i)
      a[i + 1] = c_[i] / Rational(i + 1);
    return Polynomial(std::move(a));
  }

  // p(a*x + b); degree-1 (or constant) argument keeps the result polynomial.
  Polynomial compose_linear(const Rational& a, const Rational& b) const {
    Polynomial result;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      result = result * Polynomial({b, a}) + Polynomial::constant(*it);
    }
    return result;
  }

  Polynomial operator-() const {
    std::vector<Rational> r(c_);
    for (auto& x : r) x = -x;
    return Polynomial(std::move(r));
  }

  Polynomial operator+(const Polynomial& o) const {
    std::vector<Rational> r(std::max(c_.size(), o.c_.size()), Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return Polynomial(std::move(r));
  }

  Polynomial operator-(const Polynomial& o) const { return *this + (-o); }

  Polynomial operator*(const Polynomial& o) const {
    if (is_zero() || o.is_zero()) return Polynomial();
    std::vector<Rational> r(c_.size() + o.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i)
      for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return Polynomial(std::move(r));
  }

  Polynomial scaled(const Rational& k) const {
    std::vector<Rational> r(c_);
    for (auto& x : r) x *= k;
    return Polynomial(std::move(r));
  }

  bool operator==(const Polynomial& o) const { return c_ == o.c_; }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  // Euclidean division: returns (quotient, remainder).
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const {
    if (d.is_zero()) throw DegenerateInputError("polynomial division by zero");
    std::vector<Rational> rem = c_;
    std::vector<Rational> quot;
    int dd = d.degree();
    while (static_cast<int>(rem.size()) - 1 >= dd) {
      int rd = static_cast<int>(rem.size()) - 1;
      Rational factor = rem.back() / d.leading();
      int shift = rd - dd;
      if (static_cast<int>(quot.size()) < shift + 1)
        quot.resize(shift + 1, Rational(0));
      quot[shift] += factor;
      for (int i = 0; i <= dd; ++i) rem[shift + i] -= factor * d.c_[i];
      while (!rem.empty() && rem.back() == 0) rem.pop_back();
      if (rem.empty()) break;
    }
    return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
  }

  // Monic gcd.
  static Polynomial gcd(Polynomial a, Polynomial b) {
    while (!b.is_zero()) {
      Polynomial r = a.divmod(b).second;
      a = std::move(b);
      b = std::move(r);
    }
    if (a.is_zero()) return a;
    return a.scaled(Rational(1) / a.leading());
  }

  // Largest square-free divisor: p / gcd(p, p').
  Polynomial squarefree_part() const {
    if (degree() <= 1) return *this;
    Polynomial g = gcd(*this, derivative());
    if (g.degree() < 1) return *this;
    return divmod(g).first;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<Rational> c_;
};

// Sturm chain of the square-free part; shared by root counting and isolation.
inline std::vector<Polynomial> sturm_chain(const Polynomial& p) {
  std::vector<Polynomial> chain;
  if (p.is_zero()) return chain;
  chain.push_back(p);
  Polynomial d = p.derivative();
  if (d.is_zero()) return chain;
  chain.push_back(d);
  while (true) {
    const Polynomial& a = chain[chain.size() - 2];
    const Polynomial& b = chain.back();
    Polynomial r = a.divmod(b).second;
    if (r.is_zero()) break;
    // Normalize to keep coefficient growth in check; sign pattern only
    // depends on the sign of the remainder.
    r = r.scaled(Rational(1) / rat_abs(r.leading()));
    chain.push_back(-r);
  }
  return chain;
}

inline int sturm_sign_variations(const std::vector<Polynomial>& chain,
                                 const Rational& x) {
  int variations = 0;
  int last = 0;
  for (const auto& p : chain) {
    int s = p.sign_at(x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++variations;
    last = s;
  }
  return variations;
}

// Number of distinct real roots of the square-free p in (lo, hi], requiring
// p(lo) != 0.
inline int sturm_count(const std::vector<Polynomial>& chain, const Rational& lo,
                       const Rational& hi) {
  return sturm_sign_variations(chain, lo) - sturm_sign_variations(chain, hi);
}

// Cauchy bound: all real roots lie in [-B, B].
inline Rational root_bound(const Polynomial& p) {
  if (p.degree() < 1) return Rational(1);
  Rational m(0);
  for (int i = 0; i < p.degree(); ++i)
    m = rat_max(m, rat_abs(p.coeff(i) / p.leading()));
  return m + 1;
}

}  // namespace rpi

#endif  // RPI_POLYNOMIAL_HPP
