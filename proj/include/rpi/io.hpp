#ifndef RPI_IO_HPP
#define RPI_IO_HPP

#include <json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rpi/bv.hpp"
#include "rpi/distribution.hpp"

namespace rpi {

using Json = nlohmann::ordered_json;

enum class DocumentKind { Regulated, BV, DistributionPrimitive };

inline std::string kind_to_string(DocumentKind k) {
  switch (k) {
    case DocumentKind::Regulated: return "regulated";
    case DocumentKind::BV: return "bv";
    default: return "distribution-primitive";
  }
}

inline DocumentKind kind_from_string(const std::string& s) {
  if (s == "regulated") return DocumentKind::Regulated;
  if (s == "bv") return DocumentKind::BV;
  if (s == "distribution-primitive") return DocumentKind::DistributionPrimitive;
  throw ParseError("unknown document kind '" + s + "'", "kind", "bad-kind");
}

struct FunctionDocument {
  DocumentKind kind = DocumentKind::Regulated;
  PiecewiseFunction fn;
  std::string name;
  std::string description;
};

namespace detail {

inline Rational doc_rational(const Json& j, const std::string& where) {
  if (!j.is_string())
    throw ParseError("rationals must be strings", where, "bad-rational");
  return rat_parse(j.get<std::string>(), where);
}

}  // namespace detail

// Parses the structured function description.  Breakpoints are rational by
// construction: the ingestion format never creates algebraic points.
inline FunctionDocument parse_function_document(const Json& doc) {
  if (!doc.is_object())
    throw ParseError("document must be an object", "", "bad-document");
  FunctionDocument out;
  if (doc.contains("kind"))
    out.kind = kind_from_string(doc.at("kind").get<std::string>());
  if (doc.contains("name") && doc.at("name").is_string())
    out.name = doc.at("name").get<std::string>();
  if (doc.contains("description") && doc.at("description").is_string())
    out.description = doc.at("description").get<std::string>();

  auto arr = [&](const char* key) -> const Json& {
    static const Json empty = Json::array();
    if (!doc.contains(key)) return empty;
    const Json& a = doc.at(key);
    if (!a.is_array())
      throw ParseError(std::string(key) + " must be an array", key,
                       "bad-document");
    return a;
  };
  const Json& bps = arr("breakpoints");
  const Json& vals = arr("values_at");
  const Json& pieces = arr("pieces");

  std::size_t m = bps.size();
  if (vals.size() != m)
    throw ParseError("values_at length must match breakpoints", "values_at",
                     "length-mismatch");
  if (m == 0 ? !pieces.empty() : pieces.size() != m - 1)
    throw ParseError("pieces length must be breakpoints - 1", "pieces",
                     "length-mismatch");

  Rational left_tail(0), right_tail(0);
  if (doc.contains("left_tail"))
    left_tail = detail::doc_rational(doc.at("left_tail"), "left_tail");
  if (doc.contains("right_tail"))
    right_tail = detail::doc_rational(doc.at("right_tail"), "right_tail");
  if (m == 0 && doc.contains("right_tail") != doc.contains("left_tail"))
    throw ParseError("constant function needs matching tails", "right_tail",
                     "bad-document");

  std::vector<Point> xs;
  std::vector<std::optional<Rational>> values;
  std::vector<Polynomial> ps;
  Rational prev;
  for (std::size_t i = 0; i < m; ++i) {
    std::string where = "breakpoints[" + std::to_string(i) + "]";
    Rational x = detail::doc_rational(bps.at(i), where);
    if (i > 0 && !(prev < x))
      throw ParseError("breakpoints must be strictly increasing", where,
                       "non-increasing-breakpoints");
    prev = x;
    xs.emplace_back(std::move(x));
    values.push_back(detail::doc_rational(
        vals.at(i), "values_at[" + std::to_string(i) + "]"));
  }
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const Json& pj = pieces.at(i);
    std::string where = "pieces[" + std::to_string(i) + "]";
    if (!pj.is_array())
      throw ParseError("each piece is a coefficient array", where,
                       "bad-document");
    std::vector<Rational> coeffs;
    for (std::size_t k = 0; k < pj.size(); ++k)
      coeffs.push_back(detail::doc_rational(
          pj.at(k), where + "[" + std::to_string(k) + "]"));
    ps.emplace_back(std::move(coeffs));
  }
  try {
    out.fn = PiecewiseFunction(std::move(xs), std::move(values), std::move(ps),
                               left_tail, m == 0 ? left_tail : right_tail);
  } catch (const PreconditionError& e) {
    throw ParseError(e.what(), "", "bad-document");
  }
  return out;
}

inline FunctionDocument parse_function_document(const std::string& text) {
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded())
    throw ParseError("invalid JSON", "", "bad-json");
  return parse_function_document(doc);
}

inline Json serialize_rational(const Rational& q) { return rat_to_string(q); }

inline Json serialize_norm_value(const NormValue& v) {
  if (v.is_exact()) return Json{{"value", rat_to_string(v.center())}};
  return Json{{"value",
               Json{{"center", rat_to_string(v.center())},
                    {"radius", rat_to_string(v.radius())}}}};
}

// Canonical document of a piecewise function.  Algebraic breakpoints (from
// lattice/extremum results) serialize as defining-polynomial + isolator
// objects with a null stored value; rational-breakpoint functions round-trip
// losslessly through parse.
inline Json serialize_function(const PiecewiseFunction& f, DocumentKind kind,
                               const std::string& name = "",
                               const std::string& description = "") {
  PiecewiseFunction c = f.canonicalized();
  Json doc;
  doc["kind"] = kind_to_string(kind);
  if (!name.empty()) doc["name"] = name;
  if (!description.empty()) doc["description"] = description;
  Json bps = Json::array();
  Json vals = Json::array();
  for (std::size_t i = 0; i < c.breakpoint_count(); ++i) {
    const Point& x = c.breakpoints()[i];
    if (is_rational(x)) {
      bps.push_back(rat_to_string(as_rational(x)));
      vals.push_back(rat_to_string(*c.stored_values()[i]));
    } else {
      const auto& a = std::get<AlgebraicPoint>(x);
      Json defining = Json::array();
      for (const auto& co : a.defining().coefficients())
        defining.push_back(rat_to_string(co));
      bps.push_back(Json{{"defining", defining},
                         {"isolator", Json::array({rat_to_string(a.lo()),
                                                   rat_to_string(a.hi())})}});
      vals.push_back(nullptr);
    }
  }
  Json pieces = Json::array();
  for (const auto& p : c.pieces()) {
    Json coeffs = Json::array();
    for (const auto& co : p.coefficients()) coeffs.push_back(rat_to_string(co));
    pieces.push_back(coeffs);
  }
  doc["breakpoints"] = bps;
  doc["values_at"] = vals;
  doc["pieces"] = pieces;
  doc["left_tail"] = rat_to_string(c.left_tail());
  doc["right_tail"] = rat_to_string(c.right_tail());
  return doc;
}

// ---------------------------------------------------------------------------
// Indexed sequence documents: rational expressions over 'n'
// ---------------------------------------------------------------------------

namespace detail {

// Tiny recursive-descent evaluator: integers, 'n', + - * /, parentheses.
class IndexExpression {
 public:
  IndexExpression(const std::string& text, const std::string& where)
      : s_(text), pos_(0), where_(where) {
    skip();
  }

  static Rational evaluate(const std::string& text, int n,
                           const std::string& where) {
    IndexExpression e(text, where);
    Rational v = e.expr(n);
    e.skip();
    if (e.pos_ != e.s_.size())
      throw ParseError("trailing characters in expression", where,
                       "bad-expression");
    return v;
  }

 private:
  Rational expr(int n) {
    Rational v = term(n);
    while (true) {
      skip();
      if (peek() == '+') {
        ++pos_;
        v += term(n);
      } else if (peek() == '-') {
        ++pos_;
        v -= term(n);
      } else {
        return v;
      }
    }
  }
  Rational term(int n) {
    Rational v = factor(n);
    while (true) {
      skip();
      if (peek() == '*') {
        ++pos_;
        v *= factor(n);
      } else if (peek() == '/') {
        ++pos_;
        Rational d = factor(n);
        if (d == 0)
          throw ParseError("division by zero in expression", where_,
                           "bad-expression");
        v /= d;
      } else {
        return v;
      }
    }
  }
  Rational factor(int n) {
    skip();
    char c = peek();
    if (c == '-') {
      ++pos_;
      return -factor(n);
    }
    if (c == '(') {
      ++pos_;
      Rational v = expr(n);
      skip();
      if (peek() != ')')
        throw ParseError("missing ')'", where_, "bad-expression");
      ++pos_;
      return v;
    }
    if (c == 'n') {
      ++pos_;
      return Rational(n);
    }
    if (c >= '0' && c <= '9') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') ++pos_;
      return Rational(Integer(s_.substr(start, pos_ - start)));
    }
    throw ParseError("unexpected character in expression", where_,
                     "bad-expression");
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  std::string s_;
  std::size_t pos_;
  std::string where_;
};

}  // namespace detail

// Instantiates a parameterized function document at index n: every rational
// string may be an expression over 'n'.
inline PiecewiseFunction instantiate_indexed_document(const Json& doc, int n) {
  Json concrete = doc;
  std::function<void(Json&, const std::string&)> walk =
      [&](Json& j, const std::string& where) {
        if (j.is_string()) {
          Rational v =
              detail::IndexExpression::evaluate(j.get<std::string>(), n, where);
          j = rat_to_string(v);
        } else if (j.is_array()) {
          for (std::size_t i = 0; i < j.size(); ++i)
            walk(j.at(i), where + "[" + std::to_string(i) + "]");
        }
      };
  for (const char* key : {"breakpoints", "values_at", "pieces", "left_tail",
                          "right_tail"}) {
    if (concrete.contains(key)) walk(concrete.at(key), key);
  }
  // Indexed breakpoints may collide or reorder for particular n; rebuild in
  // sorted order with last-value-wins would hide mistakes, so reject instead.
  return parse_function_document(concrete).fn;
}

struct SequenceDocument {
  Json generator;  // parameterized function document
  FunctionDocument limit;
  int horizon = 20;
};

inline SequenceDocument parse_sequence_document(const Json& doc) {
  if (!doc.is_object() || !doc.contains("generator") || !doc.contains("limit"))
    throw ParseError("sequence document needs generator and limit", "",
                     "bad-document");
  SequenceDocument out;
  out.generator = doc.at("generator");
  out.limit = parse_function_document(doc.at("limit"));
  if (doc.contains("horizon")) {
    if (!doc.at("horizon").is_number_integer())
      throw ParseError("horizon must be an integer", "horizon", "bad-document");
    out.horizon = doc.at("horizon").get<int>();
    if (out.horizon < 1)
      throw ParseError("horizon must be >= 1", "horizon", "bad-document");
  }
  return out;
}

}  // namespace rpi

#endif  // RPI_IO_HPP
