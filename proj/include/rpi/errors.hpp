#ifndef RPI_ERRORS_HPP
#define RPI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rpi {

// Error taxonomy shared by the library and the CLI.  Each class maps to a
// distinct process exit code (see cli.hpp).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input text: bad rational, bad document, bad interval expression.
// Carries a stable machine code plus a source location (field path or
// quoted snippet) when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::string where = "",
             std::string code = "parse")
      : Error(where.empty() ? what : what + " (at " + where + ")"),
        where_(std::move(where)),
        code_(std::move(code)) {}
  const std::string& where() const { return where_; }
  const std::string& code() const { return code_; }

 private:
  std::string where_;
  std::string code_;
};

// A call violated a documented precondition (e.g. split point outside the
// interval, non-compact test function, eps <= 0).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// An iteration budget was exhausted before a sign/order/enclosure could be
// decided.  Never silently degraded into an approximation.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Degenerate input where no meaningful answer exists (zero polynomial root
// isolation and friends).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

}  // namespace rpi

#endif  // RPI_ERRORS_HPP
