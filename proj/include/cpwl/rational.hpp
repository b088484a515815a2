#pragma once
// Exact rational scalars ("p/q" strings at every boundary) and the error
// taxonomy shared by the whole library.

#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>
#include <string>

namespace cpwl {

using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;

/// Malformed input: bad rational syntax, unknown field, dimension mismatch.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A stated mathematical precondition failed (point outside the domain,
/// vector not a subgradient, non-stationary tilt, size cap exceeded, ...).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two routes that must agree by theorem disagreed. Never a valid state;
/// signals an implementation bug.
class InternalCheckError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Parses "p/q" or "p" with arbitrary-precision integers, q > 0 after sign
/// normalization. Anything else (decimals, spaces, empty parts) is rejected.
inline Rat parse_rat(const std::string& text) {
  auto fail = [&]() -> Rat {
    throw ParseError("malformed rational '" + text + "' (expected \"p\" or \"p/q\")");
  };
  if (text.empty()) return fail();
  std::size_t slash = text.find('/');
  std::string num = text.substr(0, slash == std::string::npos ? text.size() : slash);
  std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  auto digits_ok = [](const std::string& s, bool sign_allowed) {
    if (s.empty()) return false;
    std::size_t i = 0;
    if (sign_allowed && s[0] == '-') i = 1;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  if (!digits_ok(num, true) || !digits_ok(den, true)) return fail();
  Int n(num), d(den);
  if (d == 0) throw ParseError("zero denominator in rational '" + text + "'");
  return Rat(n, d);  // canonicalized by the backend
}

/// Canonical "p/q" / "p" form (denominator positive, fraction reduced).
inline std::string rat_str(const Rat& q) { return q.str(); }

}  // namespace cpwl
