#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nij {

/// Exact rational number; GMP keeps it normalized with a positive denominator.
using Scalar = mpq_class;
using Vector = std::vector<Scalar>;

class ScalarFormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size()) return false;
  for (std::size_t i = start; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

inline mpz_class parse_integer(std::string_view s) {
  std::string text(s);
  if (!text.empty() && text[0] == '+') text.erase(0, 1);
  return mpz_class(text, 10);
}

}  // namespace detail

/// Parses "p", "-p" or "p/q" (q nonzero); the result is normalized.
inline Scalar parse_scalar(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (!detail::is_integer_literal(text))
      throw ScalarFormatError("malformed scalar '" + std::string(text) + "'");
    return Scalar(detail::parse_integer(text));
  }
  auto num = text.substr(0, slash);
  auto den = text.substr(slash + 1);
  if (!detail::is_integer_literal(num) || !detail::is_integer_literal(den) || den[0] == '-' ||
      den[0] == '+')
    throw ScalarFormatError("malformed scalar '" + std::string(text) + "'");
  mpz_class d = detail::parse_integer(den);
  if (d == 0) throw ScalarFormatError("zero denominator in scalar '" + std::string(text) + "'");
  Scalar q(detail::parse_integer(num), d);
  q.canonicalize();
  return q;
}

/// Shortest text form: "p" for integers, "p/q" otherwise.
inline std::string format_scalar(const Scalar& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline bool is_zero(const Scalar& q) { return sgn(q) == 0; }

inline bool fits_int64(const Scalar& q) {
  return q.get_den() == 1 && q.get_num().fits_slong_p();
}

inline bool all_zero(const Vector& v) {
  for (const auto& x : v)
    if (!is_zero(x)) return false;
  return true;
}

}  // namespace nij
