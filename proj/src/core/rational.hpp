#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace ggt {

using Rational = mpq_class;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  Rational q(mpz_class(std::to_string(num)), mpz_class(std::to_string(den)));
  q.canonicalize();
  return q;
}

/// Canonical text form: "a/b", or "a" when the denominator is 1.
inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Accepts "a", "a/b" and finite decimals such as "0.25".
Rational parse_rational(const std::string& text);

inline double to_double(const Rational& q) { return q.get_d(); }

/// Largest integer m with m*m <= q (q >= 0).
mpz_class floor_sqrt(const Rational& q);

}  // namespace ggt
