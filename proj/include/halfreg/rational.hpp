#pragma once

#include <gmpxx.h>

#include <string>

namespace halfreg {

// Exact probability arithmetic. Every proposal probability is a product of
// small reciprocals, so rationals stay short and ratio comparisons are exact.
using Rational = mpq_class;

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline Rational fraction(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational reciprocal(long count) { return fraction(1, count); }

}  // namespace halfreg
