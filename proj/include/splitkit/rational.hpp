#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace splitkit {

/// Exact arbitrary-precision rational, the coefficient field for all
/// symbolic computations. GMP canonicalizes on construction/assignment.
using Rational = mpq_class;

/// Exact value of a finite double (every finite double is a dyadic rational).
/// Throws std::invalid_argument on NaN/inf.
Rational rational_from_double(double x);

double to_double(const Rational &q);

/// Parses "p/q", an integer string, or a plain decimal such as "-0.125"
/// (decimals are read exactly in base 10, not via double round-trip).
Rational rational_from_string(const std::string &text);

/// Canonical form: "p" or "p/q" with q > 1 and gcd(p,q)=1.
std::string to_string(const Rational &q);

/// Best continued-fraction convergent of x with denominator <= max_den.
/// nullopt if x is not finite.
std::optional<Rational> rationalize(double x, unsigned long max_den);

/// The rational with smallest denominator (ties: smallest |numerator|)
/// in the closed interval [lo, hi]. Requires lo <= hi.
Rational simplest_in_interval(const Rational &lo, const Rational &hi);

inline int sign(const Rational &q) { return sgn(q); }

} // namespace splitkit
