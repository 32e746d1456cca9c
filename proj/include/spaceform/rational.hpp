#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace spaceform {

// Exact rational scalar. Canonical (lowest terms, positive denominator)
// after every helper in this header; raw mpq_class construction must call
// canonicalize() before mixing with these.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Accepts "p/q", "p", and decimal literals like "-0.25".
Rational rational_from_string(const std::string& text);

std::string rational_to_string(const Rational& r);

inline double to_double(const Rational& r) { return r.get_d(); }

// Exact conversion: every finite double is a dyadic rational.
inline Rational rational_from_double_exact(double x) { return Rational(x); }

bool fits_long(const Rational& r);
long rational_num_long(const Rational& r);
long rational_den_long(const Rational& r);

// True iff r is the square of a rational.
bool is_rational_square(const Rational& r);
// Exact square root; pre: is_rational_square(r).
Rational rational_sqrt(const Rational& r);

// Bounded continued-fraction reconstruction: best p/q with q <= max_denominator.
// Returns the rational only if |x - p/q| <= tol; otherwise nullopt.
std::optional<Rational> rationalize(double x, long max_denominator, double tol);

}  // namespace spaceform
