#pragma once

// Exact rational scalars. Arithmetic is GMP's mpq_class; this header adds
// parsing/printing in the "p/q" and decimal forms used by the file format.

#include <gmpxx.h>

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dualdepth {

using Rational = mpq_class;
using RVec = std::vector<Rational>;

/// Thrown by parse_rational on malformed text.
class RationalSyntaxError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Parses "p", "p/q", or a decimal with optional exponent ("-1.25e-3")
/// into an exact rational. Decimals are converted exactly, not via double.
Rational parse_rational(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& q);

/// Nearest-below double view (GMP truncation, within one ulp).
inline double to_double(const Rational& q) { return q.get_d(); }

/// Exact value of a finite double.
Rational from_double(double v);

inline int sign(const Rational& q) { return sgn(q); }

Rational dot(std::span<const Rational> a, std::span<const Rational> b);

std::vector<double> to_doubles(std::span<const Rational> v);
RVec from_doubles(std::span<const double> v);

/// Lexicographic comparison of equal-length exact vectors.
bool lex_less(std::span<const Rational> a, std::span<const Rational> b);

}  // namespace dualdepth
