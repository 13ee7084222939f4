#pragma once

#include <string>

#include "germflow/polynomial.hpp"

namespace germflow {

/// Parse the textual polynomial format: a signed sum of terms, each a
/// '*'-separated product of a coefficient and variable powers, e.g.
///
///   3 * x1^2 * x2 - 0.5 * x2^3
///   x^3 + y^6
///   (0, 1) * z^2          (complex coefficient as a (re, im) pair)
///
/// Variables are x1..xn; the aliases x,y,z,w name x1..x4. With nvars = 0 the
/// arity is inferred from the highest index used. Throws ParseError with a
/// 1-based line/column on malformed input.
Polynomial parse_polynomial(const std::string& text, int nvars = 0);

/// Canonical printer; parse_polynomial round-trips its output exactly.
std::string print_polynomial(const Polynomial& p);

}  // namespace germflow
