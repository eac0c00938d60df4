#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace oista {

/// Exact arbitrary-precision rational scalar.
using Rational = mpq_class;

inline int sign(const Rational& q) { return sgn(q); }

inline Rational pow_rational(const Rational& base, std::uint32_t exp) {
    Rational out(1);
    Rational b = base;
    std::uint32_t e = exp;
    while (e > 0) {
        if (e & 1u) out *= b;
        b *= b;
        e >>= 1u;
    }
    return out;
}

/// Canonical "p" or "p/q" rendering.
inline std::string to_string(const Rational& q) {
    Rational c = q;
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

/// Parses "p", "p/q", or a plain decimal like "-0.25" into an exact rational.
Rational parse_rational(const std::string& text);

} // namespace oista
