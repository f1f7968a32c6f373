#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace ksba {

// All arithmetic in this library is exact: arbitrary-precision integers and
// rationals, no floating point anywhere.
using Int = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Int &num, const Int &den) {
    if (den == 0)
        throw std::domain_error("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Rational make_rational(long num, long den = 1) {
    return make_rational(Int(num), Int(den));
}

// Serialized form is "p" or "p/q" with q > 0 and gcd(p,q) = 1.
inline std::string rational_to_string(const Rational &r) {
    if (r.get_den() == 1)
        return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Rational rational_from_string(const std::string &s) {
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos)
            return make_rational(Int(s), Int(1));
        return make_rational(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
    } catch (const std::invalid_argument &) {
        throw std::domain_error("malformed rational: " + s);
    }
}

} // namespace ksba
