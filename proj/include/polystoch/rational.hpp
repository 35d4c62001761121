#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace polystoch {

// All matrix entries, weights and permanent values are exact rationals.
// GMP keeps them canonical (lowest terms, positive denominator) as long as
// every value is canonicalized on construction; arithmetic preserves it.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational: zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Accepts "p", "-p", "p/q" with arbitrary-precision p, q.
inline Rational rational_from_string(std::string_view s) {
    Rational q;
    if (q.set_str(std::string(s), 10) != 0)
        throw std::invalid_argument("rational: cannot parse '" + std::string(s) + "'");
    if (q.get_den() == 0) throw std::invalid_argument("rational: zero denominator in '" + std::string(s) + "'");
    q.canonicalize();
    return q;
}

// "p" when integral, "p/q" otherwise.
inline std::string to_string(const Rational& q) {
    return q.get_str();
}

inline bool is_integral(const Rational& q) {
    return q.get_den() == 1;
}

inline Integer factorial(unsigned n) {
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
}

inline Integer pow_int(const Integer& base, unsigned long exp) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

} // namespace polystoch
